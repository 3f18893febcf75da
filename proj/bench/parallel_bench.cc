// Copyright 2026 The wordweight Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Serial reference vs OpenMP kernels on the seed-7 corpus.

#include <benchmark/benchmark.h>

#include "wordweight/attribution.h"
#include "wordweight/corpus.h"
#include "wordweight/encoder.h"
#include "wordweight/infostats.h"
#include "wordweight/rng.h"

namespace wordweight {
namespace {

const corpus::LoadedCorpus& Corpus() {
  static const corpus::LoadedCorpus c = [] {
    corpus::GeneratorParams p;
    p.seed = 7;
    return corpus::GenerateCorpus(p);
  }();
  return c;
}

const encoder::EncoderParams& Mlp() {
  static const encoder::EncoderParams p = [] {
    encoder::InitOptions o;
    o.pooler = encoder::Pooler::kMlp;
    o.seed = 7;
    o.frame_with_specials = true;
    return encoder::InitEncoder(Corpus().vocab.size(), o);
  }();
  return p;
}

void BM_QuantitiesSerial(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(infostats::QuantitiesTableSerial(Corpus().corpus, Corpus().vocab));
  }
}
void BM_QuantitiesParallel(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(infostats::QuantitiesTable(Corpus().corpus, Corpus().vocab));
  }
}

template <bool kParallel>
void BM_ShapleyExact(benchmark::State& state) {
  const encoder::EncoderModel model(Mlp());
  Rng rng(7);
  std::vector<TokenId> s(state.range(0) - 2);
  for (auto& t : s) t = static_cast<TokenId>(corpus::kNumSpecials + rng.Below(100));
  const Matrix x = encoder::Embed(Mlp(), s);
  const Matrix b = attribution::MakeBaseline(Mlp(), s, attribution::BaselineKind::kMaskSequence);
  for (auto _ : state) {
    if constexpr (kParallel) {
      benchmark::DoNotOptimize(attribution::ShapleyExactValues(model, x, b));
    } else {
      benchmark::DoNotOptimize(attribution::ShapleyExactValuesSerial(model, x, b));
    }
  }
}

template <bool kParallel>
void BM_AttributeCorpus(benchmark::State& state) {
  corpus::TokenizedCorpus head = Corpus().corpus;
  head.sentences.resize(static_cast<std::size_t>(state.range(0)));
  attribution::AttributionOptions o;
  for (auto _ : state) {
    if constexpr (kParallel) {
      benchmark::DoNotOptimize(attribution::AttributeCorpus(Mlp(), head, Corpus().vocab, o));
    } else {
      benchmark::DoNotOptimize(attribution::AttributeCorpusSerial(Mlp(), head, Corpus().vocab, o));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_QuantitiesSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QuantitiesParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ShapleyExact<false>)->Name("BM_ShapleyExactSerial")->Arg(8)->Arg(12)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShapleyExact<true>)->Name("BM_ShapleyExactParallel")->Arg(8)->Arg(12)
    ->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AttributeCorpus<false>)->Name("BM_AttributeCorpusSerial")->Arg(500)
    ->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AttributeCorpus<true>)->Name("BM_AttributeCorpusParallel")->Arg(500)
    ->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
}  // namespace wordweight

BENCHMARK_MAIN();
