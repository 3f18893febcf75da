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


#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.h"
#include "wordweight/corpus.h"
#include "wordweight/infostats.h"
#include "wordweight/rng.h"
#include "wordweight/sgns.h"

namespace wordweight::sgns {
namespace {

corpus::LoadedCorpus SmallCorpus() {
  corpus::GeneratorParams p;
  p.num_topics = 4;
  p.vocab_size = 120;
  p.num_sentences = 600;
  return corpus::GenerateCorpus(p);
}

std::vector<std::span<const double>> Spans(const std::vector<std::vector<double>>& v) {
  return {v.begin(), v.end()};
}

TEST(PairObjective, MatchesDirectFormula) {
  const std::vector<double> w{0.3, -0.2}, c{0.5, 0.1};
  const std::vector<std::vector<double>> n{{0.2, 0.4}, {-1.0, 0.3}};
  const double expect = std::log(1 / (1 + std::exp(-(0.15 - 0.02)))) +
                        std::log(1 / (1 + std::exp(0.06 - 0.08))) +
                        std::log(1 / (1 + std::exp(-0.3 - 0.06)));
  EXPECT_NEAR(PairObjective(w, c, Spans(n)), expect, 1e-15);
}

TEST(PairObjective, GradientMatchesFiniteDifferences) {
  Rng rng(21);
  const int d = 6, k = 5;
  for (int point = 0; point < 10; ++point) {
    std::vector<double> flat((2 + k) * d);
    for (double& v : flat) v = 0.7 * rng.Normal();
    auto unpack = [&](const std::vector<double>& x) {
      std::vector<std::vector<double>> parts(2 + k);
      for (int p = 0; p < 2 + k; ++p) parts[p].assign(x.begin() + p * d, x.begin() + (p + 1) * d);
      return parts;
    };
    auto f = [&](const std::vector<double>& x) {
      const auto parts = unpack(x);
      std::vector<std::vector<double>> negs(parts.begin() + 2, parts.end());
      return PairObjective(parts[0], parts[1], Spans(negs));
    };
    const auto parts = unpack(flat);
    std::vector<std::vector<double>> negs(parts.begin() + 2, parts.end());
    const auto g = PairObjectiveGradient(parts[0], parts[1], Spans(negs));
    std::vector<double> analytic(g.word);
    analytic.insert(analytic.end(), g.context.begin(), g.context.end());
    for (const auto& n : g.negatives) analytic.insert(analytic.end(), n.begin(), n.end());
    EXPECT_LT(oracle::MaxRelativeError(analytic, oracle::FiniteDifference(f, flat)), 1e-5);
  }
}

TEST(InitEmbeddings, WordRowsUniformContextZero) {
  const auto e = InitEmbeddings(50, 8, 3);
  for (double v : e.word.data()) {
    EXPECT_LE(std::abs(v), 0.5 / 8);
  }
  for (double v : e.context.data()) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(e, InitEmbeddings(50, 8, 3));
}

TEST(TrainSgns, ZeroLearningRateLeavesEmbeddingsUnchanged) {
  const auto g = SmallCorpus();
  SgnsConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 1;
  cfg.lr = 0.0;
  const auto init = InitEmbeddings(g.vocab.size(), cfg.dim, 9);
  EXPECT_EQ(TrainSgns(g.corpus, init, cfg), init);
}

TEST(TrainSgns, DeterministicForFixedSeed) {
  const auto g = SmallCorpus();
  SgnsConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 2;
  const auto a = TrainSgns(g.corpus, g.vocab.size(), cfg);
  const auto b = TrainSgns(g.corpus, g.vocab.size(), cfg);
  EXPECT_EQ(a, b);
  cfg.seed = 2;
  EXPECT_NE(TrainSgns(g.corpus, g.vocab.size(), cfg), a);
}

TEST(TrainSgns, LossDecreasesOverEpochs) {
  const auto g = SmallCorpus();
  SgnsConfig cfg;
  cfg.dim = 16;
  cfg.epochs = 3;
  TrainStats stats;
  TrainSgns(g.corpus, g.vocab.size(), cfg, &stats);
  ASSERT_EQ(stats.epoch_mean_loss.size(), 3u);
  EXPECT_LT(stats.epoch_mean_loss[1], stats.epoch_mean_loss[0]);
  std::int64_t pairs = 0;
  for (const auto& s : g.corpus.sentences) pairs += s.size() * (s.size() - 1);
  EXPECT_EQ(stats.pairs_per_epoch, pairs);
}

TEST(TrainSgns, SpecialRowsAreNeverUpdated) {
  const auto g = SmallCorpus();
  SgnsConfig cfg;
  cfg.dim = 8;
  cfg.epochs = 1;
  const auto init = InitEmbeddings(g.vocab.size(), cfg.dim, cfg.seed);
  const auto e = TrainSgns(g.corpus, init, cfg);
  for (TokenId s = 0; s < corpus::kNumSpecials; ++s) {
    for (std::size_t j = 0; j < 8; ++j) {
      EXPECT_EQ(e.word(s, j), init.word(s, j));
      EXPECT_EQ(e.context(s, j), 0.0);
    }
  }
}

TEST(TrainSgns, InvalidConfigThrows) {
  const auto g = SmallCorpus();
  SgnsConfig cfg;
  cfg.dim = 1;
  EXPECT_THROW(TrainSgns(g.corpus, g.vocab.size(), cfg), Error);
  cfg = {};
  cfg.negatives = 0;
  EXPECT_THROW(TrainSgns(g.corpus, g.vocab.size(), cfg), Error);
  cfg = {};
  EXPECT_THROW(TrainSgns(g.corpus, InitEmbeddings(3, cfg.dim, 1), cfg), Error);
}

TEST(Embeddings, BinaryRoundTripAtFloatPrecision) {
  auto e = InitEmbeddings(10, 4, 1);
  e.context(5, 2) = 0.125;
  std::stringstream ss;
  WriteEmbeddings(e, ss);
  EXPECT_EQ(ss.str().substr(0, 4), "SGNS");
  const auto back = ReadEmbeddings(ss);
  ASSERT_EQ(back.word.rows(), 10u);
  ASSERT_EQ(back.word.cols(), 4u);
  for (std::size_t i = 0; i < e.word.data().size(); ++i) {
    EXPECT_EQ(back.word.data()[i], static_cast<double>(static_cast<float>(e.word.data()[i])));
  }
  EXPECT_EQ(back.context(5, 2), 0.125);
}

TEST(Embeddings, TruncatedFileThrows) {
  std::stringstream ss;
  WriteEmbeddings(InitEmbeddings(10, 4, 1), ss);
  std::string bytes = ss.str();
  bytes.resize(bytes.size() - 3);
  std::istringstream in(bytes);
  EXPECT_THROW(ReadEmbeddings(in), Error);
}

TEST(NormLawCheck, PerfectWhenHalfSquaredNormEqualsKl) {
  const auto g = SmallCorpus();
  const auto q = infostats::QuantitiesTable(g.corpus, g.vocab);
  EmbeddingPair e{Matrix(g.vocab.size(), 2), Matrix(g.vocab.size(), 2)};
  for (const auto& row : q.rows) {
    e.word(row.id, 0) = std::sqrt(2.0 * row.kl);
  }
  const auto r = NormLawCheck(e, q, g.vocab, 1);
  EXPECT_NEAR(r.pearson, 1.0, 1e-12);
  EXPECT_NEAR(r.ols_slope, 1.0, 1e-12);
  EXPECT_NEAR(r.spearman, 1.0, 1e-12);
  EXPECT_EQ(r.n_tokens, q.rows.size());
}

TEST(NormLawCheck, MinCountFiltersTokens) {
  const auto g = SmallCorpus();
  const auto q = infostats::QuantitiesTable(g.corpus, g.vocab);
  const auto e = InitEmbeddings(g.vocab.size(), 4, 1);
  std::size_t expect = 0;
  for (const auto& row : q.rows) expect += row.count >= 20;
  EXPECT_EQ(NormLawCheck(e, q, g.vocab, 20).n_tokens, expect);
  EXPECT_THROW(NormLawCheck(e, q, g.vocab, 1000000), Error);
}

}  // namespace
}  // namespace wordweight::sgns
