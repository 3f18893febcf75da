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

#include "wordweight/infostats.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "wordweight/csv.h"

namespace wordweight::infostats {

namespace {

using corpus::TokenizedCorpus;

std::vector<std::int64_t> TokenCounts(const TokenizedCorpus& corpus,
                                      std::size_t vocab_size) {
  corpus::ValidateCorpus(corpus, vocab_size);
  std::vector<std::int64_t> counts(vocab_size, 0);
  for (const auto& sentence : corpus.sentences) {
    for (const TokenId id : sentence) ++counts[id];
  }
  return counts;
}

// For each token, the indices of the distinct sentences containing it.
std::vector<std::vector<std::uint32_t>> SupportIndex(
    const TokenizedCorpus& corpus, std::size_t vocab_size) {
  std::vector<std::vector<std::uint32_t>> index(vocab_size);
  std::vector<std::uint32_t> last_seen(vocab_size,
                                       std::numeric_limits<std::uint32_t>::max());
  for (std::uint32_t s = 0; s < corpus.sentences.size(); ++s) {
    for (const TokenId id : corpus.sentences[s]) {
      if (last_seen[id] != s) {
        last_seen[id] = s;
        index[id].push_back(s);
      }
    }
  }
  return index;
}

// Per-thread scratch for pooled conditional counts.
struct Scratch {
  std::vector<std::int64_t> counts;
  std::vector<TokenId> touched;

  explicit Scratch(std::size_t vocab_size) : counts(vocab_size, 0) {}

  // Returns the pooled token total of the supporting sentences.
  std::int64_t Accumulate(const TokenizedCorpus& corpus,
                          const std::vector<std::uint32_t>& support) {
    std::int64_t total = 0;
    for (const std::uint32_t s : support) {
      for (const TokenId id : corpus.sentences[s]) {
        if (counts[id]++ == 0) touched.push_back(id);
        ++total;
      }
    }
    return total;
  }

  void Reset() {
    for (const TokenId id : touched) counts[id] = 0;
    touched.clear();
  }
};

struct KlContext {
  const std::vector<std::int64_t>& counts;
  std::int64_t total;
  std::size_t num_content;
  double smoothing;
};

double KlFromScratch(const Scratch& scratch, std::int64_t cond_total,
                     const KlContext& ctx) {
  double kl = 0.0;
  if (ctx.smoothing <= 0.0) {
    const double qn = static_cast<double>(cond_total);
    const double pn = static_cast<double>(ctx.total);
    for (const TokenId v : scratch.touched) {
      const double q = static_cast<double>(scratch.counts[v]) / qn;
      const double p = static_cast<double>(ctx.counts[v]) / pn;
      kl += q * std::log(q / p);
    }
  } else {
    const double lambda = ctx.smoothing;
    const double extra = lambda * static_cast<double>(ctx.num_content);
    const double qn = static_cast<double>(cond_total) + extra;
    const double pn = static_cast<double>(ctx.total) + extra;
    for (std::size_t v = corpus::kNumSpecials; v < ctx.counts.size(); ++v) {
      const double q = (static_cast<double>(scratch.counts[v]) + lambda) / qn;
      const double p = (static_cast<double>(ctx.counts[v]) + lambda) / pn;
      kl += q * std::log(q / p);
    }
  }
  // Rounding can leave a tiny negative value when Q equals P.
  return std::max(kl, 0.0);
}

struct TableInputs {
  std::vector<std::int64_t> counts;
  std::vector<std::vector<std::uint32_t>> support;
  std::vector<TokenId> observed;
  std::int64_t total = 0;
};

TableInputs PrepareTable(const TokenizedCorpus& corpus, std::size_t vocab_size) {
  if (corpus.sentences.empty()) throw Error("empty corpus");
  TableInputs in;
  in.counts = TokenCounts(corpus, vocab_size);
  in.support = SupportIndex(corpus, vocab_size);
  for (std::size_t v = 0; v < vocab_size; ++v) {
    in.total += in.counts[v];
    if (in.counts[v] > 0) in.observed.push_back(static_cast<TokenId>(v));
  }
  return in;
}

TokenStats ComputeRow(TokenId w, const TableInputs& in,
                      const TokenizedCorpus& corpus, const corpus::Vocab& vocab,
                      const QuantityOptions& options, Scratch& scratch) {
  TokenStats row;
  row.id = w;
  row.token = vocab.Token(w);
  row.count = in.counts[w];
  row.doc_freq = static_cast<std::int64_t>(in.support[w].size());
  const std::int64_t cond_total = scratch.Accumulate(corpus, in.support[w]);
  const KlContext ctx{in.counts, in.total,
                      vocab.size() - corpus::kNumSpecials, options.smoothing};
  row.kl = KlFromScratch(scratch, cond_total, ctx);
  scratch.Reset();
  const double p = static_cast<double>(row.count) / static_cast<double>(in.total);
  row.self_info = -std::log(p);
  row.idf = std::log(static_cast<double>(corpus.sentences.size()) /
                     static_cast<double>(row.doc_freq));
  row.sif_weight = options.sif_a / (options.sif_a + p);
  return row;
}

TokenQuantities MakeTable(const TableInputs& in, const TokenizedCorpus& corpus,
                          const QuantityOptions& options) {
  TokenQuantities table;
  table.rows.resize(in.observed.size());
  table.sif_a = options.sif_a;
  table.total_count = in.total;
  table.num_sentences = static_cast<std::int64_t>(corpus.sentences.size());
  return table;
}

void CheckOptions(const QuantityOptions& options) {
  if (!(options.sif_a > 0.0)) throw Error("sif_a must be positive");
  if (!(options.smoothing >= 0.0)) throw Error("smoothing must be non-negative");
}

std::vector<double> MinMax(const std::vector<TokenStats>& rows,
                           double TokenStats::*field) {
  std::vector<double> out;
  out.reserve(rows.size());
  if (rows.empty()) return out;
  double lo = rows.front().*field, hi = lo;
  for (const auto& r : rows) {
    lo = std::min(lo, r.*field);
    hi = std::max(hi, r.*field);
  }
  for (const auto& r : rows) {
    out.push_back(hi > lo ? (r.*field - lo) / (hi - lo) : 0.0);
  }
  return out;
}

}  // namespace

double ProbDist::Sum() const {
  double sum = 0.0;
  for (const double p : probs) sum += p;
  return sum;
}

ProbDist Unigram(const TokenizedCorpus& corpus, std::size_t vocab_size) {
  if (corpus.sentences.empty()) throw Error("empty corpus");
  const auto counts = TokenCounts(corpus, vocab_size);
  std::int64_t total = 0;
  for (const auto c : counts) total += c;
  ProbDist dist;
  dist.probs.resize(vocab_size);
  for (std::size_t v = 0; v < vocab_size; ++v) {
    dist.probs[v] = static_cast<double>(counts[v]) / static_cast<double>(total);
  }
  return dist;
}

ProbDist ConditionalDist(const TokenizedCorpus& corpus, std::size_t vocab_size,
                         TokenId w) {
  corpus::ValidateCorpus(corpus, vocab_size);
  if (w < 0 || static_cast<std::size_t>(w) >= vocab_size) {
    throw Error("token id out of range");
  }
  std::vector<std::int64_t> counts(vocab_size, 0);
  std::int64_t total = 0;
  for (const auto& sentence : corpus.sentences) {
    if (std::find(sentence.begin(), sentence.end(), w) == sentence.end()) {
      continue;
    }
    for (const TokenId id : sentence) ++counts[id];
    total += static_cast<std::int64_t>(sentence.size());
  }
  if (total == 0) throw Error("token has no supporting sentences");
  ProbDist dist;
  dist.probs.resize(vocab_size);
  for (std::size_t v = 0; v < vocab_size; ++v) {
    dist.probs[v] = static_cast<double>(counts[v]) / static_cast<double>(total);
  }
  return dist;
}

double KlGain(const TokenizedCorpus& corpus, std::size_t vocab_size, TokenId w,
              double smoothing) {
  if (!(smoothing >= 0.0)) throw Error("smoothing must be non-negative");
  const TableInputs in = PrepareTable(corpus, vocab_size);
  if (w < 0 || static_cast<std::size_t>(w) >= vocab_size || in.counts[w] == 0) {
    throw Error("token has no supporting sentences");
  }
  Scratch scratch(vocab_size);
  const std::int64_t cond_total = scratch.Accumulate(corpus, in.support[w]);
  const KlContext ctx{in.counts, in.total, vocab_size - corpus::kNumSpecials,
                      smoothing};
  return KlFromScratch(scratch, cond_total, ctx);
}

TokenQuantities QuantitiesTable(const TokenizedCorpus& corpus,
                                const corpus::Vocab& vocab,
                                const QuantityOptions& options) {
  CheckOptions(options);
  const TableInputs in = PrepareTable(corpus, vocab.size());
  TokenQuantities table = MakeTable(in, corpus, options);
  const auto n = static_cast<std::int64_t>(in.observed.size());
#pragma omp parallel
  {
    Scratch scratch(vocab.size());
#pragma omp for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) {
      table.rows[i] =
          ComputeRow(in.observed[i], in, corpus, vocab, options, scratch);
    }
  }
  return table;
}

TokenQuantities QuantitiesTableSerial(const TokenizedCorpus& corpus,
                                      const corpus::Vocab& vocab,
                                      const QuantityOptions& options) {
  CheckOptions(options);
  const TableInputs in = PrepareTable(corpus, vocab.size());
  TokenQuantities table = MakeTable(in, corpus, options);
  Scratch scratch(vocab.size());
  for (std::size_t i = 0; i < in.observed.size(); ++i) {
    table.rows[i] =
        ComputeRow(in.observed[i], in, corpus, vocab, options, scratch);
  }
  return table;
}

NormalizedColumns TokenQuantities::MinMaxNormalized() const {
  return {MinMax(rows, &TokenStats::kl), MinMax(rows, &TokenStats::self_info),
          MinMax(rows, &TokenStats::idf), MinMax(rows, &TokenStats::sif_weight)};
}

std::unordered_map<std::string, std::size_t> TokenQuantities::IndexByToken()
    const {
  std::unordered_map<std::string, std::size_t> index;
  index.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) index.emplace(rows[i].token, i);
  return index;
}

void WriteQuantitiesCsv(const TokenQuantities& table, std::ostream& out) {
  out << "token,count,doc_freq,kl,self_info,idf,sif_weight\n";
  for (const auto& r : table.rows) {
    out << csv::Escape(r.token) << ',' << r.count << ',' << r.doc_freq << ','
        << csv::FormatSig(r.kl, 10) << ',' << csv::FormatSig(r.self_info, 10)
        << ',' << csv::FormatSig(r.idf, 10) << ','
        << csv::FormatSig(r.sif_weight, 10) << '\n';
  }
}

TokenQuantities ReadQuantitiesCsv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      csv::ParseLine(line) !=
          std::vector<std::string>{"token", "count", "doc_freq", "kl",
                                   "self_info", "idf", "sif_weight"}) {
    throw Error("quantities CSV has an unexpected header");
  }
  TokenQuantities table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = csv::ParseLine(line);
    if (fields.size() != 7) {
      throw Error("quantities CSV line " + std::to_string(line_no) +
                  " has " + std::to_string(fields.size()) + " fields");
    }
    TokenStats r;
    try {
      r.id = static_cast<TokenId>(table.rows.size());
      r.token = fields[0];
      r.count = std::stoll(fields[1]);
      r.doc_freq = std::stoll(fields[2]);
      r.kl = std::stod(fields[3]);
      r.self_info = std::stod(fields[4]);
      r.idf = std::stod(fields[5]);
      r.sif_weight = std::stod(fields[6]);
    } catch (const std::logic_error&) {
      throw Error("quantities CSV line " + std::to_string(line_no) +
                  " has a non-numeric field");
    }
    table.total_count += r.count;
    table.rows.push_back(std::move(r));
  }
  if (!table.rows.empty()) {
    const auto& r = table.rows.front();
    table.num_sentences = std::llround(static_cast<double>(r.doc_freq) *
                                       std::exp(r.idf));
    const double p = std::exp(-r.self_info);
    if (r.sif_weight < 1.0) table.sif_a = r.sif_weight * p / (1.0 - r.sif_weight);
  }
  return table;
}

}  // namespace wordweight::infostats
