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

// Word-level information quantities over a tokenized corpus.
//
//   P(v)          unigram distribution over content-token occurrences
//   P_sent(v|w)   token distribution pooled over the sentences containing w,
//                 occurrences of w included, each supporting sentence once
//   KL(w)         sum_v P_sent(v|w) ln(P_sent(v|w) / P(v))          [nats]
//   self_info(w)  -ln P(w)
//   idf(w)        ln(N_sentences / doc_freq(w))
//   sif(w)        a / (a + P(w))

#ifndef WORDWEIGHT_INFOSTATS_H_
#define WORDWEIGHT_INFOSTATS_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordweight/common.h"
#include "wordweight/corpus.h"

namespace wordweight::infostats {

// Distribution over the full vocabulary; special-token entries are zero.
struct ProbDist {
  std::vector<double> probs;

  double Sum() const;
};

ProbDist Unigram(const corpus::TokenizedCorpus& corpus, std::size_t vocab_size);

// Throws Error("token has no supporting sentences") if w never occurs.
ProbDist ConditionalDist(const corpus::TokenizedCorpus& corpus,
                         std::size_t vocab_size, TokenId w);

// With smoothing > 0, both distributions receive `smoothing` pseudo-counts on
// every content token of the vocabulary before normalization.
double KlGain(const corpus::TokenizedCorpus& corpus, std::size_t vocab_size,
              TokenId w, double smoothing = 0.0);

struct QuantityOptions {
  double sif_a = 1e-3;
  double smoothing = 0.0;
};

struct TokenStats {
  TokenId id = -1;
  std::string token;
  std::int64_t count = 0;
  std::int64_t doc_freq = 0;
  double kl = 0.0;
  double self_info = 0.0;
  double idf = 0.0;
  double sif_weight = 0.0;

  bool operator==(const TokenStats&) const = default;
};

// Min-max normalized copy of each quantity column, aligned with `rows`.
struct NormalizedColumns {
  std::vector<double> kl, self_info, idf, sif_weight;
};

struct TokenQuantities {
  // One row per observed content token, ordered by id.
  std::vector<TokenStats> rows;
  double sif_a = 1e-3;
  std::int64_t total_count = 0;
  std::int64_t num_sentences = 0;

  NormalizedColumns MinMaxNormalized() const;
  // token string -> row index
  std::unordered_map<std::string, std::size_t> IndexByToken() const;
};

// OpenMP-parallel over token types. Output is identical to the serial
// version regardless of thread count.
TokenQuantities QuantitiesTable(const corpus::TokenizedCorpus& corpus,
                                const corpus::Vocab& vocab,
                                const QuantityOptions& options = {});

// Single-threaded reference for the same computation.
TokenQuantities QuantitiesTableSerial(const corpus::TokenizedCorpus& corpus,
                                      const corpus::Vocab& vocab,
                                      const QuantityOptions& options = {});

// CSV: token,count,doc_freq,kl,self_info,idf,sif_weight with quantities at
// 10 significant digits.
void WriteQuantitiesCsv(const TokenQuantities& table, std::ostream& out);
// Reads the CSV back. Ids are assigned in row order starting at 0.
TokenQuantities ReadQuantitiesCsv(std::istream& in);

}  // namespace wordweight::infostats

#endif  // WORDWEIGHT_INFOSTATS_H_
