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

// Skip-gram with negative sampling where the context window is the whole
// sentence, and the check that trained word-vector norms track KL(w):
// 0.5 * ||w||^2 ~ KL(w).

#ifndef WORDWEIGHT_SGNS_H_
#define WORDWEIGHT_SGNS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "wordweight/common.h"
#include "wordweight/corpus.h"
#include "wordweight/infostats.h"

namespace wordweight::sgns {

struct SgnsConfig {
  int dim = 32;
  int epochs = 5;
  // Initial learning rate, decayed linearly to 0 over training.
  double lr = 0.05;
  int negatives = 5;
  // Noise distribution is unigram^neg_exponent.
  double neg_exponent = 1.0;
  std::uint64_t seed = 1;
  // 1 = deterministic. More workers apply unsynchronized updates.
  int workers = 1;

  void Validate() const;
};

struct EmbeddingPair {
  Matrix word;
  Matrix context;

  bool operator==(const EmbeddingPair&) const = default;
};

struct TrainStats {
  std::vector<double> epoch_mean_loss;
  std::int64_t pairs_per_epoch = 0;
};

// Word rows uniform in [-0.5/dim, 0.5/dim], context rows zero.
EmbeddingPair InitEmbeddings(std::size_t vocab_size, int dim,
                             std::uint64_t seed);

// Every ordered pair of distinct positions (i, j) in a sentence is a positive
// (center s[i], context s[j]). Throws Error on non-finite loss.
EmbeddingPair TrainSgns(const corpus::TokenizedCorpus& corpus,
                        std::size_t vocab_size, const SgnsConfig& config,
                        TrainStats* stats = nullptr);

// Same, starting from explicit embeddings (shape must match vocab/dim).
EmbeddingPair TrainSgns(const corpus::TokenizedCorpus& corpus,
                        EmbeddingPair init, const SgnsConfig& config,
                        TrainStats* stats = nullptr);

// log sigma(<w, c>) + sum_k log sigma(-<w, n_k>)
double PairObjective(std::span<const double> word, std::span<const double> ctx,
                     const std::vector<std::span<const double>>& negatives);

struct PairGradient {
  std::vector<double> word;
  std::vector<double> context;
  std::vector<std::vector<double>> negatives;
};

// Gradient of PairObjective with respect to every argument.
PairGradient PairObjectiveGradient(
    std::span<const double> word, std::span<const double> ctx,
    const std::vector<std::span<const double>>& negatives);

// Header "SGNS", V, dim (little-endian int32), then row-major float32 word
// matrix followed by the context matrix.
void WriteEmbeddings(const EmbeddingPair& embeddings, std::ostream& out);
EmbeddingPair ReadEmbeddings(std::istream& in);
void SaveEmbeddings(const EmbeddingPair& embeddings,
                    const std::filesystem::path& path);
EmbeddingPair LoadEmbeddings(const std::filesystem::path& path);

struct NormLawResult {
  double pearson = 0.0;
  double spearman = 0.0;
  double ols_slope = 0.0;
  std::size_t n_tokens = 0;
};

// Correlates 0.5 * ||word row||^2 with KL over tokens with count >= min_count.
// Rows are resolved through `vocab` by token string.
NormLawResult NormLawCheck(const EmbeddingPair& embeddings,
                           const infostats::TokenQuantities& quantities,
                           const corpus::Vocab& vocab, std::int64_t min_count);

}  // namespace wordweight::sgns

#endif  // WORDWEIGHT_SGNS_H_
