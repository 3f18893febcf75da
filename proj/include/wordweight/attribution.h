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

// Word-level attribution for sentence models.
//
// Integrated Gradients attributes m_k(W) - m_k(B) to the cells of the input
// matrix; Shapley values attribute it to input rows, with absent rows taken
// from a baseline. Either way the per-position contribution is
// c_i = sqrt(sum over cells of row i and outputs k of score^2), and
// c'_i = c_i / mean(c).

#ifndef WORDWEIGHT_ATTRIBUTION_H_
#define WORDWEIGHT_ATTRIBUTION_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordweight/common.h"
#include "wordweight/corpus.h"
#include "wordweight/encoder.h"
#include "wordweight/model.h"

namespace wordweight::attribution {

enum class Method { kIg, kShapleyExact, kShapleySampled };

std::string_view MethodName(Method method);
Method ParseMethod(std::string_view name);

enum class BaselineKind { kPadSequence, kMaskSequence };

std::string_view BaselineName(BaselineKind kind);

// n x d baseline for a sentence, framed like the input: all-PAD (IG) or
// all-MASK (Shapley) content rows, with CLS/SEP kept when the encoder frames.
Matrix MakeBaseline(const encoder::EncoderParams& params,
                    std::span<const TokenId> sentence, BaselineKind kind);

struct Attribution {
  std::vector<double> raw;         // c_i
  std::vector<double> normalized;  // c'_i
  std::vector<double> residual;    // per output coordinate
  // Per-position standard error of c_i, sampled Shapley only.
  std::vector<double> std_error;
  bool degenerate = false;  // all c_i were zero; normalized set to ones
  int steps_or_samples = 0;

  double residual_max() const;
};

// c'_i = c_i / mean(c). All-zero input yields ones and sets *degenerate.
std::vector<double> Normalize(std::span<const double> raw, bool* degenerate);

// Row-wise Frobenius norms of a d_out x (n * d) score matrix.
std::vector<double> AggregateCells(const Matrix& scores, std::size_t n);

// Row norms of an n x d_out matrix of per-position values.
std::vector<double> AggregateRows(const Matrix& phi);

struct IgScores {
  Matrix scores;  // d_out x (n * d), same layout as SentenceModel::Jacobian
  std::vector<double> residual;
  // |m_k(W) - m_k(B)| per output coordinate.
  std::vector<double> delta;
};

// Midpoint rule with `steps` points on alpha in (0, 1). Throws Error naming
// alpha when a gradient is not finite.
IgScores IntegratedGradientsScores(const SentenceModel& model,
                                   const Matrix& input, const Matrix& baseline,
                                   int steps);

Attribution IntegratedGradients(const SentenceModel& model, const Matrix& input,
                                const Matrix& baseline, int steps);

struct ShapleyValues {
  Matrix phi;  // n x d_out
  std::vector<double> residual;
  std::vector<double> std_error;  // sampled only, per position
};

// v_k(S) = m_k(input with rows outside S taken from baseline). Enumerates all
// 2^n coalitions; parallel over coalitions.
ShapleyValues ShapleyExactValues(const SentenceModel& model, const Matrix& input,
                                 const Matrix& baseline, int max_n = 12);
ShapleyValues ShapleyExactValuesSerial(const SentenceModel& model,
                                       const Matrix& input,
                                       const Matrix& baseline, int max_n = 12);

// samples/2 random permutations, each also used reversed.
ShapleyValues ShapleySampledValues(const SentenceModel& model,
                                   const Matrix& input, const Matrix& baseline,
                                   int samples, std::uint64_t seed);

Attribution ShapleyExact(const SentenceModel& model, const Matrix& input,
                         const Matrix& baseline, int max_n = 12);
Attribution ShapleySampled(const SentenceModel& model, const Matrix& input,
                           const Matrix& baseline, int samples,
                           std::uint64_t seed);

struct AttributionOptions {
  Method method = Method::kIg;
  int steps = 64;
  int max_n = 12;
  int samples = 1000;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct SentenceAttribution {
  std::int64_t sentence_id = 0;
  std::vector<std::string> tokens;  // framed tokens, one per position
  Attribution attribution;
  std::string error;  // non-empty when this sentence failed

  bool ok() const { return error.empty(); }
};

// One entry per sentence in source order. Failures are recorded, not thrown.
std::vector<SentenceAttribution> AttributeCorpus(
    const encoder::EncoderParams& params, const corpus::TokenizedCorpus& corpus,
    const corpus::Vocab& vocab, const AttributionOptions& options);
std::vector<SentenceAttribution> AttributeCorpusSerial(
    const encoder::EncoderParams& params, const corpus::TokenizedCorpus& corpus,
    const corpus::Vocab& vocab, const AttributionOptions& options);

SentenceAttribution AttributeSentence(const encoder::EncoderParams& params,
                                      std::span<const TokenId> sentence,
                                      std::int64_t sentence_id,
                                      const corpus::Vocab& vocab,
                                      const AttributionOptions& options);

}  // namespace wordweight::attribution

#endif  // WORDWEIGHT_ATTRIBUTION_H_
