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

// Toy contrastive sentence encoder without contextualization.
//
// A sentence is embedded row by row (optionally framed as CLS ... SEP) and
// pooled into s. The mean pooler returns the row mean; the MLP pooler returns
// tanh(mean * W1 + b1) * W2 + b2. Outputs are never normalized. Pairs are
// scored by P(C = 1 | s, s') = sigmoid(<s, s'>) and trained by SGD ascent on
// the pair log-likelihood, positives being the anchor itself and negatives
// random corpus sentences.

#ifndef WORDWEIGHT_ENCODER_H_
#define WORDWEIGHT_ENCODER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "wordweight/common.h"
#include "wordweight/corpus.h"
#include "wordweight/model.h"

namespace wordweight::encoder {

enum class Pooler { kMean, kMlp };

std::string_view PoolerName(Pooler pooler);
Pooler ParsePooler(std::string_view name);

struct EncoderParams {
  Pooler pooler = Pooler::kMean;
  bool frame_with_specials = false;
  Matrix emb;               // V x d
  Matrix w1;                // d x h, MLP only
  std::vector<double> b1;   // h
  Matrix w2;                // h x d
  std::vector<double> b2;   // d

  std::size_t vocab_size() const { return emb.rows(); }
  std::size_t dim() const { return emb.cols(); }
  std::size_t hidden() const { return b1.size(); }

  // Sets the MASK row to the mean of all content-token rows.
  void RefreshMaskRow();
  // Shapes, zero PAD row, finite entries.
  void Validate() const;

  bool operator==(const EncoderParams&) const = default;
};

struct InitOptions {
  Pooler pooler = Pooler::kMean;
  int dim = 32;
  // 0 means hidden width = dim.
  int hidden = 0;
  // Unset: framed for the MLP pooler, unframed for the mean pooler.
  std::optional<bool> frame_with_specials;
  // Standard deviation of embedding entries; 0 means 1/sqrt(dim).
  double init_scale = 0.0;
  std::uint64_t seed = 1;
};

EncoderParams InitEncoder(std::size_t vocab_size, const InitOptions& options);

// Sentence ids with CLS/SEP added when the encoder frames.
std::vector<TokenId> Frame(const EncoderParams& params,
                           std::span<const TokenId> sentence);

// n x d matrix of input embeddings for the framed sentence.
Matrix Embed(const EncoderParams& params, std::span<const TokenId> sentence);

// Pooling head applied to an arbitrary n x d input.
std::vector<double> Pool(const EncoderParams& params, const Matrix& inputs);

// d x d Jacobian of the pooled output with respect to the row mean.
Matrix PoolJacobianWrtMean(const EncoderParams& params, const Matrix& inputs);

std::vector<double> Encode(const EncoderParams& params,
                           std::span<const TokenId> sentence);

struct ContrastivePair {
  std::vector<TokenId> s;
  std::vector<TokenId> s_prime;
  int label = 0;
};

// sigmoid(<s, s'>) for label 1, its complement for label 0.
double PairLikelihood(const EncoderParams& params, const ContrastivePair& pair);
double PairLogLikelihood(const EncoderParams& params,
                         const ContrastivePair& pair);

// Dense gradient buffers matching EncoderParams, with the embedding rows
// touched since the last Clear().
struct Gradient {
  Matrix emb, w1, w2;
  std::vector<double> b1, b2;
  std::vector<TokenId> touched;
  std::vector<char> is_touched;

  explicit Gradient(const EncoderParams& params);
  void Touch(TokenId id);
  void Clear();
};

// Adds scale * d(log-likelihood)/d(params) for one pair. Returns the pair
// log-likelihood.
double AccumulatePairGradient(const EncoderParams& params,
                              const ContrastivePair& pair, Gradient& grad,
                              double scale = 1.0);

struct TrainConfig {
  int steps = 4000;
  double lr = 0.5;
  int batch = 32;
  int neg_per_pos = 1;
  std::uint64_t seed = 1;

  void Validate() const;
};

struct TrainStats {
  double initial_mean_loglik = 0.0;
  double final_mean_loglik = 0.0;
};

// One positive (s, s, 1) plus neg_per_pos negatives (s, s', 0) per anchor.
std::vector<ContrastivePair> SamplePairs(const corpus::TokenizedCorpus& corpus,
                                         std::size_t num_anchors,
                                         int neg_per_pos, std::uint64_t seed);

double MeanPairLogLikelihood(const EncoderParams& params,
                             std::span<const ContrastivePair> pairs);

// Throws Error naming the step when the batch log-likelihood is not finite.
EncoderParams TrainContrastive(const corpus::TokenizedCorpus& corpus,
                               EncoderParams params, const TrainConfig& config,
                               TrainStats* stats = nullptr);

// Header "SENC", pooler tag, V, d, h (little-endian int32), then float32
// row-major emb, and for the MLP pooler w1, b1, w2, b2. The tag's low byte is
// the pooler (0 mean, 1 mlp); bit 8 marks CLS/SEP framing.
void WriteModel(const EncoderParams& params, std::ostream& out);
EncoderParams ReadModel(std::istream& in);
void SaveModel(const EncoderParams& params, const std::filesystem::path& path);
EncoderParams LoadModel(const std::filesystem::path& path);

// SentenceModel view over frozen parameters.
class EncoderModel : public SentenceModel {
 public:
  explicit EncoderModel(const EncoderParams& params) : params_(params) {}

  std::size_t output_dim() const override { return params_.dim(); }
  std::vector<double> Forward(const Matrix& inputs) const override;
  Matrix Jacobian(const Matrix& inputs) const override;
  std::optional<Matrix> SharedRowJacobian(const Matrix& inputs) const override;

  const EncoderParams& params() const { return params_; }

 private:
  const EncoderParams& params_;
};

}  // namespace wordweight::encoder

#endif  // WORDWEIGHT_ENCODER_H_
