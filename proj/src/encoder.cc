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

#include "wordweight/encoder.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <fstream>
#include <string>

#include "wordweight/binio.h"
#include "wordweight/rng.h"

namespace wordweight::encoder {

namespace {

constexpr std::int32_t kFramedBit = 0x100;

// Rows are summed in lexicographic order so the mean is bitwise independent
// of row order.
std::vector<double> RowMean(const Matrix& inputs) {
  if (inputs.rows() == 0) throw Error("empty input sequence");
  std::vector<std::size_t> order(inputs.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto ra = inputs.row(a), rb = inputs.row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  });
  std::vector<double> mean(inputs.cols(), 0.0);
  for (const std::size_t i : order) {
    const auto row = inputs.row(i);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += row[j];
  }
  const double inv = 1.0 / static_cast<double>(inputs.rows());
  for (double& v : mean) v *= inv;
  return mean;
}

// Hidden activations a = tanh(mean * W1 + b1).
std::vector<double> Hidden(const EncoderParams& p,
                           const std::vector<double>& mean) {
  const std::size_t h = p.hidden();
  std::vector<double> a(p.b1);
  for (std::size_t j = 0; j < mean.size(); ++j) {
    const auto w1_row = p.w1.row(j);
    for (std::size_t u = 0; u < h; ++u) a[u] += mean[j] * w1_row[u];
  }
  for (double& v : a) v = std::tanh(v);
  return a;
}

std::vector<double> MlpOut(const EncoderParams& p, const std::vector<double>& a) {
  std::vector<double> s(p.b2);
  for (std::size_t u = 0; u < a.size(); ++u) {
    const auto w2_row = p.w2.row(u);
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += a[u] * w2_row[k];
  }
  return s;
}

void CheckSentence(const EncoderParams& params,
                   std::span<const TokenId> sentence) {
  if (sentence.empty()) throw Error("cannot encode an empty sentence");
  for (const TokenId id : sentence) {
    if (id < 0 || static_cast<std::size_t>(id) >= params.vocab_size()) {
      throw Error("token id " + std::to_string(id) +
                  " outside the encoder vocabulary");
    }
  }
}

// Backpropagates g_s (gradient w.r.t. the pooled output) into `grad` for the
// framed sentence `ids`.
void Backprop(const EncoderParams& p, std::span<const TokenId> ids,
              const std::vector<double>& g_s, double scale, Gradient& grad) {
  const std::size_t d = p.dim();
  std::vector<double> g_mean(d);
  if (p.pooler == Pooler::kMean) {
    g_mean = g_s;
  } else {
    const Matrix inputs = [&] {
      Matrix m(ids.size(), d);
      for (std::size_t i = 0; i < ids.size(); ++i) {
        const auto row = p.emb.row(ids[i]);
        std::copy(row.begin(), row.end(), m.row(i).begin());
      }
      return m;
    }();
    const auto mean = RowMean(inputs);
    const auto a = Hidden(p, mean);
    const std::size_t h = p.hidden();
    for (std::size_t k = 0; k < d; ++k) grad.b2[k] += scale * g_s[k];
    std::vector<double> g_z(h, 0.0);
    for (std::size_t u = 0; u < h; ++u) {
      const auto w2_row = p.w2.row(u);
      auto gw2_row = grad.w2.row(u);
      double g_a = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        gw2_row[k] += scale * a[u] * g_s[k];
        g_a += w2_row[k] * g_s[k];
      }
      g_z[u] = g_a * (1.0 - a[u] * a[u]);
      grad.b1[u] += scale * g_z[u];
    }
    for (std::size_t j = 0; j < d; ++j) {
      const auto w1_row = p.w1.row(j);
      auto gw1_row = grad.w1.row(j);
      double acc = 0.0;
      for (std::size_t u = 0; u < h; ++u) {
        gw1_row[u] += scale * mean[j] * g_z[u];
        acc += w1_row[u] * g_z[u];
      }
      g_mean[j] = acc;
    }
  }
  const double per_row = scale / static_cast<double>(ids.size());
  for (const TokenId id : ids) {
    if (id == corpus::kPad) continue;
    grad.Touch(id);
    auto g_row = grad.emb.row(id);
    for (std::size_t j = 0; j < d; ++j) g_row[j] += per_row * g_mean[j];
  }
}

bool AllFinite(const std::vector<double>& v) {
  for (const double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

}  // namespace

std::string_view PoolerName(Pooler pooler) {
  return pooler == Pooler::kMean ? "mean" : "mlp";
}

Pooler ParsePooler(std::string_view name) {
  if (name == "mean") return Pooler::kMean;
  if (name == "mlp") return Pooler::kMlp;
  throw Error("unknown pooler '" + std::string(name) + "' (mean|mlp)");
}

void EncoderParams::RefreshMaskRow() {
  const std::size_t v = vocab_size();
  if (v <= static_cast<std::size_t>(corpus::kNumSpecials)) return;
  auto mask = emb.row(corpus::kMask);
  std::fill(mask.begin(), mask.end(), 0.0);
  for (std::size_t t = corpus::kNumSpecials; t < v; ++t) {
    const auto row = emb.row(t);
    for (std::size_t j = 0; j < dim(); ++j) mask[j] += row[j];
  }
  const double inv = 1.0 / static_cast<double>(v - corpus::kNumSpecials);
  for (double& x : mask) x *= inv;
}

void EncoderParams::Validate() const {
  if (vocab_size() < static_cast<std::size_t>(corpus::kNumSpecials) ||
      dim() == 0) {
    throw Error("encoder embedding table has invalid shape");
  }
  for (const double x : emb.row(corpus::kPad)) {
    if (x != 0.0) throw Error("PAD embedding row must be zero");
  }
  if (!AllFinite(emb.data())) throw Error("encoder embeddings are not finite");
  if (pooler == Pooler::kMlp) {
    const std::size_t d = dim(), h = hidden();
    if (h == 0 || w1.rows() != d || w1.cols() != h || w2.rows() != h ||
        w2.cols() != d || b2.size() != d) {
      throw Error("MLP pooler parameters have inconsistent shapes");
    }
    if (!AllFinite(w1.data()) || !AllFinite(w2.data()) || !AllFinite(b1) ||
        !AllFinite(b2)) {
      throw Error("MLP pooler parameters are not finite");
    }
  }
}

EncoderParams InitEncoder(std::size_t vocab_size, const InitOptions& options) {
  if (options.dim < 1) throw Error("encoder dim must be positive");
  if (vocab_size <= static_cast<std::size_t>(corpus::kNumSpecials)) {
    throw Error("encoder vocabulary has no content tokens");
  }
  EncoderParams p;
  p.pooler = options.pooler;
  p.frame_with_specials =
      options.frame_with_specials.value_or(options.pooler == Pooler::kMlp);
  const auto d = static_cast<std::size_t>(options.dim);
  Rng rng(DeriveSeed(options.seed, "encoder-init"));
  const double scale =
      options.init_scale > 0.0 ? options.init_scale : 1.0 / std::sqrt(d);
  p.emb = Matrix(vocab_size, d);
  for (std::size_t t = 0; t < vocab_size; ++t) {
    if (t == static_cast<std::size_t>(corpus::kPad)) continue;
    for (double& x : p.emb.row(t)) x = scale * rng.Normal();
  }
  if (p.pooler == Pooler::kMlp) {
    const std::size_t h = options.hidden > 0 ? options.hidden : d;
    p.w1 = Matrix(d, h);
    p.w2 = Matrix(h, d);
    p.b1.assign(h, 0.0);
    p.b2.assign(d, 0.0);
    const double s1 = 1.0 / std::sqrt(static_cast<double>(d));
    const double s2 = 1.0 / std::sqrt(static_cast<double>(h));
    for (double& x : p.w1.data()) x = s1 * rng.Normal();
    for (double& x : p.w2.data()) x = s2 * rng.Normal();
    for (double& x : p.b1) x = 0.1 * rng.Normal();
  }
  p.RefreshMaskRow();
  return p;
}

std::vector<TokenId> Frame(const EncoderParams& params,
                           std::span<const TokenId> sentence) {
  std::vector<TokenId> ids;
  ids.reserve(sentence.size() + 2);
  if (params.frame_with_specials) ids.push_back(corpus::kCls);
  ids.insert(ids.end(), sentence.begin(), sentence.end());
  if (params.frame_with_specials) ids.push_back(corpus::kSep);
  return ids;
}

Matrix Embed(const EncoderParams& params, std::span<const TokenId> sentence) {
  CheckSentence(params, sentence);
  const auto ids = Frame(params, sentence);
  Matrix m(ids.size(), params.dim());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto row = params.emb.row(ids[i]);
    std::copy(row.begin(), row.end(), m.row(i).begin());
  }
  return m;
}

std::vector<double> Pool(const EncoderParams& params, const Matrix& inputs) {
  if (inputs.cols() != params.dim()) throw Error("input width != encoder dim");
  auto mean = RowMean(inputs);
  if (params.pooler == Pooler::kMean) return mean;
  return MlpOut(params, Hidden(params, mean));
}

Matrix PoolJacobianWrtMean(const EncoderParams& params, const Matrix& inputs) {
  const std::size_t d = params.dim();
  Matrix jac(d, d);
  if (params.pooler == Pooler::kMean) {
    for (std::size_t k = 0; k < d; ++k) jac(k, k) = 1.0;
    return jac;
  }
  const auto a = Hidden(params, RowMean(inputs));
  const std::size_t h = params.hidden();
  for (std::size_t u = 0; u < h; ++u) {
    const double da = 1.0 - a[u] * a[u];
    const auto w2_row = params.w2.row(u);
    for (std::size_t j = 0; j < d; ++j) {
      const double w = params.w1(j, u) * da;
      for (std::size_t k = 0; k < d; ++k) jac(k, j) += w2_row[k] * w;
    }
  }
  return jac;
}

std::vector<double> Encode(const EncoderParams& params,
                           std::span<const TokenId> sentence) {
  return Pool(params, Embed(params, sentence));
}

double PairLikelihood(const EncoderParams& params, const ContrastivePair& pair) {
  const double x = Dot(Encode(params, pair.s), Encode(params, pair.s_prime));
  const double p = Sigmoid(x);
  return pair.label == 1 ? p : 1.0 - p;
}

double PairLogLikelihood(const EncoderParams& params,
                         const ContrastivePair& pair) {
  const double x = Dot(Encode(params, pair.s), Encode(params, pair.s_prime));
  return pair.label == 1 ? LogSigmoid(x) : LogSigmoid(-x);
}

Gradient::Gradient(const EncoderParams& params)
    : emb(params.vocab_size(), params.dim()),
      w1(params.w1.rows(), params.w1.cols()),
      w2(params.w2.rows(), params.w2.cols()),
      b1(params.b1.size(), 0.0),
      b2(params.b2.size(), 0.0),
      is_touched(params.vocab_size(), 0) {}

void Gradient::Touch(TokenId id) {
  if (!is_touched[id]) {
    is_touched[id] = 1;
    touched.push_back(id);
  }
}

void Gradient::Clear() {
  for (const TokenId id : touched) {
    auto row = emb.row(id);
    std::fill(row.begin(), row.end(), 0.0);
    is_touched[id] = 0;
  }
  touched.clear();
  std::fill(w1.data().begin(), w1.data().end(), 0.0);
  std::fill(w2.data().begin(), w2.data().end(), 0.0);
  std::fill(b1.begin(), b1.end(), 0.0);
  std::fill(b2.begin(), b2.end(), 0.0);
}

double AccumulatePairGradient(const EncoderParams& params,
                              const ContrastivePair& pair, Gradient& grad,
                              double scale) {
  const auto s = Encode(params, pair.s);
  const auto s_prime = Encode(params, pair.s_prime);
  const double x = Dot(s, s_prime);
  const double dx = static_cast<double>(pair.label) - Sigmoid(x);
  std::vector<double> g_s(s.size()), g_sp(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    g_s[k] = dx * s_prime[k];
    g_sp[k] = dx * s[k];
  }
  Backprop(params, Frame(params, pair.s), g_s, scale, grad);
  Backprop(params, Frame(params, pair.s_prime), g_sp, scale, grad);
  return pair.label == 1 ? LogSigmoid(x) : LogSigmoid(-x);
}

void TrainConfig::Validate() const {
  if (steps < 0) throw Error("steps must be non-negative");
  if (!(lr >= 0.0)) throw Error("lr must be non-negative");
  if (batch < 1) throw Error("batch must be positive");
  if (neg_per_pos < 1) throw Error("neg_per_pos must be positive");
}

std::vector<ContrastivePair> SamplePairs(const corpus::TokenizedCorpus& corpus,
                                         std::size_t num_anchors,
                                         int neg_per_pos, std::uint64_t seed) {
  if (corpus.sentences.empty()) throw Error("empty corpus");
  Rng rng(seed);
  const auto n = static_cast<std::uint64_t>(corpus.sentences.size());
  std::vector<ContrastivePair> pairs;
  pairs.reserve(num_anchors * (1 + neg_per_pos));
  for (std::size_t a = 0; a < num_anchors; ++a) {
    const auto& anchor = corpus.sentences[rng.Below(n)];
    pairs.push_back({anchor, anchor, 1});
    for (int k = 0; k < neg_per_pos; ++k) {
      pairs.push_back({anchor, corpus.sentences[rng.Below(n)], 0});
    }
  }
  return pairs;
}

double MeanPairLogLikelihood(const EncoderParams& params,
                             std::span<const ContrastivePair> pairs) {
  if (pairs.empty()) throw Error("no pairs to evaluate");
  double sum = 0.0;
  for (const auto& pair : pairs) sum += PairLogLikelihood(params, pair);
  return sum / static_cast<double>(pairs.size());
}

EncoderParams TrainContrastive(const corpus::TokenizedCorpus& corpus,
                               EncoderParams params, const TrainConfig& config,
                               TrainStats* stats) {
  config.Validate();
  params.Validate();
  corpus::ValidateCorpus(corpus, params.vocab_size());

  const auto eval_pairs = SamplePairs(corpus, 512, config.neg_per_pos,
                                      DeriveSeed(config.seed, "encoder-eval"));
  if (stats) stats->initial_mean_loglik = MeanPairLogLikelihood(params, eval_pairs);

  Gradient grad(params);
  const std::uint64_t stream = DeriveSeed(config.seed, "encoder-train");
  const double scale = 1.0 / static_cast<double>(config.batch);
  for (int step = 0; step < config.steps; ++step) {
    const auto batch = SamplePairs(corpus, config.batch, config.neg_per_pos,
                                   DeriveSeed(stream, step));
    grad.Clear();
    double loglik = 0.0;
    for (const auto& pair : batch) {
      loglik += AccumulatePairGradient(params, pair, grad, scale);
    }
    if (!std::isfinite(loglik)) {
      throw Error("contrastive training diverged at step " +
                  std::to_string(step));
    }
    for (const TokenId id : grad.touched) {
      auto row = params.emb.row(id);
      const auto g = grad.emb.row(id);
      for (std::size_t j = 0; j < row.size(); ++j) row[j] += config.lr * g[j];
    }
    if (params.pooler == Pooler::kMlp) {
      for (std::size_t i = 0; i < params.w1.data().size(); ++i) {
        params.w1.data()[i] += config.lr * grad.w1.data()[i];
      }
      for (std::size_t i = 0; i < params.w2.data().size(); ++i) {
        params.w2.data()[i] += config.lr * grad.w2.data()[i];
      }
      for (std::size_t i = 0; i < params.b1.size(); ++i) {
        params.b1[i] += config.lr * grad.b1[i];
      }
      for (std::size_t i = 0; i < params.b2.size(); ++i) {
        params.b2[i] += config.lr * grad.b2[i];
      }
    }
  }
  if (config.steps > 0) params.RefreshMaskRow();
  if (stats) stats->final_mean_loglik = MeanPairLogLikelihood(params, eval_pairs);
  return params;
}

void WriteModel(const EncoderParams& params, std::ostream& out) {
  params.Validate();
  binio::WriteMagic(out, "SENC");
  std::int32_t tag = params.pooler == Pooler::kMean ? 0 : 1;
  if (params.frame_with_specials) tag |= kFramedBit;
  binio::WriteI32(out, tag);
  binio::WriteI32(out, static_cast<std::int32_t>(params.vocab_size()));
  binio::WriteI32(out, static_cast<std::int32_t>(params.dim()));
  binio::WriteI32(out, static_cast<std::int32_t>(params.hidden()));
  binio::WriteF32(out, params.emb.data());
  if (params.pooler == Pooler::kMlp) {
    binio::WriteF32(out, params.w1.data());
    binio::WriteF32(out, params.b1);
    binio::WriteF32(out, params.w2.data());
    binio::WriteF32(out, params.b2);
  }
}

EncoderParams ReadModel(std::istream& in) {
  binio::ExpectMagic(in, "SENC");
  const std::int32_t tag = binio::ReadI32(in);
  const std::int32_t v = binio::ReadI32(in);
  const std::int32_t d = binio::ReadI32(in);
  const std::int32_t h = binio::ReadI32(in);
  const std::int32_t kind = tag & 0xff;
  if (kind > 1 || (tag & ~(0xff | kFramedBit)) != 0) {
    throw Error("unknown pooler tag " + std::to_string(tag));
  }
  if (v <= corpus::kNumSpecials || d <= 0 || h < 0 || (kind == 1 && h == 0)) {
    throw Error("invalid SENC header dimensions");
  }
  EncoderParams p;
  p.pooler = kind == 0 ? Pooler::kMean : Pooler::kMlp;
  p.frame_with_specials = (tag & kFramedBit) != 0;
  p.emb = Matrix(v, d);
  binio::ReadF32(in, p.emb.data());
  if (p.pooler == Pooler::kMlp) {
    p.w1 = Matrix(d, h);
    p.b1.assign(h, 0.0);
    p.w2 = Matrix(h, d);
    p.b2.assign(d, 0.0);
    binio::ReadF32(in, p.w1.data());
    binio::ReadF32(in, p.b1);
    binio::ReadF32(in, p.w2.data());
    binio::ReadF32(in, p.b2);
  }
  p.Validate();
  return p;
}

void SaveModel(const EncoderParams& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  WriteModel(params, out);
  if (!out) throw Error("failed writing " + path.string());
}

EncoderParams LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return ReadModel(in);
}

std::vector<double> EncoderModel::Forward(const Matrix& inputs) const {
  return Pool(params_, inputs);
}

Matrix EncoderModel::Jacobian(const Matrix& inputs) const {
  const Matrix shared = *SharedRowJacobian(inputs);
  const std::size_t n = inputs.rows(), d = inputs.cols();
  Matrix jac(shared.rows(), n * d);
  for (std::size_t k = 0; k < shared.rows(); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) jac(k, i * d + j) = shared(k, j);
    }
  }
  return jac;
}

std::optional<Matrix> EncoderModel::SharedRowJacobian(const Matrix& inputs) const {
  Matrix jac = PoolJacobianWrtMean(params_, inputs);
  const double inv = 1.0 / static_cast<double>(inputs.rows());
  for (double& x : jac.data()) x *= inv;
  return jac;
}

}  // namespace wordweight::encoder
