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

#include "wordweight/attribution.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "wordweight/rng.h"

namespace wordweight::attribution {

namespace {

void CheckShapes(const SentenceModel& model, const Matrix& input,
                 const Matrix& baseline) {
  if (input.rows() == 0 || input.cols() == 0) throw Error("empty input matrix");
  if (baseline.rows() != input.rows() || baseline.cols() != input.cols()) {
    std::ostringstream msg;
    msg << "baseline shape " << baseline.rows() << "x" << baseline.cols()
        << " does not match input shape " << input.rows() << "x"
        << input.cols();
    throw Error(msg.str());
  }
  if (model.output_dim() == 0) throw Error("model has no outputs");
}

bool AllFinite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(),
                     [](double x) { return std::isfinite(x); });
}

std::vector<double> EfficiencyResidual(const Matrix& phi,
                                       const std::vector<double>& full,
                                       const std::vector<double>& empty) {
  std::vector<double> residual(full.size());
  for (std::size_t k = 0; k < full.size(); ++k) {
    double sum = 0.0;
    for (std::size_t i = 0; i < phi.rows(); ++i) sum += phi(i, k);
    residual[k] = std::abs(sum - (full[k] - empty[k]));
  }
  return residual;
}

// |S|! (n - |S| - 1)! / n! for |S| = 0 .. n-1.
std::vector<double> CoalitionWeights(std::size_t n) {
  std::vector<double> w(n);
  double binom = 1.0;  // C(n-1, s)
  for (std::size_t s = 0; s < n; ++s) {
    w[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  return w;
}

void FillCoalition(const Matrix& input, const Matrix& baseline,
                   std::uint32_t mask, Matrix& x) {
  for (std::size_t i = 0; i < input.rows(); ++i) {
    const auto src = (mask >> i) & 1u ? input.row(i) : baseline.row(i);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
}

ShapleyValues ShapleyFromTable(const Matrix& values, std::size_t n) {
  const std::size_t d_out = values.cols();
  const auto weights = CoalitionWeights(n);
  const std::uint32_t full = (1u << n) - 1;
  ShapleyValues out;
  out.phi = Matrix(n, d_out);
  for (std::uint32_t mask = 0; mask < full; ++mask) {
    const double w = weights[std::popcount(mask)];
    const auto without = values.row(mask);
    for (std::size_t i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) continue;
      const auto with = values.row(mask | (1u << i));
      auto phi = out.phi.row(i);
      for (std::size_t k = 0; k < d_out; ++k) phi[k] += w * (with[k] - without[k]);
    }
  }
  const auto v_full = values.row(full);
  const auto v_empty = values.row(0);
  out.residual = EfficiencyResidual(
      out.phi, std::vector<double>(v_full.begin(), v_full.end()),
      std::vector<double>(v_empty.begin(), v_empty.end()));
  return out;
}

void CheckExactSize(std::size_t n, int max_n) {
  if (max_n < 1 || max_n > 20) throw Error("max_n must be in [1, 20]");
  if (n > static_cast<std::size_t>(max_n)) {
    throw Error("sentence has " + std::to_string(n) +
                " positions, above the exact Shapley limit of " +
                std::to_string(max_n) + "; use shapley_sampled");
  }
}

Attribution FromShapley(ShapleyValues values, int steps_or_samples) {
  Attribution a;
  a.raw = AggregateRows(values.phi);
  a.normalized = Normalize(a.raw, &a.degenerate);
  a.residual = std::move(values.residual);
  a.std_error = std::move(values.std_error);
  a.steps_or_samples = steps_or_samples;
  return a;
}

}  // namespace

std::string_view MethodName(Method method) {
  switch (method) {
    case Method::kIg:
      return "ig";
    case Method::kShapleyExact:
      return "shapley_exact";
    case Method::kShapleySampled:
      return "shapley_sampled";
  }
  return "";
}

Method ParseMethod(std::string_view name) {
  if (name == "ig") return Method::kIg;
  if (name == "shapley_exact") return Method::kShapleyExact;
  if (name == "shapley_sampled") return Method::kShapleySampled;
  throw Error("unknown attribution method '" + std::string(name) +
              "' (ig|shapley_exact|shapley_sampled)");
}

std::string_view BaselineName(BaselineKind kind) {
  return kind == BaselineKind::kPadSequence ? "pad_sequence" : "mask_sequence";
}

Matrix MakeBaseline(const encoder::EncoderParams& params,
                    std::span<const TokenId> sentence, BaselineKind kind) {
  const TokenId fill =
      kind == BaselineKind::kPadSequence ? corpus::kPad : corpus::kMask;
  const std::vector<TokenId> ids(sentence.size(), fill);
  return encoder::Embed(params, ids);
}

double Attribution::residual_max() const {
  double m = 0.0;
  for (const double r : residual) m = std::max(m, r);
  return m;
}

std::vector<double> Normalize(std::span<const double> raw, bool* degenerate) {
  if (raw.empty()) throw Error("cannot normalize an empty attribution");
  const double mean =
      std::accumulate(raw.begin(), raw.end(), 0.0) / static_cast<double>(raw.size());
  const bool zero = !(mean > 0.0);
  if (degenerate) *degenerate = zero;
  std::vector<double> out(raw.size(), 1.0);
  if (zero) return out;
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / mean;
  return out;
}

std::vector<double> AggregateCells(const Matrix& scores, std::size_t n) {
  if (n == 0 || scores.cols() % n != 0) {
    throw Error("score matrix width is not a multiple of the sentence length");
  }
  const std::size_t d = scores.cols() / n;
  std::vector<double> c(n, 0.0);
  for (std::size_t k = 0; k < scores.rows(); ++k) {
    const auto row = scores.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) c[i] += row[i * d + j] * row[i * d + j];
    }
  }
  for (double& v : c) v = std::sqrt(v);
  return c;
}

std::vector<double> AggregateRows(const Matrix& phi) {
  std::vector<double> c(phi.rows());
  for (std::size_t i = 0; i < phi.rows(); ++i) c[i] = std::sqrt(SquaredNorm(phi.row(i)));
  return c;
}

IgScores IntegratedGradientsScores(const SentenceModel& model,
                                   const Matrix& input, const Matrix& baseline,
                                   int steps) {
  CheckShapes(model, input, baseline);
  if (steps < 1) throw Error("IG steps must be at least 1");
  const std::size_t n = input.rows(), d = input.cols();
  const std::size_t d_out = model.output_dim();

  Matrix diff(n, d);
  for (std::size_t c = 0; c < diff.data().size(); ++c) {
    diff.data()[c] = input.data()[c] - baseline.data()[c];
  }

  // Sum of path gradients; either d_out x d (shared rows) or d_out x n*d.
  Matrix sum;
  bool shared = false;
  Matrix x(n, d);
  for (int t = 0; t < steps; ++t) {
    const double alpha = (t + 0.5) / steps;
    for (std::size_t c = 0; c < x.data().size(); ++c) {
      x.data()[c] = baseline.data()[c] + alpha * diff.data()[c];
    }
    auto block = model.SharedRowJacobian(x);
    Matrix grad = block ? std::move(*block) : model.Jacobian(x);
    if (t == 0) {
      shared = block.has_value();
      sum = Matrix(grad.rows(), grad.cols());
    } else if (shared != block.has_value() || grad.cols() != sum.cols()) {
      throw Error("model switched Jacobian layout along the path");
    }
    if (!AllFinite(grad.data())) {
      std::ostringstream msg;
      msg << "non-finite gradient at alpha=" << alpha;
      throw Error(msg.str());
    }
    for (std::size_t c = 0; c < grad.data().size(); ++c) {
      sum.data()[c] += grad.data()[c];
    }
  }

  IgScores out;
  out.scores = Matrix(d_out, n * d);
  const double inv = 1.0 / steps;
  for (std::size_t k = 0; k < d_out; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const double g = shared ? sum(k, j) : sum(k, i * d + j);
        out.scores(k, i * d + j) = diff(i, j) * g * inv;
      }
    }
  }
  const auto m_w = model.Forward(input);
  const auto m_b = model.Forward(baseline);
  out.residual.resize(d_out);
  out.delta.resize(d_out);
  for (std::size_t k = 0; k < d_out; ++k) {
    const auto row = out.scores.row(k);
    const double total = std::accumulate(row.begin(), row.end(), 0.0);
    out.residual[k] = std::abs(total + m_b[k] - m_w[k]);
    out.delta[k] = std::abs(m_w[k] - m_b[k]);
  }
  return out;
}

Attribution IntegratedGradients(const SentenceModel& model, const Matrix& input,
                                const Matrix& baseline, int steps) {
  IgScores scores = IntegratedGradientsScores(model, input, baseline, steps);
  Attribution a;
  a.raw = AggregateCells(scores.scores, input.rows());
  a.normalized = Normalize(a.raw, &a.degenerate);
  a.residual = std::move(scores.residual);
  a.steps_or_samples = steps;
  return a;
}

ShapleyValues ShapleyExactValues(const SentenceModel& model, const Matrix& input,
                                 const Matrix& baseline, int max_n) {
  CheckShapes(model, input, baseline);
  CheckExactSize(input.rows(), max_n);
  const std::size_t n = input.rows();
  const std::int64_t num = std::int64_t{1} << n;
  Matrix values(num, model.output_dim());
#pragma omp parallel
  {
    Matrix x(n, input.cols());
#pragma omp for schedule(static)
    for (std::int64_t mask = 0; mask < num; ++mask) {
      FillCoalition(input, baseline, static_cast<std::uint32_t>(mask), x);
      const auto v = model.Forward(x);
      std::copy(v.begin(), v.end(), values.row(mask).begin());
    }
  }
  return ShapleyFromTable(values, n);
}

ShapleyValues ShapleyExactValuesSerial(const SentenceModel& model,
                                       const Matrix& input,
                                       const Matrix& baseline, int max_n) {
  CheckShapes(model, input, baseline);
  CheckExactSize(input.rows(), max_n);
  const std::size_t n = input.rows();
  const std::uint32_t num = 1u << n;
  Matrix values(num, model.output_dim());
  Matrix x(n, input.cols());
  for (std::uint32_t mask = 0; mask < num; ++mask) {
    FillCoalition(input, baseline, mask, x);
    const auto v = model.Forward(x);
    std::copy(v.begin(), v.end(), values.row(mask).begin());
  }
  return ShapleyFromTable(values, n);
}

ShapleyValues ShapleySampledValues(const SentenceModel& model,
                                   const Matrix& input, const Matrix& baseline,
                                   int samples, std::uint64_t seed) {
  CheckShapes(model, input, baseline);
  if (samples < 2 || samples % 2 != 0) {
    throw Error("Shapley samples must be even and at least 2");
  }
  const std::size_t n = input.rows(), d_out = model.output_dim();
  const int pairs = samples / 2;
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  Matrix x(n, input.cols());
  Matrix pair_est(n, d_out);
  // Welford over antithetic pair estimates.
  Matrix mean(n, d_out), m2(n, d_out);

  const auto walk = [&](auto begin, auto end) {
    x = baseline;
    auto prev = model.Forward(x);
    for (auto it = begin; it != end; ++it) {
      const auto src = input.row(*it);
      std::copy(src.begin(), src.end(), x.row(*it).begin());
      auto cur = model.Forward(x);
      auto est = pair_est.row(*it);
      for (std::size_t k = 0; k < d_out; ++k) est[k] += 0.5 * (cur[k] - prev[k]);
      prev = std::move(cur);
    }
  };

  for (int p = 0; p < pairs; ++p) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.Below(i)]);
    std::fill(pair_est.data().begin(), pair_est.data().end(), 0.0);
    walk(perm.begin(), perm.end());
    walk(perm.rbegin(), perm.rend());
    const double count = p + 1;
    for (std::size_t c = 0; c < pair_est.data().size(); ++c) {
      const double v = pair_est.data()[c];
      const double delta = v - mean.data()[c];
      mean.data()[c] += delta / count;
      m2.data()[c] += delta * (v - mean.data()[c]);
    }
  }

  ShapleyValues out;
  out.phi = mean;
  out.std_error.assign(n, 0.0);
  if (pairs > 1) {
    for (std::size_t i = 0; i < n; ++i) {
      double var = 0.0;
      for (std::size_t k = 0; k < d_out; ++k) var += m2(i, k) / (pairs - 1);
      out.std_error[i] = std::sqrt(var / pairs);
    }
  }
  out.residual = EfficiencyResidual(out.phi, model.Forward(input),
                                    model.Forward(baseline));
  return out;
}

Attribution ShapleyExact(const SentenceModel& model, const Matrix& input,
                         const Matrix& baseline, int max_n) {
  auto values = ShapleyExactValues(model, input, baseline, max_n);
  return FromShapley(std::move(values), 1 << input.rows());
}

Attribution ShapleySampled(const SentenceModel& model, const Matrix& input,
                           const Matrix& baseline, int samples,
                           std::uint64_t seed) {
  return FromShapley(ShapleySampledValues(model, input, baseline, samples, seed),
                     samples);
}

void AttributionOptions::Validate() const {
  if (steps < 1) throw Error("steps must be at least 1");
  if (max_n < 1 || max_n > 20) throw Error("max_n must be in [1, 20]");
  if (samples < 2 || samples % 2 != 0) {
    throw Error("samples must be even and at least 2");
  }
}

namespace {

SentenceAttribution AttributeOne(const encoder::EncoderParams& params,
                                 std::span<const TokenId> sentence,
                                 std::int64_t sentence_id,
                                 const corpus::Vocab& vocab,
                                 const AttributionOptions& options,
                                 bool parallel) {
  SentenceAttribution out;
  out.sentence_id = sentence_id;
  try {
    for (const TokenId id : encoder::Frame(params, sentence)) {
      out.tokens.push_back(vocab.Token(id));
    }
    const encoder::EncoderModel model(params);
    const Matrix input = encoder::Embed(params, sentence);
    switch (options.method) {
      case Method::kIg:
        out.attribution = IntegratedGradients(
            model, input,
            MakeBaseline(params, sentence, BaselineKind::kPadSequence),
            options.steps);
        break;
      case Method::kShapleyExact:
      {
        const Matrix baseline =
            MakeBaseline(params, sentence, BaselineKind::kMaskSequence);
        out.attribution = FromShapley(
            parallel ? ShapleyExactValues(model, input, baseline, options.max_n)
                     : ShapleyExactValuesSerial(model, input, baseline,
                                                options.max_n),
            1 << input.rows());
      }
        break;
      case Method::kShapleySampled:
        out.attribution = ShapleySampled(
            model, input,
            MakeBaseline(params, sentence, BaselineKind::kMaskSequence),
            options.samples,
            DeriveSeed(options.seed, static_cast<std::uint64_t>(sentence_id)));
        break;
    }
  } catch (const std::exception& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

SentenceAttribution AttributeSentence(const encoder::EncoderParams& params,
                                      std::span<const TokenId> sentence,
                                      std::int64_t sentence_id,
                                      const corpus::Vocab& vocab,
                                      const AttributionOptions& options) {
  return AttributeOne(params, sentence, sentence_id, vocab, options, true);
}

std::vector<SentenceAttribution> AttributeCorpus(
    const encoder::EncoderParams& params, const corpus::TokenizedCorpus& corpus,
    const corpus::Vocab& vocab, const AttributionOptions& options) {
  options.Validate();
  const auto num = static_cast<std::int64_t>(corpus.sentences.size());
  std::vector<SentenceAttribution> out(num);
  // Exact Shapley parallelizes internally; keep one level of threads.
#pragma omp parallel for schedule(dynamic, 8) if (options.method != Method::kShapleyExact)
  for (std::int64_t s = 0; s < num; ++s) {
    out[s] = AttributeOne(params, corpus.sentences[s], s, vocab, options, true);
  }
  return out;
}

std::vector<SentenceAttribution> AttributeCorpusSerial(
    const encoder::EncoderParams& params, const corpus::TokenizedCorpus& corpus,
    const corpus::Vocab& vocab, const AttributionOptions& options) {
  options.Validate();
  std::vector<SentenceAttribution> out;
  out.reserve(corpus.sentences.size());
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    out.push_back(AttributeOne(params, corpus.sentences[s],
                               static_cast<std::int64_t>(s), vocab, options,
                               false));
  }
  return out;
}

}  // namespace wordweight::attribution
