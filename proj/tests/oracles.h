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


// Independent reference implementations used as test oracles. They favor the
// most literal reading of each definition over speed.

#ifndef WORDWEIGHT_TESTS_ORACLES_H_
#define WORDWEIGHT_TESTS_ORACLES_H_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "wordweight/common.h"
#include "wordweight/corpus.h"
#include "wordweight/encoder.h"
#include "wordweight/rng.h"

namespace wordweight::oracle {

using Sentences = std::vector<std::vector<std::string>>;

struct NaiveStats {
  std::int64_t count = 0;
  std::int64_t doc_freq = 0;
  double kl = 0.0;
  double self_info = 0.0;
  double idf = 0.0;
  double sif = 0.0;
};

// Concatenate-and-count. `content_vocab` lists every content token the
// smoothed distributions range over.
inline std::map<std::string, NaiveStats> Quantities(
    const Sentences& sentences, const std::vector<std::string>& content_vocab,
    double sif_a, double smoothing) {
  std::map<std::string, std::int64_t> unigram;
  std::int64_t total = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      ++unigram[t];
      ++total;
    }
  }
  std::map<std::string, NaiveStats> out;
  for (const auto& [w, count] : unigram) {
    std::vector<std::string> pooled;
    std::int64_t df = 0;
    for (const auto& s : sentences) {
      if (std::find(s.begin(), s.end(), w) == s.end()) continue;
      ++df;
      pooled.insert(pooled.end(), s.begin(), s.end());
    }
    std::map<std::string, std::int64_t> cond;
    for (const auto& t : pooled) ++cond[t];

    double kl = 0.0;
    if (smoothing == 0.0) {
      for (const auto& [v, c] : cond) {
        const double q = static_cast<double>(c) / pooled.size();
        const double p = static_cast<double>(unigram.at(v)) / total;
        kl += q * std::log(q / p);
      }
    } else {
      const double vsize = static_cast<double>(content_vocab.size());
      for (const auto& v : content_vocab) {
        const double cq = cond.count(v) ? cond.at(v) : 0;
        const double cp = unigram.count(v) ? unigram.at(v) : 0;
        const double q = (cq + smoothing) / (pooled.size() + smoothing * vsize);
        const double p = (cp + smoothing) / (total + smoothing * vsize);
        kl += q * std::log(q / p);
      }
    }
    NaiveStats st;
    st.count = count;
    st.doc_freq = df;
    st.kl = std::max(kl, 0.0);
    const double p = static_cast<double>(count) / total;
    st.self_info = -std::log(p);
    st.idf = std::log(static_cast<double>(sentences.size()) / df);
    st.sif = sif_a / (sif_a + p);
    out[w] = st;
  }
  return out;
}

struct OlsFit {
  double beta = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Normal equations [1 x]^T [1 x] theta = [1 x]^T y, solved by Eigen.
inline OlsFit Ols(const std::vector<double>& x, const std::vector<double>& y) {
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, 2);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = x[i];
    b(i) = y[i];
  }
  const Eigen::Vector2d theta = (a.transpose() * a).ldlt().solve(a.transpose() * b);
  const Eigen::VectorXd res = b - a * theta;
  const double mean = b.mean();
  const double ss_tot = (b.array() - mean).square().sum();
  OlsFit fit;
  fit.intercept = theta(0);
  fit.beta = theta(1);
  fit.r2 = ss_tot == 0.0 ? 0.0 : 1.0 - res.squaredNorm() / ss_tot;
  return fit;
}

// Reference pooling forward pass written directly from the definition.
inline std::vector<double> ReferencePool(const encoder::EncoderParams& p, const Matrix& x) {
  const std::size_t n = x.rows(), d = x.cols();
  std::vector<double> mu(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n; ++i) mu[j] += x(i, j);
    mu[j] /= static_cast<double>(n);
  }
  if (p.pooler == encoder::Pooler::kMean) return mu;
  const std::size_t h = p.hidden();
  std::vector<double> z(h);
  for (std::size_t k = 0; k < h; ++k) {
    double acc = p.b1[k];
    for (std::size_t j = 0; j < d; ++j) acc += mu[j] * p.w1(j, k);
    z[k] = std::tanh(acc);
  }
  std::vector<double> out(d);
  for (std::size_t j = 0; j < d; ++j) {
    double acc = p.b2[j];
    for (std::size_t k = 0; k < h; ++k) acc += z[k] * p.w2(k, j);
    out[j] = acc;
  }
  return out;
}

inline double PairLogLikelihood(const encoder::EncoderParams& p,
                                const encoder::ContrastivePair& pair) {
  auto embed = [&](const std::vector<TokenId>& s) {
    const auto ids = encoder::Frame(p, s);
    Matrix m(ids.size(), p.dim());
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < p.dim(); ++j) m(i, j) = p.emb(ids[i], j);
    }
    return ReferencePool(p, m);
  };
  const auto a = embed(pair.s), b = embed(pair.s_prime);
  double dot = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) dot += a[j] * b[j];
  const double sig = 1.0 / (1.0 + std::exp(-dot));
  return std::log(pair.label == 1 ? sig : 1.0 - sig);
}

// Central differences of f at x, one coordinate at a time.
inline std::vector<double> FiniteDifference(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x, double h = 1e-5) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double keep = x[i];
    x[i] = keep + h;
    const double up = f(x);
    x[i] = keep - h;
    const double down = f(x);
    x[i] = keep;
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

// max_i |a_i - b_i| / max(|a_i|, |b_i|, floor)
inline double MaxRelativeError(const std::vector<double>& a,
                               const std::vector<double>& b, double floor = 1e-6) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double scale = std::max({std::abs(a[i]), std::abs(b[i]), floor});
    worst = std::max(worst, std::abs(a[i] - b[i]) / scale);
  }
  return worst;
}

// Shapley values by averaging marginal contributions over all n! orders.
// Returns n x d_out.
inline Matrix ShapleyByPermutations(
    const std::function<std::vector<double>(const Matrix&)>& f,
    const Matrix& input, const Matrix& baseline) {
  const std::size_t n = input.rows(), d = input.cols();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t d_out = f(input).size();
  Matrix phi(n, d_out);
  double count = 0.0;
  do {
    Matrix x = baseline;
    std::vector<double> prev = f(x);
    for (const std::size_t i : order) {
      for (std::size_t j = 0; j < d; ++j) x(i, j) = input(i, j);
      const std::vector<double> cur = f(x);
      for (std::size_t k = 0; k < d_out; ++k) phi(i, k) += cur[k] - prev[k];
      prev = cur;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi.data()) v /= count;
  return phi;
}

inline Matrix RandomMatrix(std::size_t rows, std::size_t cols, Rng& rng,
                           double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = scale * rng.Normal();
  return m;
}

// Random corpus over a small alphabet, as token strings.
inline Sentences RandomSentences(Rng& rng, std::size_t num_sentences,
                                 std::size_t alphabet, std::size_t max_len) {
  Sentences out(num_sentences);
  for (auto& s : out) {
    const std::size_t len = 1 + rng.Below(max_len);
    for (std::size_t i = 0; i < len; ++i) {
      s.push_back("w" + std::to_string(rng.Below(alphabet)));
    }
  }
  return out;
}

inline std::string JoinLines(const Sentences& sentences) {
  std::string text;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (i) text += ' ';
      text += s[i];
    }
    text += '\n';
  }
  return text;
}

}  // namespace wordweight::oracle

#endif  // WORDWEIGHT_TESTS_ORACLES_H_
