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

#include "wordweight/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wordweight/common.h"

namespace wordweight::stats {

namespace {

void CheckSameSize(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("x and y differ in length");
}

struct Moments {
  double mean_x = 0, mean_y = 0, sxx = 0, syy = 0, sxy = 0;
};

// Two-pass centered moments.
Moments CenteredMoments(std::span<const double> x, std::span<const double> y) {
  Moments m;
  m.mean_x = Mean(x);
  m.mean_y = Mean(y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.sxx += dx * dx;
    m.syy += dy * dy;
    m.sxy += dx * dy;
  }
  return m;
}

}  // namespace

double Mean(std::span<const double> values) {
  if (values.empty()) throw Error("mean of empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

RegressionResult Ols(std::span<const double> x, std::span<const double> y) {
  CheckSameSize(x, y);
  if (x.size() < 2) throw Error("regression needs at least two points");
  const Moments m = CenteredMoments(x, y);
  if (m.sxx == 0.0) throw Error("zero-variance x");
  RegressionResult r;
  r.n_points = x.size();
  r.beta = m.sxy / m.sxx;
  r.intercept = m.mean_y - r.beta * m.mean_x;
  if (m.syy == 0.0) {
    r.r2 = 0.0;
    return r;
  }
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (r.beta * x[i] + r.intercept);
    ss_res += e * e;
  }
  r.r2 = 1.0 - ss_res / m.syy;
  return r;
}

double Pearson(std::span<const double> x, std::span<const double> y) {
  CheckSameSize(x, y);
  if (x.size() < 2) throw Error("correlation needs at least two points");
  const Moments m = CenteredMoments(x, y);
  if (m.sxx == 0.0) throw Error("zero-variance x");
  if (m.syy == 0.0) throw Error("zero-variance y");
  return m.sxy / std::sqrt(m.sxx * m.syy);
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double Spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  return Pearson(rx, ry);
}

double Percentile(std::span<const double> values, double p) {
  if (values.empty()) throw Error("percentile of empty sample");
  if (!(p >= 0.0 && p <= 100.0)) throw Error("percentile must lie in [0, 100]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace wordweight::stats
