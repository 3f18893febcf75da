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

// Small descriptive statistics used by the norm-law check and the regression
// protocol.

#ifndef WORDWEIGHT_STATS_H_
#define WORDWEIGHT_STATS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace wordweight::stats {

// Simple linear regression y = beta * x + intercept.
struct RegressionResult {
  double beta = 0.0;
  double intercept = 0.0;
  // 1 - SS_res / SS_tot; 0 when y is constant.
  double r2 = 0.0;
  std::size_t n_points = 0;
};

// Closed-form OLS. Throws Error("zero-variance x") when x is constant and
// when fewer than two points are given.
RegressionResult Ols(std::span<const double> x, std::span<const double> y);

// Throws Error("zero-variance x") / ("zero-variance y") on constant input.
double Pearson(std::span<const double> x, std::span<const double> y);

// Pearson on average ranks (ties share their mean rank).
double Spearman(std::span<const double> x, std::span<const double> y);

std::vector<double> AverageRanks(std::span<const double> values);

// Linear-interpolated percentile, p in [0, 100] (numpy's default method).
double Percentile(std::span<const double> values, double p);

double Mean(std::span<const double> values);

}  // namespace wordweight::stats

#endif  // WORDWEIGHT_STATS_H_
