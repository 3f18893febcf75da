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

// Regressing attributions on per-type information quantities.
//
// Each token occurrence in a dump is one point (x = quantity of its type,
// y = normalized contribution c'). Fits are simple OLS; model comparisons
// are reported as R^2 x 100 and beta x 100 with deltas against a baseline.

#ifndef WORDWEIGHT_ANALYSIS_H_
#define WORDWEIGHT_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wordweight/dump.h"
#include "wordweight/infostats.h"
#include "wordweight/stats.h"

namespace wordweight::analysis {

enum class Quantity { kKl, kSelfInfo, kIdf, kSif };

std::string_view QuantityName(Quantity quantity);
Quantity ParseQuantity(std::string_view name);
double QuantityValue(const infostats::TokenStats& row, Quantity quantity);

std::vector<std::string> DefaultStoplist();

struct RegressionOptions {
  Quantity quantity = Quantity::kKl;
  // Drop points whose x exceeds this percentile of the quantity table.
  std::optional<double> percentile_cap;
  // Keep a seeded random subset of this many points; 0 keeps all.
  std::size_t subsample = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> stoplist = DefaultStoplist();
  double min_coverage = 0.9;
};

struct RegressionInput {
  Quantity quantity = Quantity::kKl;
  std::vector<std::string> tokens;
  std::vector<double> x;
  std::vector<double> y;
  std::size_t stoplisted = 0;
  std::size_t joined = 0;
  std::size_t missing = 0;
  std::size_t capped = 0;
  std::optional<double> cap_value;

  std::size_t size() const { return x.size(); }
  double coverage() const;
};

// Throws Error listing the most frequent missing tokens when the join
// coverage is below options.min_coverage.
RegressionInput BuildRegression(std::span<const dump::Record> records,
                                const infostats::TokenQuantities& quantities,
                                const RegressionOptions& options);

stats::RegressionResult Fit(const RegressionInput& input);

struct ReportEntry {
  std::string model;
  Quantity quantity = Quantity::kKl;
  stats::RegressionResult fit;
};

struct ReportRow {
  std::string model;
  std::string quantity;
  double r2_x100 = 0.0;
  double beta_x100 = 0.0;
  double delta_r2_x100 = 0.0;
  double delta_beta_x100 = 0.0;
  std::size_t n_points = 0;
};

// Rows in input order; deltas are against the baseline model's entry for the
// same quantity.
std::vector<ReportRow> CompareModels(std::span<const ReportEntry> entries,
                                     std::string_view baseline);

// One decimal place.
std::string FormatValue(double value);
// Signed, one decimal place: "+32.4", "-1.5"; zero renders as "0.0".
std::string FormatDelta(double delta);

// model,quantity,r2_x100,beta_x100,delta_r2_x100,delta_beta_x100,n_points
void WriteReportCsv(std::span<const ReportRow> rows, std::ostream& out);
// Aligned table with bracketed deltas.
void WriteReportText(std::span<const ReportRow> rows, std::ostream& out);

struct SentenceSeries {
  std::int64_t sentence_id = 0;
  std::vector<std::string> tokens;  // non-stoplisted positions
  std::vector<double> kl_normalized;
  std::vector<std::string> models;
  // weights[m][i]: c' of model m, renormalized over the kept positions.
  std::vector<std::vector<double>> weights;
};

struct LabeledDump {
  std::string label;
  std::vector<dump::Record> records;
};

// KL over kept positions scaled to sum to the number of kept positions.
std::vector<SentenceSeries> SentenceView(
    std::span<const LabeledDump> dumps,
    const infostats::TokenQuantities& quantities,
    std::span<const std::int64_t> sentence_ids,
    const std::vector<std::string>& stoplist = DefaultStoplist());

// sentence_id,position,token,kl_normalized,<model labels...>
void WriteSentenceViewCsv(std::span<const SentenceSeries> series,
                          std::ostream& out);

double MeanAbsDeviation(std::span<const double> a, std::span<const double> b);

// token,x,y rows.
void WriteScatterCsv(const RegressionInput& input, std::ostream& out);
// Self-contained SVG with the points and the fitted line.
std::string ScatterSvg(const RegressionInput& input,
                       const stats::RegressionResult& fit);
void ScatterExport(const RegressionInput& input,
                   const stats::RegressionResult& fit,
                   const std::filesystem::path& csv_path,
                   const std::filesystem::path& svg_path);

}  // namespace wordweight::analysis

#endif  // WORDWEIGHT_ANALYSIS_H_
