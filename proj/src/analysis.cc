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

#include "wordweight/analysis.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "wordweight/corpus.h"
#include "wordweight/csv.h"
#include "wordweight/rng.h"

namespace wordweight::analysis {

namespace {

std::string Fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

const infostats::TokenStats& Lookup(
    const std::unordered_map<std::string, std::size_t>& index,
    const infostats::TokenQuantities& quantities, const std::string& token) {
  const auto it = index.find(token);
  if (it == index.end()) throw Error("token '" + token + "' has no quantities");
  return quantities.rows[it->second];
}

}  // namespace

std::string_view QuantityName(Quantity quantity) {
  switch (quantity) {
    case Quantity::kKl:
      return "kl";
    case Quantity::kSelfInfo:
      return "self_info";
    case Quantity::kIdf:
      return "idf";
    case Quantity::kSif:
      return "sif";
  }
  return "";
}

Quantity ParseQuantity(std::string_view name) {
  if (name == "kl") return Quantity::kKl;
  if (name == "self_info") return Quantity::kSelfInfo;
  if (name == "idf") return Quantity::kIdf;
  if (name == "sif") return Quantity::kSif;
  throw Error("unknown quantity '" + std::string(name) +
              "' (kl|self_info|idf|sif)");
}

double QuantityValue(const infostats::TokenStats& row, Quantity quantity) {
  switch (quantity) {
    case Quantity::kKl:
      return row.kl;
    case Quantity::kSelfInfo:
      return row.self_info;
    case Quantity::kIdf:
      return row.idf;
    case Quantity::kSif:
      return row.sif_weight;
  }
  return 0.0;
}

std::vector<std::string> DefaultStoplist() {
  return {std::string(corpus::kPadToken), std::string(corpus::kClsToken),
          std::string(corpus::kSepToken), std::string(corpus::kMaskToken)};
}

double RegressionInput::coverage() const {
  const std::size_t total = joined + missing;
  return total == 0 ? 1.0 : static_cast<double>(joined) / static_cast<double>(total);
}

RegressionInput BuildRegression(std::span<const dump::Record> records,
                                const infostats::TokenQuantities& quantities,
                                const RegressionOptions& options) {
  if (!(options.min_coverage >= 0.0 && options.min_coverage <= 1.0)) {
    throw Error("min_coverage must be in [0, 1]");
  }
  RegressionInput out;
  out.quantity = options.quantity;
  if (options.percentile_cap) {
    if (!(*options.percentile_cap >= 0.0 && *options.percentile_cap <= 100.0)) {
      throw Error("percentile cap must be in [0, 100]");
    }
    std::vector<double> column;
    column.reserve(quantities.rows.size());
    for (const auto& row : quantities.rows) {
      column.push_back(QuantityValue(row, options.quantity));
    }
    if (column.empty()) throw Error("quantities table is empty");
    out.cap_value = stats::Percentile(column, *options.percentile_cap);
  }

  const std::unordered_set<std::string> stop(options.stoplist.begin(),
                                             options.stoplist.end());
  const auto index = quantities.IndexByToken();
  std::map<std::string, std::size_t> missing_counts;
  for (const auto& record : records) {
    if (record.tokens.size() != record.normalized.size()) {
      throw Error("record for sentence " + std::to_string(record.sentence_id) +
                  " has mismatched token and weight counts");
    }
    for (std::size_t i = 0; i < record.tokens.size(); ++i) {
      const std::string& token = record.tokens[i];
      if (stop.contains(token)) {
        ++out.stoplisted;
        continue;
      }
      const auto it = index.find(token);
      if (it == index.end()) {
        ++out.missing;
        ++missing_counts[token];
        continue;
      }
      ++out.joined;
      const double x = QuantityValue(quantities.rows[it->second], options.quantity);
      if (out.cap_value && x > *out.cap_value) {
        ++out.capped;
        continue;
      }
      out.tokens.push_back(token);
      out.x.push_back(x);
      out.y.push_back(record.normalized[i]);
    }
  }

  if (out.coverage() < options.min_coverage) {
    std::vector<std::pair<std::size_t, std::string>> top;
    for (const auto& [token, count] : missing_counts) top.emplace_back(count, token);
    std::sort(top.begin(), top.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::ostringstream msg;
    msg << "join coverage " << Fixed(100.0 * out.coverage(), 1)
        << "% is below " << Fixed(100.0 * options.min_coverage, 1)
        << "%; most frequent missing tokens:";
    for (std::size_t i = 0; i < std::min<std::size_t>(top.size(), 10); ++i) {
      msg << " '" << top[i].second << "' (" << top[i].first << ")";
    }
    throw Error(msg.str());
  }

  if (options.subsample > 0 && options.subsample < out.size()) {
    std::vector<std::size_t> order(out.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.subsample; ++i) {
      std::swap(order[i], order[i + rng.Below(order.size() - i)]);
    }
    order.resize(options.subsample);
    std::sort(order.begin(), order.end());
    RegressionInput kept = out;
    kept.tokens.clear();
    kept.x.clear();
    kept.y.clear();
    for (const std::size_t i : order) {
      kept.tokens.push_back(out.tokens[i]);
      kept.x.push_back(out.x[i]);
      kept.y.push_back(out.y[i]);
    }
    out = std::move(kept);
  }
  return out;
}

stats::RegressionResult Fit(const RegressionInput& input) {
  return stats::Ols(input.x, input.y);
}

std::vector<ReportRow> CompareModels(std::span<const ReportEntry> entries,
                                     std::string_view baseline) {
  std::map<std::pair<std::string, Quantity>, const ReportEntry*> by_key;
  for (const auto& e : entries) {
    if (!by_key.emplace(std::pair{e.model, e.quantity}, &e).second) {
      throw Error("duplicate report entry for model '" + e.model +
                  "' and quantity '" + std::string(QuantityName(e.quantity)) + "'");
    }
  }
  std::vector<ReportRow> rows;
  rows.reserve(entries.size());
  for (const auto& e : entries) {
    const auto base = by_key.find({std::string(baseline), e.quantity});
    if (base == by_key.end()) {
      throw Error("baseline model '" + std::string(baseline) +
                  "' has no entry for quantity '" +
                  std::string(QuantityName(e.quantity)) + "'");
    }
    ReportRow row;
    row.model = e.model;
    row.quantity = QuantityName(e.quantity);
    row.r2_x100 = 100.0 * e.fit.r2;
    row.beta_x100 = 100.0 * e.fit.beta;
    row.delta_r2_x100 = 100.0 * (e.fit.r2 - base->second->fit.r2);
    row.delta_beta_x100 = 100.0 * (e.fit.beta - base->second->fit.beta);
    row.n_points = e.fit.n_points;
    rows.push_back(row);
  }
  return rows;
}

std::string FormatValue(double value) {
  std::string s = Fixed(value, 1);
  return s == "-0.0" ? "0.0" : s;
}

std::string FormatDelta(double delta) {
  std::string s = Fixed(delta, 1);
  if (s == "0.0" || s == "-0.0") return "0.0";
  return s[0] == '-' ? s : "+" + s;
}

void WriteReportCsv(std::span<const ReportRow> rows, std::ostream& out) {
  out << "model,quantity,r2_x100,beta_x100,delta_r2_x100,delta_beta_x100,"
         "n_points\n";
  for (const auto& r : rows) {
    out << csv::Escape(r.model) << ',' << csv::Escape(r.quantity) << ','
        << FormatValue(r.r2_x100) << ',' << FormatValue(r.beta_x100) << ','
        << FormatDelta(r.delta_r2_x100) << ',' << FormatDelta(r.delta_beta_x100)
        << ',' << r.n_points << '\n';
  }
}

void WriteReportText(std::span<const ReportRow> rows, std::ostream& out) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"Model", "Quantity", "R2 x 100", "beta x 100"});
  for (const auto& r : rows) {
    cells.push_back({r.model, r.quantity,
                     FormatValue(r.r2_x100) + " (" + FormatDelta(r.delta_r2_x100) + ")",
                     FormatValue(r.beta_x100) + " (" + FormatDelta(r.delta_beta_x100) + ")"});
  }
  std::vector<std::size_t> width(4, 0);
  for (const auto& line : cells) {
    for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::size_t total = 0;
  for (const std::size_t w : width) total += w;
  total += 3 * 2;
  const std::string rule(total, '-');
  for (std::size_t l = 0; l < cells.size(); ++l) {
    std::string text;
    for (std::size_t c = 0; c < 4; ++c) {
      const std::string& cell = cells[l][c];
      const std::string pad(width[c] - cell.size(), ' ');
      if (c > 0) text += "  ";
      text += c < 2 ? cell + pad : pad + cell;
    }
    while (!text.empty() && text.back() == ' ') text.pop_back();
    if (l == 0) out << rule << '\n';
    out << text << '\n';
    if (l == 0) out << rule << '\n';
  }
  out << rule << '\n';
}

std::vector<SentenceSeries> SentenceView(
    std::span<const LabeledDump> dumps,
    const infostats::TokenQuantities& quantities,
    std::span<const std::int64_t> sentence_ids,
    const std::vector<std::string>& stoplist) {
  if (dumps.empty()) throw Error("sentence view needs at least one dump");
  const std::unordered_set<std::string> stop(stoplist.begin(), stoplist.end());
  const auto index = quantities.IndexByToken();
  std::vector<std::unordered_map<std::int64_t, const dump::Record*>> by_id(dumps.size());
  for (std::size_t m = 0; m < dumps.size(); ++m) {
    for (const auto& r : dumps[m].records) by_id[m][r.sentence_id] = &r;
  }

  std::vector<SentenceSeries> out;
  for (const std::int64_t id : sentence_ids) {
    SentenceSeries series;
    series.sentence_id = id;
    for (std::size_t m = 0; m < dumps.size(); ++m) {
      const auto it = by_id[m].find(id);
      if (it == by_id[m].end()) {
        throw Error("sentence " + std::to_string(id) + " is not in dump '" +
                    dumps[m].label + "'");
      }
      const dump::Record& r = *it->second;
      std::vector<std::string> tokens;
      std::vector<double> weights;
      for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        if (stop.contains(r.tokens[i])) continue;
        tokens.push_back(r.tokens[i]);
        weights.push_back(r.normalized[i]);
      }
      if (tokens.empty()) {
        throw Error("sentence " + std::to_string(id) + " has no content tokens");
      }
      if (m == 0) {
        series.tokens = tokens;
      } else if (tokens != series.tokens) {
        throw Error("dumps disagree on the tokens of sentence " + std::to_string(id));
      }
      const double mean = stats::Mean(weights);
      for (double& w : weights) w = mean > 0.0 ? w / mean : 1.0;
      series.models.push_back(dumps[m].label);
      series.weights.push_back(std::move(weights));
    }
    const std::size_t n = series.tokens.size();
    double total = 0.0;
    for (const auto& token : series.tokens) {
      const double kl = Lookup(index, quantities, token).kl;
      series.kl_normalized.push_back(kl);
      total += kl;
    }
    for (double& v : series.kl_normalized) {
      v = total > 0.0 ? v * static_cast<double>(n) / total : 1.0;
    }
    out.push_back(std::move(series));
  }
  return out;
}

void WriteSentenceViewCsv(std::span<const SentenceSeries> series,
                          std::ostream& out) {
  out << "sentence_id,position,token,kl_normalized";
  if (!series.empty()) {
    for (const auto& label : series.front().models) out << ',' << csv::Escape(label);
  }
  out << '\n';
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      out << s.sentence_id << ',' << i << ',' << csv::Escape(s.tokens[i]) << ','
          << csv::FormatSig(s.kl_normalized[i], 10);
      for (const auto& w : s.weights) out << ',' << csv::FormatSig(w[i], 10);
      out << '\n';
    }
  }
}

double MeanAbsDeviation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw Error("mean absolute deviation needs equal non-empty series");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

void WriteScatterCsv(const RegressionInput& input, std::ostream& out) {
  out << "token,x,y\n";
  for (std::size_t i = 0; i < input.size(); ++i) {
    out << csv::Escape(input.tokens[i]) << ',' << csv::FormatSig(input.x[i], 10)
        << ',' << csv::FormatSig(input.y[i], 10) << '\n';
  }
}

std::string ScatterSvg(const RegressionInput& input,
                       const stats::RegressionResult& fit) {
  if (input.size() == 0) throw Error("scatter export needs at least one point");
  constexpr double kWidth = 640, kHeight = 480, kMargin = 48;
  const auto [x_lo_it, x_hi_it] = std::minmax_element(input.x.begin(), input.x.end());
  const double x_lo = *x_lo_it, x_hi = *x_hi_it;
  const double y_fit_lo = fit.beta * x_lo + fit.intercept;
  const double y_fit_hi = fit.beta * x_hi + fit.intercept;
  double y_lo = std::min(y_fit_lo, y_fit_hi), y_hi = std::max(y_fit_lo, y_fit_hi);
  for (const double y : input.y) {
    y_lo = std::min(y_lo, y);
    y_hi = std::max(y_hi, y);
  }
  const double x_span = x_hi > x_lo ? x_hi - x_lo : 1.0;
  const double y_span = y_hi > y_lo ? y_hi - y_lo : 1.0;
  const auto px = [&](double x) {
    return kMargin + (x - x_lo) / x_span * (kWidth - 2 * kMargin);
  };
  const auto py = [&](double y) {
    return kHeight - kMargin - (y - y_lo) / y_span * (kHeight - 2 * kMargin);
  };
  const auto num = [](double v) { return csv::FormatSig(v, 8); };

  const std::string q(QuantityName(input.quantity));
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n"
      << "<title>normalized contribution vs " << q << "</title>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line class=\"axis\" x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin
      << "\" x2=\"" << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n"
      << "<line class=\"axis\" x1=\"" << kMargin << "\" y1=\"" << kMargin
      << "\" x2=\"" << kMargin << "\" y2=\"" << kHeight - kMargin
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12
      << "\" text-anchor=\"middle\" font-size=\"12\">" << q << "</text>\n"
      << "<text x=\"14\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 "
      << kHeight / 2 << ")\">c'</text>\n"
      << "<g class=\"points\" fill=\"steelblue\" fill-opacity=\"0.4\">\n";
  for (std::size_t i = 0; i < input.size(); ++i) {
    svg << "<circle cx=\"" << num(px(input.x[i])) << "\" cy=\""
        << num(py(input.y[i])) << "\" r=\"2\"/>\n";
  }
  svg << "</g>\n"
      << "<line class=\"fit\" x1=\"" << num(px(x_lo)) << "\" y1=\""
      << num(py(y_fit_lo)) << "\" x2=\"" << num(px(x_hi)) << "\" y2=\""
      << num(py(y_fit_hi)) << "\" data-x1=\"" << num(x_lo) << "\" data-y1=\""
      << num(y_fit_lo) << "\" data-x2=\"" << num(x_hi) << "\" data-y2=\""
      << num(y_fit_hi) << "\" stroke=\"crimson\" stroke-width=\"2\"/>\n"
      << "<text x=\"" << kWidth - kMargin << "\" y=\"" << kMargin - 12
      << "\" text-anchor=\"end\" font-size=\"12\">R2 x 100 = "
      << FormatValue(100.0 * fit.r2) << ", beta x 100 = "
      << FormatValue(100.0 * fit.beta) << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

void ScatterExport(const RegressionInput& input,
                   const stats::RegressionResult& fit,
                   const std::filesystem::path& csv_path,
                   const std::filesystem::path& svg_path) {
  const std::string svg = ScatterSvg(input, fit);
  std::ofstream csv_out(csv_path, std::ios::trunc);
  if (!csv_out) throw Error("cannot write " + csv_path.string());
  WriteScatterCsv(input, csv_out);
  std::ofstream svg_out(svg_path, std::ios::trunc);
  if (!svg_out) throw Error("cannot write " + svg_path.string());
  svg_out << svg;
  if (!csv_out || !svg_out) throw Error("failed writing scatter export");
}

}  // namespace wordweight::analysis
