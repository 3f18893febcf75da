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

#include "wordweight/dump.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace wordweight::dump {

namespace {

using nlohmann::json;

[[noreturn]] void Fail(std::size_t line, const std::string& what) {
  throw Error("line " + std::to_string(line) + ": " + what);
}

const json& Field(const json& obj, const char* name, std::size_t line) {
  const auto it = obj.find(name);
  if (it == obj.end()) Fail(line, std::string("missing field '") + name + "'");
  return *it;
}

std::string StringField(const json& obj, const char* name, std::size_t line) {
  const json& v = Field(obj, name, line);
  if (!v.is_string()) Fail(line, std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> NumberArray(const json& obj, const char* name,
                                std::size_t line) {
  const json& v = Field(obj, name, line);
  if (!v.is_array()) Fail(line, std::string("field '") + name + "' must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& x : v) {
    if (!x.is_number()) {
      Fail(line, std::string("field '") + name + "' must be an array of numbers");
    }
    const double d = x.get<double>();
    if (!std::isfinite(d)) Fail(line, std::string("field '") + name + "' has a non-finite entry");
    out.push_back(d);
  }
  return out;
}

}  // namespace

Record FromAttribution(const attribution::SentenceAttribution& result,
                       std::string_view model_id, std::string_view method,
                       std::string_view pooling, const json& extra_meta) {
  if (!result.ok()) {
    throw Error("sentence " + std::to_string(result.sentence_id) +
                " has no attribution: " + result.error);
  }
  const auto& a = result.attribution;
  Record r;
  r.model_id = model_id;
  r.sentence_id = result.sentence_id;
  r.method = method;
  r.pooling = pooling;
  r.tokens = result.tokens;
  r.raw = a.raw;
  r.normalized = a.normalized;
  r.residual_max = a.residual_max();
  r.meta = extra_meta.is_object() ? extra_meta : json::object();
  r.meta["steps_or_samples"] = a.steps_or_samples;
  r.meta["degenerate"] = a.degenerate;
  if (!a.std_error.empty()) r.meta["std_error"] = a.std_error;
  return r;
}

std::string ToJsonLine(const Record& record) {
  json j = json::object();
  j["model_id"] = record.model_id;
  j["sentence_id"] = record.sentence_id;
  j["method"] = record.method;
  j["pooling"] = record.pooling;
  j["tokens"] = record.tokens;
  j["raw"] = record.raw;
  j["normalized"] = record.normalized;
  j["residual_max"] = record.residual_max;
  j["meta"] = record.meta;
  return j.dump();
}

Record ParseRecord(std::string_view line, std::size_t line_number) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) Fail(line_number, "not valid JSON");
  if (!j.is_object()) Fail(line_number, "record must be a JSON object");

  Record r;
  r.model_id = StringField(j, "model_id", line_number);
  const json& id = Field(j, "sentence_id", line_number);
  if (!id.is_number_integer()) Fail(line_number, "field 'sentence_id' must be an integer");
  r.sentence_id = id.get<std::int64_t>();
  r.method = StringField(j, "method", line_number);
  r.pooling = StringField(j, "pooling", line_number);

  const json& tokens = Field(j, "tokens", line_number);
  if (!tokens.is_array()) Fail(line_number, "field 'tokens' must be an array of strings");
  for (const json& t : tokens) {
    if (!t.is_string()) Fail(line_number, "field 'tokens' must be an array of strings");
    r.tokens.push_back(t.get<std::string>());
  }
  if (r.tokens.empty()) Fail(line_number, "field 'tokens' is empty");

  r.raw = NumberArray(j, "raw", line_number);
  r.normalized = NumberArray(j, "normalized", line_number);
  const json& residual = Field(j, "residual_max", line_number);
  if (!residual.is_number()) Fail(line_number, "field 'residual_max' must be a number");
  r.residual_max = residual.get<double>();
  const json& meta = Field(j, "meta", line_number);
  if (!meta.is_object()) Fail(line_number, "field 'meta' must be an object");
  r.meta = meta;

  const auto n = r.tokens.size();
  for (const auto& [name, values] :
       {std::pair{"raw", &r.raw}, std::pair{"normalized", &r.normalized}}) {
    if (values->size() != n) {
      Fail(line_number, std::string("field '") + name + "' has " +
                            std::to_string(values->size()) +
                            " entries but 'tokens' has " + std::to_string(n));
    }
  }
  for (const double c : r.raw) {
    if (c < 0.0) Fail(line_number, "field 'raw' has a negative entry");
  }
  if (!(r.residual_max >= 0.0) || !std::isfinite(r.residual_max)) {
    Fail(line_number, "field 'residual_max' must be finite and non-negative");
  }
  double mean = 0.0;
  for (const double c : r.normalized) mean += c;
  mean /= static_cast<double>(n);
  if (std::abs(mean - 1.0) > kNormalizedMeanTolerance) {
    Fail(line_number, "field 'normalized' has mean " + std::to_string(mean) +
                          ", expected 1");
  }
  return r;
}

void WriteDump(const std::vector<Record>& records, std::ostream& out) {
  for (const auto& r : records) out << ToJsonLine(r) << '\n';
}

void SaveDump(const std::vector<Record>& records,
              const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  WriteDump(records, out);
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<Record> ReadDump(std::istream& in) {
  std::vector<Record> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) Fail(line_number, "empty line");
    records.push_back(ParseRecord(line, line_number));
  }
  return records;
}

std::vector<Record> LoadDump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return ReadDump(in);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

ValidationReport ValidateDump(std::istream& in, std::size_t max_errors) {
  ValidationReport report;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    try {
      if (line.empty()) Fail(line_number, "empty line");
      ParseRecord(line, line_number);
      ++report.records;
    } catch (const Error& e) {
      if (report.errors.size() < max_errors) report.errors.push_back(e.what());
    }
  }
  return report;
}

}  // namespace wordweight::dump
