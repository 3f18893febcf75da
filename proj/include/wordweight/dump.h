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

// Attribution dump: JSON lines, one record per sentence.
//
//   {"model_id": str, "sentence_id": int, "method": str, "pooling": str,
//    "tokens": [str], "raw": [float], "normalized": [float],
//    "residual_max": float, "meta": {...}}
//
// Dumps written by external extractors use the same schema. Unknown extra
// fields are ignored.

#ifndef WORDWEIGHT_DUMP_H_
#define WORDWEIGHT_DUMP_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wordweight/attribution.h"

namespace wordweight::dump {

struct Record {
  std::string model_id;
  std::int64_t sentence_id = 0;
  std::string method;
  std::string pooling;
  std::vector<std::string> tokens;
  std::vector<double> raw;
  std::vector<double> normalized;
  double residual_max = 0.0;
  nlohmann::json meta = nlohmann::json::object();

  bool operator==(const Record&) const = default;
};

// Tolerance on |mean(normalized) - 1| accepted from files.
inline constexpr double kNormalizedMeanTolerance = 1e-6;

Record FromAttribution(const attribution::SentenceAttribution& result,
                       std::string_view model_id, std::string_view method,
                       std::string_view pooling,
                       const nlohmann::json& extra_meta = nlohmann::json::object());

std::string ToJsonLine(const Record& record);

// Parses and schema-checks one line. Errors read "line N: ...".
Record ParseRecord(std::string_view line, std::size_t line_number);

void WriteDump(const std::vector<Record>& records, std::ostream& out);
void SaveDump(const std::vector<Record>& records,
              const std::filesystem::path& path);

// Throws on the first invalid line.
std::vector<Record> ReadDump(std::istream& in);
std::vector<Record> LoadDump(const std::filesystem::path& path);

struct ValidationReport {
  std::size_t records = 0;
  std::vector<std::string> errors;

  bool ok() const { return errors.empty(); }
};

// Checks every line, collecting up to max_errors messages.
ValidationReport ValidateDump(std::istream& in, std::size_t max_errors = 50);

}  // namespace wordweight::dump

#endif  // WORDWEIGHT_DUMP_H_
