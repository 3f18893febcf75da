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

#ifndef WORDWEIGHT_CSV_H_
#define WORDWEIGHT_CSV_H_

#include <string>
#include <string_view>
#include <vector>

namespace wordweight::csv {

// RFC 4180 quoting: fields containing a comma, quote or line break are
// wrapped in quotes with embedded quotes doubled.
std::string Escape(std::string_view field);

// Splits one record. Throws Error on an unterminated quote.
std::vector<std::string> ParseLine(std::string_view line);

// printf("%.*g") with the given significant digits.
std::string FormatSig(double value, int digits);

}  // namespace wordweight::csv

#endif  // WORDWEIGHT_CSV_H_
