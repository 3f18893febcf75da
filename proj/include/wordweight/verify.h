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

// Fast invariant checks over every module, run by `wordweight verify`.

#ifndef WORDWEIGHT_VERIFY_H_
#define WORDWEIGHT_VERIFY_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace wordweight::verify {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<CheckResult> RunAll(std::uint64_t seed);

// One "[PASS] suite/name: detail" line per check. Returns true if all passed.
bool Print(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace wordweight::verify

#endif  // WORDWEIGHT_VERIFY_H_
