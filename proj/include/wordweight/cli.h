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

// The `wordweight` command line: one subcommand per pipeline stage.
//
// Exit codes: 0 success, 1 domain error, 2 usage error. Options may also come
// from a JSON file given with --config; top-level keys set global options and
// an object keyed by a subcommand name sets that subcommand's options. Flags
// on the command line take precedence.

#ifndef WORDWEIGHT_CLI_H_
#define WORDWEIGHT_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <string>

namespace wordweight::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline constexpr const char* kVersion = "0.1.0";

int Run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Lower-case hex SHA-256 of a file's bytes.
std::string Sha256File(const std::filesystem::path& path);

}  // namespace wordweight::cli

#endif  // WORDWEIGHT_CLI_H_
