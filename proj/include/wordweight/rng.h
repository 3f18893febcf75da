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

#ifndef WORDWEIGHT_RNG_H_
#define WORDWEIGHT_RNG_H_

#include <cstdint>
#include <random>
#include <string_view>

namespace wordweight {

// Portable random source. std::mt19937_64 output is fully specified by the
// standard, but the std distributions are not, so the derived draws are
// implemented here to keep outputs identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound). Rejection sampling, no modulo bias.
  std::uint64_t Below(std::uint64_t bound);

  // Standard normal via Box-Muller.
  double Normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream seed for a named stage from a root seed.
std::uint64_t DeriveSeed(std::uint64_t root, std::string_view stage);
std::uint64_t DeriveSeed(std::uint64_t root, std::uint64_t index);

}  // namespace wordweight

#endif  // WORDWEIGHT_RNG_H_
