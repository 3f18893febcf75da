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

#ifndef WORDWEIGHT_MODEL_H_
#define WORDWEIGHT_MODEL_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "wordweight/common.h"

namespace wordweight {

// A differentiable map m: R^{n x d} -> R^{d_out} from a sequence of input
// vectors to one output vector. Implementations must be pure: equal inputs
// give bitwise-equal outputs, and concurrent calls are safe.
class SentenceModel {
 public:
  virtual ~SentenceModel() = default;

  virtual std::size_t output_dim() const = 0;

  virtual std::vector<double> Forward(const Matrix& inputs) const = 0;

  // d_out x (n * d); entry (k, i * d + j) is dm_k / dX[i, j].
  virtual Matrix Jacobian(const Matrix& inputs) const = 0;

  // Pooling models have dm_k / dX[i, j] independent of the row i. They may
  // return that d_out x d block here so callers can skip the full Jacobian.
  virtual std::optional<Matrix> SharedRowJacobian(const Matrix& inputs) const {
    (void)inputs;
    return std::nullopt;
  }
};

}  // namespace wordweight

#endif  // WORDWEIGHT_MODEL_H_
