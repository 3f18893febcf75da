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


// Pinned tolerances and sizes for the acceptance suite.

#ifndef WORDWEIGHT_TESTS_ACCEPTANCE_THRESHOLDS_H_
#define WORDWEIGHT_TESTS_ACCEPTANCE_THRESHOLDS_H_

#include <cstdint>

namespace wordweight::acceptance {

// Information quantities against the naive oracle.
inline constexpr int kInfostatsCorpora = 25;
inline constexpr int kInfostatsMaxSentences = 50;
inline constexpr double kInfostatsTolerance = 1e-12;
inline constexpr double kInfostatsSeconds = 10;

// Integrated Gradients.
inline constexpr double kIgLinearResidual = 1e-9;
inline constexpr double kIgClosedFormTolerance = 1e-9;
inline constexpr int kIgMlpSteps = 256;
inline constexpr int kIgMlpSentences = 100;
// max_k residual_k / max_k |m_k(W) - m_k(B)|
inline constexpr double kIgMlpRelativeResidual = 1e-4;
inline constexpr double kIgSeconds = 60;

// Shapley values.
inline constexpr int kShapleyCases = 50;
inline constexpr int kShapleyMaxN = 12;
inline constexpr double kShapleyAxiomTolerance = 1e-9;
inline constexpr int kShapleySampledN = 8;
inline constexpr int kShapleySamples = 10000;
inline constexpr int kShapleySampledCases = 5;
// max |phi_sampled - phi_exact| / max |phi_exact|
inline constexpr double kShapleySampledTolerance = 1e-2;
inline constexpr double kShapleySeconds = 300;

// Finite-difference gradient checks.
inline constexpr int kGradientPoints = 10;
inline constexpr double kGradientStep = 1e-5;
inline constexpr double kGradientRelativeError = 1e-5;
// Denominator floor of the elementwise relative error.
inline constexpr double kGradientFloor = 1e-4;

// Norm law on the seed-7 synthetic corpus.
inline constexpr std::uint64_t kCorpusSeed = 7;
inline constexpr int kNormLawMinCount = 5;
inline constexpr double kNormLawPearson = 0.6;
inline constexpr int kNormLawNullSeeds = 20;
inline constexpr double kNormLawNullBand = 0.2;
inline constexpr double kNormLawSeconds = 300;

// Trained vs random-init encoder, IG attributions regressed on KL.
inline constexpr int kTable1Sentences = 3000;
inline constexpr double kTable1MinR2GainX100 = 10.0;
inline constexpr double kTable1MinBeta = 0.0;
inline constexpr double kTable1Seconds = 600;

}  // namespace wordweight::acceptance

#endif  // WORDWEIGHT_TESTS_ACCEPTANCE_THRESHOLDS_H_
