// Copyright 2026 The cmdplab Authors.
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

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>

namespace cmdplab {

using Scalar = double;
using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Flattened state-action index; all (s,a) tables are laid out row-major in s.
inline Index sa_index(Index s, Index a, Index n_actions) { return s * n_actions + a; }

/// Tolerance for probability rows to be accepted (and renormalized) on construction.
inline constexpr double kRowSumTol = 1e-12;
/// Sup-norm tolerance on Bellman-flow residuals of admissible occupancy measures.
inline constexpr double kFlowTol = 1e-8;
/// Tolerance for LP duality-gap and complementary-slackness checks.
inline constexpr double kDualityTol = 1e-6;
/// Post-solve residual bound for exact linear systems.
inline constexpr double kSolveResidualTol = 1e-8;

/// Raised when an exact linear solve leaves a residual above kSolveResidualTol.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cmdplab
