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

#include "cmdplab/types.hpp"

namespace cmdplab {

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct SimplexResult {
  LpStatus status = LpStatus::kInfeasible;
  Vector x;           // primal solution, length n (optimal only)
  Vector duals;       // row duals y, length m (optimal only)
  double objective = 0.0;
  Vector farkas;      // certificate with A^T y <= 0 and b^T y > 0 (infeasible only)
  int iterations = 0;
};

/// Maximizes c^T x subject to A x = b, x >= 0, with a dense two-phase primal
/// simplex using Bland's pivoting rule throughout (anti-cycling, deterministic).
/// Intended for desk-scale instances: a few hundred columns, tens of rows.
/// The returned x and duals are recomputed from the final basis by LU against
/// the original data, so tableau round-off does not accumulate into the answer.
SimplexResult solve_standard_form(const Matrix& A, const Vector& b, const Vector& c);

}  // namespace cmdplab
