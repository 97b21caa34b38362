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

#include "cmdplab/simplex.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <vector>

namespace cmdplab {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kReducedCostTol = 1e-9;

// Full-tableau simplex state over columns [0, n_cols). Basic feasible start
// is supplied by the caller; costs define the phase objective.
struct Tableau {
  Matrix t;                 // m x (n_cols + 1); last column is B^{-1} b
  std::vector<Index> basis; // basis[i] = column basic in row i

  Index rows() const { return t.rows(); }
  Index cols() const { return t.cols() - 1; }
  double rhs(Index i) const { return t(i, t.cols() - 1); }

  void pivot(Index row, Index col) {
    t.row(row) /= t(row, col);
    for (Index i = 0; i < rows(); ++i) {
      if (i == row) continue;
      const double factor = t(i, col);
      if (factor != 0.0) t.row(i) -= factor * t.row(row);
    }
    basis[row] = col;
  }
};

// Runs Bland-rule pivoting to optimality for max costs^T x on the tableau.
// `allowed` masks columns eligible to enter. Returns false on unboundedness.
bool run_phase(Tableau& tab, const Vector& costs, const std::vector<bool>& allowed,
               int& iterations) {
  const Index m = tab.rows();
  const Index n = tab.cols();
  while (true) {
    // Reduced costs from scratch each iteration: z_j = c_j - c_B^T B^{-1} A_j.
    Vector cb(m);
    for (Index i = 0; i < m; ++i) cb[i] = costs[tab.basis[i]];
    Index entering = -1;
    for (Index j = 0; j < n; ++j) {
      if (!allowed[j]) continue;
      const double reduced = costs[j] - cb.dot(tab.t.col(j));
      if (reduced > kReducedCostTol) {
        entering = j;  // Bland: smallest eligible index
        break;
      }
    }
    if (entering < 0) return true;

    Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m; ++i) {
      const double a = tab.t(i, entering);
      if (a > kPivotTol) {
        const double ratio = tab.rhs(i) / a;
        if (ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol &&
             (leaving < 0 || tab.basis[i] < tab.basis[leaving]))) {
          best_ratio = ratio;
          leaving = i;
        }
      }
    }
    if (leaving < 0) return false;  // column unbounded
    tab.pivot(leaving, entering);
    ++iterations;
  }
}

}  // namespace

SimplexResult solve_standard_form(const Matrix& A_in, const Vector& b_in,
                                  const Vector& c) {
  const Index m = A_in.rows();
  const Index n = A_in.cols();
  assert(b_in.size() == m && c.size() == n);

  // Scale rows so b >= 0; remember signs to map duals back.
  Matrix A = A_in;
  Vector b = b_in;
  Vector row_sign = Vector::Ones(m);
  for (Index i = 0; i < m; ++i) {
    if (b[i] < 0.0) {
      A.row(i) *= -1.0;
      b[i] *= -1.0;
      row_sign[i] = -1.0;
    }
  }

  SimplexResult result;

  // Phase 1: artificial basis, maximize -sum(artificials).
  Tableau tab;
  tab.t.resize(m, n + m + 1);
  tab.t.leftCols(n) = A;
  tab.t.middleCols(n, m) = Matrix::Identity(m, m);
  tab.t.col(n + m) = b;
  tab.basis.resize(m);
  for (Index i = 0; i < m; ++i) tab.basis[i] = n + i;

  Vector phase1_costs = Vector::Zero(n + m);
  phase1_costs.tail(m).setConstant(-1.0);
  std::vector<bool> allow_all(n + m, true);
  if (!run_phase(tab, phase1_costs, allow_all, result.iterations)) {
    result.status = LpStatus::kUnbounded;  // cannot happen: objective <= 0
    return result;
  }

  double phase1_obj = 0.0;
  for (Index i = 0; i < m; ++i)
    if (tab.basis[i] >= n) phase1_obj -= tab.rhs(i);
  if (phase1_obj < -1e-8) {
    // Farkas certificate from the phase-1 duals: y = -c_B^T B^{-1} satisfies
    // A^T y <= tol and b^T y = -phase1_obj > 0 for the sign-scaled system.
    Vector cb(m);
    for (Index i = 0; i < m; ++i) cb[i] = phase1_costs[tab.basis[i]];
    Vector y(m);
    for (Index i = 0; i < m; ++i) y[i] = -cb.dot(tab.t.col(n + i));
    result.farkas = row_sign.cwiseProduct(y);
    result.status = LpStatus::kInfeasible;
    return result;
  }

  // Drive leftover artificials (basic at zero) out of the basis; a row with no
  // original-column pivot is redundant and stays parked on its artificial.
  for (Index i = 0; i < m; ++i) {
    if (tab.basis[i] < n) continue;
    Index col = -1;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > kPivotTol) {
        col = j;
        break;
      }
    }
    if (col >= 0) tab.pivot(i, col);
  }

  // Phase 2 over original columns only.
  Vector phase2_costs = Vector::Zero(n + m);
  phase2_costs.head(n) = c;
  std::vector<bool> allow_original(n + m, false);
  std::fill(allow_original.begin(), allow_original.begin() + n, true);
  if (!run_phase(tab, phase2_costs, allow_original, result.iterations)) {
    result.status = LpStatus::kUnbounded;
    return result;
  }

  // Recompute the vertex and duals from the original data. Redundant rows keep
  // their artificial column (zero cost), which gives them dual zero.
  Matrix basis_mat(m, m);
  Vector cost_b(m);
  Matrix ext(m, n + m);
  ext.leftCols(n) = A;
  ext.middleCols(n, m) = Matrix::Identity(m, m);
  for (Index i = 0; i < m; ++i) {
    basis_mat.col(i) = ext.col(tab.basis[i]);
    cost_b[i] = phase2_costs[tab.basis[i]];
  }
  Eigen::PartialPivLU<Matrix> lu(basis_mat);
  const Vector xb = lu.solve(b);
  const Vector y = lu.transpose().solve(cost_b);

  result.x = Vector::Zero(n);
  for (Index i = 0; i < m; ++i) {
    if (tab.basis[i] < n) result.x[tab.basis[i]] = std::max(0.0, xb[i]);
  }
  result.duals = row_sign.cwiseProduct(y);
  result.objective = c.dot(result.x);
  result.status = LpStatus::kOptimal;
  return result;
}

}  // namespace cmdplab
