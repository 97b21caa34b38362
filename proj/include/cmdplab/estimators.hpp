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

#include <vector>

#include "cmdplab/cmdp.hpp"
#include "cmdplab/offline_data.hpp"

namespace cmdplab {

/// What a dataset-driven algorithm is allowed to see of a CMDP: the reward
/// maps, discount, initial state and thresholds. Deliberately excludes the
/// transition kernel and the data distribution.
struct SolverProblem {
  Index n_states = 0;
  Index n_actions = 0;
  std::vector<Vector> rewards;  // I+1 tables of length S*A
  double gamma = 0.0;
  Index initial_state = 0;
  Vector thresholds;  // length I

  Index n_constraints() const { return thresholds.size(); }

  static SolverProblem from_cmdp(const Cmdp& cmdp) {
    return SolverProblem{cmdp.n_states, cmdp.n_actions,      cmdp.rewards,
                         cmdp.gamma,    cmdp.initial_state, cmdp.thresholds};
  }
};

/// Sum and dot product by recursive pairwise reduction. Error grows like
/// O(log n) rather than O(n); datasets run to 10^6 points.
double pairwise_sum(const double* x, Index n);
double pairwise_dot(const double* x, const double* y, Index n);

/// Empirical Lagrangian with a state-value multiplier:
///   (1-gamma) v(s_0) + (1/n) sum_j w_j (r_0(s_j,a_j) + gamma v(s'_j) - v(s_j)).
/// w has one coordinate per dataset point.
double estimate_L_wv(const SolverProblem& problem, const OfflineDataset& data,
                     const Vector& w, const Vector& v);

/// Split-variable empirical Lagrangian with an action-value multiplier:
///   (1-gamma) Q(s_0,pi) + (1/n) sum_j w_j (r_0(s_j,a_j) + gamma Q(s'_j,pi) - Q(s_j,a_j))
/// where Q(s,pi) = sum_a pi(a|s) Q(s,a).
double estimate_L_wpq(const SolverProblem& problem, const OfflineDataset& data,
                      const Vector& w, const Policy& policy, const Vector& q);

/// Constrained form: estimate_L_wpq with reward r_0 + sum_i lambda_i r_i,
/// minus <lambda, tau>.
double estimate_L_constrained(const SolverProblem& problem, const OfflineDataset& data,
                              const Vector& w, const Policy& policy, const Vector& q,
                              const Vector& lambda);

/// Per-datapoint temporal-difference coefficients
///   h_j = r_lambda(s_j,a_j) + gamma Q(s'_j,pi) - Q(s_j,a_j),
/// the estimator's dependence on w up to the 1/n scale. Pass an empty lambda
/// for the unconstrained form.
Vector td_coefficients(const SolverProblem& problem, const OfflineDataset& data,
                       const Policy& policy, const Vector& q, const Vector& lambda);

/// Gradient of the empirical Lagrangian in w: td_coefficients / n. Satisfies
/// <w, grad> + (1-gamma) Q(s_0,pi) - <lambda, tau> = estimator value.
Vector lagrangian_gradient_wrt_w(const SolverProblem& problem, const OfflineDataset& data,
                                 const Policy& policy, const Vector& q,
                                 const Vector& lambda);

/// Per-datapoint weights from an (s,a) table: w_j = table[sa_j].
Vector weights_from_table(const OfflineDataset& data, const Vector& table,
                          Index n_actions);

/// Mean of per-datapoint weights within each (s,a) cell (0 where unseen);
/// the table view used by extraction tests.
Vector weight_table_from_datapoints(const OfflineDataset& data, const Vector& w,
                                    Index n_states, Index n_actions);

}  // namespace cmdplab
