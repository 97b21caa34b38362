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

#include <optional>

#include "cmdplab/cmdp.hpp"

namespace cmdplab {

/// Exact optimum of the occupancy-measure program
///   max <mu, r_0>  s.t.  mu >= 0, Bellman flow, <mu, r_i> >= tau_i.
/// The unconstrained problem is the I = 0 case of the same solver.
struct LpSolution {
  bool feasible = false;
  OccupancyMeasure mu_star;  // primal optimum
  Policy policy_star;        // extracted from mu_star
  double objective = 0.0;    // <mu*, r_0> = (1 - gamma) J_0(pi*)
  Vector dual_v;             // flow-constraint duals, length S
  Vector dual_lambda;        // reward-constraint duals, length I, >= 0
  Vector farkas_certificate; // infeasibility ray over rows (infeasible only)
};

/// Exact policy evaluation for reward index i: solves V = r_i^pi + gamma P^pi V
/// by a dense LU solve, then Q(s,a) = r_i(s,a) + gamma sum_s' P(s'|s,a) V(s').
/// Throws NumericalError if the post-solve residual exceeds kSolveResidualTol.
ValueFunctions evaluate_policy(const Cmdp& cmdp, const Policy& policy, Index reward_index);

/// Normalized discounted visitation of (s,a) pairs under the policy, from the
/// flow linear system. Entries sum to 1 up to solver residual.
OccupancyMeasure occupancy_of_policy(const Cmdp& cmdp, const Policy& policy);

/// Per-state flow defect E^T mu - (1-gamma) d_0 - gamma P^T mu; zero exactly
/// on admissible occupancy measures.
Vector bellman_flow_residual(const Cmdp& cmdp, const OccupancyMeasure& mu);

/// nu_{pi,mu}(s,a) = pi(a|s) * ((1-gamma) d_0(s) + gamma [P^T mu](s)).
/// Defined for arbitrary nonnegative mu, admissible or not.
OccupancyMeasure nu_reparameterized(const Cmdp& cmdp, const Policy& policy,
                                    const OccupancyMeasure& mu);

/// L(mu, V) = <mu, r_0> + <V, (1-gamma) d_0 + gamma P^T mu - E^T mu>.
double exact_lagrangian(const Cmdp& cmdp, const OccupancyMeasure& mu, const Vector& v);

/// Split-variable form L(mu, pi; Q) = <mu, r_0> + <Q, nu_{pi,mu} - mu>, plus
/// sum_i lambda_i (<mu, r_i> - tau_i) when multipliers are supplied. On an
/// admissible triple (mu^pi, pi, Q^pi) this evaluates to (1-gamma) J(pi),
/// matching exact_lagrangian's scaling.
double exact_lagrangian_decomposed(const Cmdp& cmdp, const OccupancyMeasure& mu,
                                   const Policy& policy, const Vector& q,
                                   const std::optional<Vector>& lambda = std::nullopt);

/// Density-ratio bound sup over the support of mu^{pi*} of mu^{pi*} / mu_d.
/// Returns +infinity when mu_d vanishes somewhere on that support.
double concentrability(const Cmdp& cmdp, const Policy& policy_star, const Vector& mu_d);

/// Largest margin phi such that some admissible mu has <mu, r_i> >= tau_i + phi
/// for every i, from the auxiliary program max t s.t. flow, <mu, r_i> >= tau_i + t.
/// Negative when the constraints are jointly infeasible. Requires I >= 1.
double slater_margin(const Cmdp& cmdp);

/// Solves the constrained occupancy LP exactly. Infeasibility is reported via
/// feasible = false and a Farkas certificate, never an exception.
LpSolution solve_constrained_lp(const Cmdp& cmdp);

/// max <mu, r_i> over admissible mu alone; used to diagnose which thresholds
/// an infeasible instance can never meet.
double max_achievable_constraint_value(const Cmdp& cmdp, Index reward_index);

}  // namespace cmdplab
