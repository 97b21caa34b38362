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

#include "cmdplab/exact_oracle.hpp"

#include <cassert>
#include <cmath>
#include <limits>

#include "cmdplab/simplex.hpp"

namespace cmdplab {

namespace {

// P^pi(s, s') = sum_a pi(a|s) P(s'|s,a).
Matrix policy_transition(const Cmdp& cmdp, const Policy& policy) {
  Matrix p_pi = Matrix::Zero(cmdp.n_states, cmdp.n_states);
  for (Index s = 0; s < cmdp.n_states; ++s)
    for (Index a = 0; a < cmdp.n_actions; ++a)
      p_pi.row(s) +=
          policy.probs(s, a) * cmdp.transition.row(sa_index(s, a, cmdp.n_actions));
  return p_pi;
}

Vector policy_reward(const Cmdp& cmdp, const Policy& policy, Index reward_index) {
  const Vector& r = cmdp.rewards[static_cast<std::size_t>(reward_index)];
  Vector r_pi(cmdp.n_states);
  for (Index s = 0; s < cmdp.n_states; ++s)
    r_pi[s] = policy.probs.row(s).dot(
        r.segment(s * cmdp.n_actions, cmdp.n_actions).transpose());
  return r_pi;
}

Vector point_mass_d0(const Cmdp& cmdp) {
  Vector d0 = Vector::Zero(cmdp.n_states);
  d0[cmdp.initial_state] = 1.0;
  return d0;
}

// Rows of the flow operator (E^T - gamma P^T), one per state, over S*A columns.
Matrix flow_matrix(const Cmdp& cmdp) {
  Matrix flow = -cmdp.gamma * cmdp.transition.transpose();
  for (Index s = 0; s < cmdp.n_states; ++s)
    for (Index a = 0; a < cmdp.n_actions; ++a)
      flow(s, sa_index(s, a, cmdp.n_actions)) += 1.0;
  return flow;
}

}  // namespace

ValueFunctions evaluate_policy(const Cmdp& cmdp, const Policy& policy,
                               Index reward_index) {
  assert(reward_index >= 0 &&
         reward_index < static_cast<Index>(cmdp.rewards.size()));
  const Matrix p_pi = policy_transition(cmdp, policy);
  const Vector r_pi = policy_reward(cmdp, policy, reward_index);
  const Matrix system =
      Matrix::Identity(cmdp.n_states, cmdp.n_states) - cmdp.gamma * p_pi;

  ValueFunctions out;
  out.v = system.partialPivLu().solve(r_pi);
  const double residual = (system * out.v - r_pi).cwiseAbs().maxCoeff();
  if (residual > kSolveResidualTol)
    throw NumericalError("evaluate_policy: linear solve residual " +
                         std::to_string(residual));

  out.q = cmdp.rewards[static_cast<std::size_t>(reward_index)] +
          cmdp.gamma * (cmdp.transition * out.v);
  out.scalar_return = out.v[cmdp.initial_state];
  return out;
}

OccupancyMeasure occupancy_of_policy(const Cmdp& cmdp, const Policy& policy) {
  const Matrix p_pi = policy_transition(cmdp, policy);
  const Matrix system = Matrix::Identity(cmdp.n_states, cmdp.n_states) -
                        cmdp.gamma * p_pi.transpose();
  const Vector rhs = (1.0 - cmdp.gamma) * point_mass_d0(cmdp);
  const Vector d = system.partialPivLu().solve(rhs);
  const double residual = (system * d - rhs).cwiseAbs().maxCoeff();
  if (residual > kSolveResidualTol)
    throw NumericalError("occupancy_of_policy: linear solve residual " +
                         std::to_string(residual));

  Vector mu(cmdp.n_state_actions());
  for (Index s = 0; s < cmdp.n_states; ++s)
    for (Index a = 0; a < cmdp.n_actions; ++a)
      mu[sa_index(s, a, cmdp.n_actions)] = policy.probs(s, a) * d[s];
  return OccupancyMeasure{std::move(mu)};
}

Vector bellman_flow_residual(const Cmdp& cmdp, const OccupancyMeasure& mu) {
  return state_marginals(mu.values, cmdp.n_states, cmdp.n_actions) -
         (1.0 - cmdp.gamma) * point_mass_d0(cmdp) -
         cmdp.gamma * (cmdp.transition.transpose() * mu.values);
}

OccupancyMeasure nu_reparameterized(const Cmdp& cmdp, const Policy& policy,
                                    const OccupancyMeasure& mu) {
  const Vector inflow = (1.0 - cmdp.gamma) * point_mass_d0(cmdp) +
                        cmdp.gamma * (cmdp.transition.transpose() * mu.values);
  Vector nu(cmdp.n_state_actions());
  for (Index s = 0; s < cmdp.n_states; ++s)
    for (Index a = 0; a < cmdp.n_actions; ++a)
      nu[sa_index(s, a, cmdp.n_actions)] = policy.probs(s, a) * inflow[s];
  return OccupancyMeasure{std::move(nu)};
}

double exact_lagrangian(const Cmdp& cmdp, const OccupancyMeasure& mu,
                        const Vector& v) {
  assert(v.size() == cmdp.n_states);
  assert(mu.values.size() == cmdp.n_state_actions());
  return cmdp.rewards[0].dot(mu.values) - v.dot(bellman_flow_residual(cmdp, mu));
}

double exact_lagrangian_decomposed(const Cmdp& cmdp, const OccupancyMeasure& mu,
                                   const Policy& policy, const Vector& q,
                                   const std::optional<Vector>& lambda) {
  const OccupancyMeasure nu = nu_reparameterized(cmdp, policy, mu);
  double value =
      cmdp.rewards[0].dot(mu.values) + q.dot(nu.values - mu.values);
  if (lambda.has_value()) {
    assert(lambda->size() == cmdp.n_constraints());
    for (Index i = 0; i < cmdp.n_constraints(); ++i)
      value += (*lambda)[i] * (cmdp.rewards[static_cast<std::size_t>(i + 1)].dot(
                                   mu.values) -
                               cmdp.thresholds[i]);
  }
  return value;
}

double concentrability(const Cmdp& cmdp, const Policy& policy_star,
                       const Vector& mu_d) {
  const OccupancyMeasure mu_star = occupancy_of_policy(cmdp, policy_star);
  const double support_tol = 1e-13 * std::max(1.0, mu_star.values.maxCoeff());
  double worst = 0.0;
  for (Index k = 0; k < mu_star.values.size(); ++k) {
    if (mu_star.values[k] <= support_tol) continue;
    if (mu_d[k] <= 0.0) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, mu_star.values[k] / mu_d[k]);
  }
  return worst;
}

double slater_margin(const Cmdp& cmdp) {
  const Index I = cmdp.n_constraints();
  if (I < 1) throw std::invalid_argument("slater_margin: needs I >= 1");
  const Index nsa = cmdp.n_state_actions();
  const Index S = cmdp.n_states;

  // Columns: mu (nsa), t_plus, t_minus, surplus u_i (I).
  const Index n = nsa + 2 + I;
  const Index m = S + I;
  Matrix A = Matrix::Zero(m, n);
  Vector b(m), c = Vector::Zero(n);
  A.topLeftCorner(S, nsa) = flow_matrix(cmdp);
  b.head(S) = (1.0 - cmdp.gamma) * point_mass_d0(cmdp);
  for (Index i = 0; i < I; ++i) {
    A.row(S + i).head(nsa) = cmdp.rewards[static_cast<std::size_t>(i + 1)];
    A(S + i, nsa) = -1.0;      // -t_plus
    A(S + i, nsa + 1) = 1.0;   // +t_minus
    A(S + i, nsa + 2 + i) = -1.0;
    b[S + i] = cmdp.thresholds[i];
  }
  c[nsa] = 1.0;
  c[nsa + 1] = -1.0;

  const SimplexResult lp = solve_standard_form(A, b, c);
  if (lp.status != LpStatus::kOptimal)
    throw NumericalError("slater_margin: auxiliary LP did not solve");
  return lp.objective;
}

LpSolution solve_constrained_lp(const Cmdp& cmdp) {
  const Index I = cmdp.n_constraints();
  const Index nsa = cmdp.n_state_actions();
  const Index S = cmdp.n_states;

  // Columns: mu (nsa), surplus u_i (I). Rows: S flow equalities, I thresholds.
  const Index n = nsa + I;
  const Index m = S + I;
  Matrix A = Matrix::Zero(m, n);
  Vector b(m), c = Vector::Zero(n);
  A.topLeftCorner(S, nsa) = flow_matrix(cmdp);
  b.head(S) = (1.0 - cmdp.gamma) * point_mass_d0(cmdp);
  for (Index i = 0; i < I; ++i) {
    A.row(S + i).head(nsa) = cmdp.rewards[static_cast<std::size_t>(i + 1)];
    A(S + i, nsa + i) = -1.0;
    b[S + i] = cmdp.thresholds[i];
  }
  c.head(nsa) = cmdp.rewards[0];

  const SimplexResult lp = solve_standard_form(A, b, c);
  LpSolution solution;
  if (lp.status == LpStatus::kInfeasible) {
    solution.feasible = false;
    solution.farkas_certificate = lp.farkas;
    return solution;
  }
  if (lp.status != LpStatus::kOptimal)
    throw NumericalError("solve_constrained_lp: unexpected LP status");

  solution.feasible = true;
  solution.mu_star = OccupancyMeasure{lp.x.head(nsa)};
  solution.policy_star =
      extract_policy_from_occupancy(solution.mu_star, cmdp.n_actions);
  solution.objective = lp.objective;
  solution.dual_v = lp.duals.head(S);
  solution.dual_lambda = (-lp.duals.tail(I)).cwiseMax(0.0);

  const double flow_defect =
      bellman_flow_residual(cmdp, solution.mu_star).cwiseAbs().maxCoeff();
  if (flow_defect > kFlowTol)
    throw NumericalError("solve_constrained_lp: flow residual " +
                         std::to_string(flow_defect));
  return solution;
}

double max_achievable_constraint_value(const Cmdp& cmdp, Index reward_index) {
  const Index nsa = cmdp.n_state_actions();
  const Index S = cmdp.n_states;
  Matrix A = flow_matrix(cmdp);
  Vector b = (1.0 - cmdp.gamma) * point_mass_d0(cmdp);
  Vector c = cmdp.rewards[static_cast<std::size_t>(reward_index)];
  (void)nsa;
  (void)S;
  const SimplexResult lp = solve_standard_form(A, b, c);
  if (lp.status != LpStatus::kOptimal)
    throw NumericalError("max_achievable_constraint_value: LP did not solve");
  return lp.objective;
}

}  // namespace cmdplab
