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

#include "cmdplab/counterexamples.hpp"

#include <cmath>
#include <sstream>

#include "cmdplab/exact_oracle.hpp"
#include "cmdplab/random_cmdp.hpp"
#include "cmdplab/rng.hpp"

namespace cmdplab {

namespace {

constexpr Index kS = 5;
constexpr Index kA = 2;

void expect(DemoReport& report, bool ok, const std::string& message) {
  if (!ok) {
    report.passed = false;
    report.failures.push_back(message);
  }
}

std::string mismatch(const char* what, double expected, double got) {
  std::ostringstream os;
  os << what << ": expected " << expected << ", got " << got;
  return os.str();
}

// The spurious measure: mass 1/2 on (s0, R), 1/4 on each action at l1.
OccupancyMeasure spurious_measure() {
  Vector values = Vector::Zero(kS * kA);
  values[sa_index(kS0, kRight, kA)] = 0.5;
  values[sa_index(kL1, kLeft, kA)] = 0.25;
  values[sa_index(kL1, kRight, kA)] = 0.25;
  return OccupancyMeasure{std::move(values)};
}

// Action-value table flattened per state: q(s, a) = v(s) for both actions.
// Any such table makes the split Lagrangian independent of the policy choice,
// which is exactly what lets two policies share one saddle.
Vector flatten_values(const Vector& v) {
  Vector q(kS * kA);
  for (Index s = 0; s < kS; ++s)
    for (Index a = 0; a < kA; ++a) q[sa_index(s, a, kA)] = v[s];
  return q;
}

}  // namespace

Cmdp build_figure1_mdp_with_l2_reward(double l2_reward) {
  Matrix transition = Matrix::Zero(kS * kA, kS);
  auto row = [&](Index s, Index a) { return transition.row(sa_index(s, a, kA)); };
  row(kS0, kLeft)(kL1) = 0.5;
  row(kS0, kLeft)(kR1) = 0.5;
  row(kS0, kRight)(kL1) = 0.25;
  row(kS0, kRight)(kR1) = 0.75;
  row(kR1, kLeft)(kL2) = 0.5;
  row(kR1, kLeft)(kR2) = 0.5;
  row(kR1, kRight)(kL2) = 0.25;
  row(kR1, kRight)(kR2) = 0.75;
  for (Index s : {kL1, kL2, kR2}) {
    row(s, kLeft)(s) = 1.0;
    row(s, kRight)(s) = 1.0;
  }

  Vector reward = Vector::Zero(kS * kA);
  reward[sa_index(kL1, kLeft, kA)] = 1.0;
  reward[sa_index(kL1, kRight, kA)] = 1.0;
  reward[sa_index(kL2, kLeft, kA)] = l2_reward;
  reward[sa_index(kL2, kRight, kA)] = l2_reward;

  return make_cmdp(kS, kA, std::move(transition), {std::move(reward)}, 0.5, kS0,
                   Vector());
}

Cmdp build_figure1_mdp() { return build_figure1_mdp_with_l2_reward(4.0); }

SaddleCertificate certify_saddle_point(const FiniteClassSaddleProblem& problem,
                                       Index primal_idx, Index dual_idx, double tol) {
  const double center = problem.value(primal_idx, dual_idx);
  double worst = 0.0;
  // Max player must not gain by deviating in the primal list ...
  for (Index i = 0; i < problem.n_primal; ++i)
    worst = std::max(worst, problem.value(i, dual_idx) - center);
  // ... and the min player must not gain by deviating in the dual list.
  for (Index j = 0; j < problem.n_dual; ++j)
    worst = std::max(worst, center - problem.value(primal_idx, j));
  return SaddleCertificate{worst <= tol, worst};
}

DemoReport demonstrate_prop1(double l2_reward) {
  DemoReport report;
  report.name = "prop1";

  const Cmdp mdp = build_figure1_mdp_with_l2_reward(l2_reward);
  expect(report, validate_cmdp(mdp).empty(), "mdp fails validation");

  const Policy always_left = constant_policy(kS, kA, kLeft);
  const ValueFunctions optimal = evaluate_policy(mdp, always_left, 0);
  const double expected_v[kS] = {1.0, 2.0, 2.0, 8.0, 0.0};
  for (Index s = 0; s < kS; ++s) {
    if (std::abs(optimal.v[s] - expected_v[s]) > 1e-10)
      expect(report, false, mismatch("V*(s)", expected_v[s], optimal.v[s]));
  }

  const OccupancyMeasure mu_star = occupancy_of_policy(mdp, always_left);
  const double expected_mu[kS] = {0.5, 0.25, 0.125, 0.0625, 0.0625};
  for (Index s = 0; s < kS; ++s) {
    if (std::abs(mu_star(s, kLeft, kA) - expected_mu[s]) > 1e-10)
      expect(report, false,
             mismatch("mu*(s,L)", expected_mu[s], mu_star(s, kLeft, kA)));
  }

  // The LP optimum agrees with the always-left value.
  const LpSolution lp = solve_constrained_lp(mdp);
  expect(report, lp.feasible, "lp reported infeasible");
  expect(report, std::abs(lp.objective - 0.5 * optimal.scalar_return) <= 1e-9,
         "lp objective does not match (1-gamma) J(pi*)");

  const OccupancyMeasure mu_tilde = spurious_measure();
  expect(report,
         bellman_flow_residual(mdp, mu_tilde).cwiseAbs().maxCoeff() > 1e-6,
         "the spurious measure should not satisfy the flow constraint");

  const std::vector<OccupancyMeasure> primal = {mu_star, mu_tilde};
  const std::vector<Vector> dual = {optimal.v};
  const FiniteClassSaddleProblem classes{
      static_cast<Index>(primal.size()), static_cast<Index>(dual.size()),
      [&](Index i, Index j) { return exact_lagrangian(mdp, primal[i], dual[j]); }};

  const SaddleCertificate spurious = certify_saddle_point(classes, 1, 0, 1e-12);
  const SaddleCertificate optimal_pair = certify_saddle_point(classes, 0, 0, 1e-12);
  report.spurious_certified = spurious.is_saddle;
  report.optimal_certified = optimal_pair.is_saddle;
  report.worst_violation = spurious.worst_violation;
  report.saddle_value = exact_lagrangian(mdp, mu_tilde, optimal.v);
  expect(report, spurious.is_saddle, "(mu~, V*) failed saddle certification");
  expect(report, optimal_pair.is_saddle, "(mu*, V*) failed saddle certification");
  expect(report, std::abs(report.saddle_value - 0.5) <= 1e-12,
         mismatch("L(mu~, V*)", 0.5, report.saddle_value));

  const Policy extracted = extract_policy_from_occupancy(mu_tilde, kA);
  report.j_star = optimal.scalar_return;
  report.j_spurious = evaluate_policy(mdp, extracted, 0).scalar_return;
  report.gap = report.j_star - report.j_spurious;
  expect(report, report.j_star == 1.0, mismatch("J(pi*)", 1.0, report.j_star));
  expect(report, std::abs(report.j_spurious - 13.0 / 16.0) <= 1e-10,
         mismatch("J(pi(mu~))", 13.0 / 16.0, report.j_spurious));
  expect(report, report.gap > 0.0, "extracted policy is not strictly suboptimal");
  return report;
}

DemoReport demonstrate_prop2(double l2_reward) {
  DemoReport report;
  report.name = "prop2";

  const Cmdp mdp = build_figure1_mdp_with_l2_reward(l2_reward);
  const Policy pi_star = constant_policy(kS, kA, kLeft);
  const Policy pi_tilde = constant_policy(kS, kA, kRight);
  const ValueFunctions optimal = evaluate_policy(mdp, pi_star, 0);
  const OccupancyMeasure mu_star = occupancy_of_policy(mdp, pi_star);
  const Vector q_hat = flatten_values(optimal.v);

  // Sanity anchors for the flattened table under the default reward.
  expect(report, std::abs(q_hat[sa_index(kS0, kLeft, kA)] - 1.0) <= 1e-10 ||
                     l2_reward != 4.0,
         "qhat(s0, .) should equal 1");

  const double l_star = exact_lagrangian_decomposed(mdp, mu_star, pi_star, q_hat);
  const double l_tilde = exact_lagrangian_decomposed(mdp, mu_star, pi_tilde, q_hat);
  report.saddle_value = l_tilde;
  expect(report, std::abs(l_star - 0.5) <= 1e-12,
         mismatch("L(mu*, pi*; qhat)", 0.5, l_star));
  expect(report, std::abs(l_tilde - 0.5) <= 1e-12,
         mismatch("L(mu*, pi~; qhat)", 0.5, l_tilde));
  expect(report, std::abs(l_star - l_tilde) <= 1e-12,
         "the split Lagrangian should not depend on the policy choice");

  // Primal candidates (mu*, pi*) and (mu*, pi~) against the single dual qhat.
  const std::vector<const Policy*> policies = {&pi_star, &pi_tilde};
  const FiniteClassSaddleProblem classes{
      2, 1, [&](Index i, Index j) {
        (void)j;
        return exact_lagrangian_decomposed(mdp, mu_star, *policies[i], q_hat);
      }};
  const SaddleCertificate tilde_cert = certify_saddle_point(classes, 1, 0, 1e-12);
  const SaddleCertificate star_cert = certify_saddle_point(classes, 0, 0, 1e-12);
  report.spurious_certified = tilde_cert.is_saddle;
  report.optimal_certified = star_cert.is_saddle;
  report.worst_violation = std::max(tilde_cert.worst_violation,
                                    star_cert.worst_violation);
  expect(report, tilde_cert.is_saddle, "(mu*, pi~; qhat) failed certification");
  expect(report, star_cert.is_saddle, "(mu*, pi*; qhat) failed certification");

  report.j_star = optimal.scalar_return;
  report.j_spurious = evaluate_policy(mdp, pi_tilde, 0).scalar_return;
  report.gap = report.j_star - report.j_spurious;
  expect(report, report.j_spurious < report.j_star,
         "pi~ should be strictly suboptimal");
  return report;
}

RealizabilityReport verify_realizability_fix(int n_mdps, std::uint64_t seed,
                                             double tol) {
  RealizabilityReport report;
  auto fail = [&report](const std::string& message) {
    report.passed = false;
    report.failures.push_back(message);
  };

  // Repair of the first demonstration: admit the value function of the policy
  // extracted from the spurious measure and the certification must break.
  {
    const Cmdp mdp = build_figure1_mdp();
    const Policy always_left = constant_policy(kS, kA, kLeft);
    const ValueFunctions optimal = evaluate_policy(mdp, always_left, 0);
    const OccupancyMeasure mu_star = occupancy_of_policy(mdp, always_left);
    const OccupancyMeasure mu_tilde = spurious_measure();
    const Policy extracted = extract_policy_from_occupancy(mu_tilde, kA);
    const Vector v_extracted = evaluate_policy(mdp, extracted, 0).v;

    const std::vector<OccupancyMeasure> primal = {mu_star, mu_tilde};
    const std::vector<Vector> dual = {optimal.v, v_extracted};
    const FiniteClassSaddleProblem classes{
        2, 2, [&](Index i, Index j) {
          return exact_lagrangian(mdp, primal[i], dual[j]);
        }};
    const SaddleCertificate cert = certify_saddle_point(classes, 1, 0, 1e-9);
    report.prop1_spurious_rejected = !cert.is_saddle;
    if (cert.is_saddle) fail("prop1 spurious pair survived the repaired dual class");

    // The optimal pair must survive the augmentation.
    if (!certify_saddle_point(classes, 0, 0, 1e-9).is_saddle)
      fail("prop1 optimal pair lost certification after augmentation");
  }

  // Repair of the second demonstration: admit Q^{pi~}.
  {
    const Cmdp mdp = build_figure1_mdp();
    const Policy pi_star = constant_policy(kS, kA, kLeft);
    const Policy pi_tilde = constant_policy(kS, kA, kRight);
    const ValueFunctions optimal = evaluate_policy(mdp, pi_star, 0);
    const OccupancyMeasure mu_star = occupancy_of_policy(mdp, pi_star);
    const Vector q_hat = flatten_values(optimal.v);
    const Vector q_tilde = evaluate_policy(mdp, pi_tilde, 0).q;

    const std::vector<const Policy*> policies = {&pi_star, &pi_tilde};
    const std::vector<const Vector*> duals = {&q_hat, &q_tilde};
    const FiniteClassSaddleProblem classes{
        2, 2, [&](Index i, Index j) {
          return exact_lagrangian_decomposed(mdp, mu_star, *policies[i], *duals[j]);
        }};
    const SaddleCertificate cert = certify_saddle_point(classes, 1, 0, 1e-9);
    report.prop2_spurious_rejected = !cert.is_saddle;
    if (cert.is_saddle) fail("prop2 spurious tuple survived the repaired dual class");
  }

  // Random sweep: with V^pi available for every candidate policy, certified
  // saddles may only extract near-optimal policies.
  SplitMix64 rng(seed);
  for (int trial = 0; trial < n_mdps; ++trial) {
    RandomCmdpParams params;
    params.n_states = 4;
    params.n_actions = 2;
    params.n_constraints = 0;
    params.gamma = 0.9;
    const Cmdp mdp = make_random_cmdp(params, rng);
    const LpSolution lp = solve_constrained_lp(mdp);
    const double j_star = lp.objective / (1.0 - mdp.gamma);

    // Primal candidates: every deterministic policy's occupancy plus a few
    // arbitrary nonnegative measures.
    std::vector<OccupancyMeasure> primal;
    const Index n_det = 1 << mdp.n_states;  // 2 actions
    for (Index mask = 0; mask < n_det; ++mask) {
      Matrix probs = Matrix::Zero(mdp.n_states, mdp.n_actions);
      for (Index s = 0; s < mdp.n_states; ++s) probs(s, (mask >> s) & 1) = 1.0;
      primal.push_back(occupancy_of_policy(mdp, Policy{std::move(probs)}));
    }
    for (int k = 0; k < 4; ++k) {
      Vector values(mdp.n_state_actions());
      for (Index idx = 0; idx < values.size(); ++idx) values[idx] = rng.next_double();
      primal.push_back(OccupancyMeasure{std::move(values)});
    }

    // Dual candidates: V^{pi(mu)} for every primal candidate.
    std::vector<Vector> dual;
    std::vector<double> extracted_return(primal.size());
    for (std::size_t i = 0; i < primal.size(); ++i) {
      const Policy pi = extract_policy_from_occupancy(primal[i], mdp.n_actions);
      const ValueFunctions vf = evaluate_policy(mdp, pi, 0);
      extracted_return[i] = vf.scalar_return;
      dual.push_back(vf.v);
    }

    Matrix values(primal.size(), dual.size());
    for (std::size_t i = 0; i < primal.size(); ++i)
      for (std::size_t j = 0; j < dual.size(); ++j)
        values(i, j) = exact_lagrangian(mdp, primal[i], dual[j]);
    const FiniteClassSaddleProblem classes{
        values.rows(), values.cols(),
        [&values](Index i, Index j) { return values(i, j); }};

    for (Index i = 0; i < values.rows(); ++i) {
      for (Index j = 0; j < values.cols(); ++j) {
        if (!certify_saddle_point(classes, i, j, 1e-9).is_saddle) continue;
        ++report.n_saddles_checked;
        const double gap = j_star - extracted_return[i];
        report.worst_gap = std::max(report.worst_gap, gap);
        if (gap > tol) {
          ++report.n_bad_extractions;
          std::ostringstream os;
          os << "trial " << trial << ": certified saddle (" << i << "," << j
             << ") extracts J = " << extracted_return[i] << " vs J* = " << j_star;
          fail(os.str());
        }
      }
    }
    ++report.n_mdps;
  }
  return report;
}

}  // namespace cmdplab
