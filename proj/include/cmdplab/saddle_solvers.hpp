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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>

#include "cmdplab/estimators.hpp"
#include "cmdplab/function_classes.hpp"

namespace cmdplab {

/// Projected online gradient ascent over the weight box; the no-regret oracle
/// driving the w-player.
struct OgdOracleState {
  Vector current;              // inside [0, box_upper]^n after every step
  double step_size = 0.0;      // eta
  double gradient_bound = 0.0; // G used when eta was selected
  double box_upper = 0.0;
};

OgdOracleState make_ogd_state(const WeightClassBox& box, double step_size,
                              double gradient_bound);

/// Ascent step: project(current + eta * gradient) onto the box.
OgdOracleState ogd_step(const OgdOracleState& state, const Vector& gradient);

/// Multiplicative-weights policy step: row s becomes
/// policy(.|s) * exp(alpha q(s,.)), renormalized, applied at every state.
/// Iterating t times from uniform with a fixed q equals softmax_policy(q, alpha*t).
Policy mirror_descent_update(const Policy& policy, const Vector& q, double alpha);

/// Greedy multiplier step over B * simplex: with c_i = data_term_i - tau_i,
/// returns B e_{i*} for the smallest index i* attaining min c < 0, else zero.
Vector lambda_best_response(const Vector& data_term_per_constraint,
                            const Vector& thresholds, double dual_bound);

struct SolverConfig {
  long iterations = 0;     // T
  double alpha = 0.0;      // mirror-descent rate
  double eta = 0.0;        // OGD step on the unscaled td coefficients
  double dual_bound = 0.0; // B (constrained runs)
  std::uint64_t seed = 0;
  bool record_trace = false;
  bool record_iterates = false;  // heavy; per-iteration snapshots for tests

  /// T = n, alpha = (1-gamma) sqrt(log|A|/T), eta = C_W / (B' sqrt(T)) with
  /// B' = 1 + 1/(1-gamma), and B = 1 + 1/phi when a margin is supplied.
  static SolverConfig defaults(long iterations, double gamma, Index n_actions,
                               double weight_cap,
                               std::optional<double> slater_margin_phi = std::nullopt);
};

struct SolverClasses {
  WeightClassBox w_box;
  QClassBox q_box;
};

struct TraceRow {
  long t = 0;
  double l_hat = 0.0;
  Vector returns;  // exact J_i(pi_t) when an evaluator is wired in
  Vector lambda;
  double w_inf = 0.0;
};

/// Test hook payload; populated only under record_iterates.
struct IterateSnapshot {
  Policy policy;
  Vector q;
  Vector w;
  Vector lambda;
};

struct SolverResult {
  long iterations = 0;
  /// All T policies when record_trace is set; empty otherwise (a uniform
  /// reservoir of at most 32 iterates stands in for spot checks).
  std::vector<Policy> mixture;
  std::vector<Policy> sampled_policies;
  Vector lambda_avg;       // (1/T) sum_t lambda_t (constrained runs)
  /// Mixture returns J_i(Uniform(pi_1..pi_T)) = (1/T) sum_t J_i(pi_t),
  /// accumulated from the evaluator; empty when none was supplied.
  Vector mixture_returns;
  std::vector<TraceRow> trace;
  std::vector<IterateSnapshot> iterates;
};

/// Exact per-policy returns (J_0..J_I) supplied by the harness; the solver
/// itself never touches the transition kernel.
using ReturnsEvaluator = std::function<Vector(const Policy&)>;

/// Raised when an estimator value turns non-finite mid-run.
struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Primal-dual loop for the unconstrained problem: OGD w-player, mirror-descent
/// pi-player, greedy box-vertex Q-player; returns the iterate mixture.
/// The w iterate is kept constant within (s,a) cells (a weight function, the
/// class the realizability assumption speaks about); its OGD step is the
/// Euclidean projection of the per-datapoint ascent onto that subspace. The
/// loop consumes the dataset only through its (s,a,s') histogram, so one
/// iteration costs O(S^2 A) independent of n.
SolverResult run_pdorl(const SolverProblem& problem, const OfflineDataset& data,
                       const SolverClasses& classes, const SolverConfig& config,
                       const ReturnsEvaluator& evaluator = nullptr);

/// Constrained variant: the same loop on reward r_0 + sum_i lambda_i r_i with a
/// greedy lambda-player over dual_bound * simplex appended each iteration.
SolverResult run_pdocrl(const SolverProblem& problem, const OfflineDataset& data,
                        const SolverClasses& classes, const SolverConfig& config,
                        const ReturnsEvaluator& evaluator = nullptr);

/// J_i of the uniform mixture: the average of exact per-policy returns.
Vector evaluate_mixture(const Cmdp& cmdp, const std::vector<Policy>& mixture);

/// Columns: t, L_hat, J0_exact..JI_exact, lambda_1..lambda_I, w_norm_inf.
void write_trace_csv(std::ostream& out, const SolverResult& result, Index n_constraints);

}  // namespace cmdplab
