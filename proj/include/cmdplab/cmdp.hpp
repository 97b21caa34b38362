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

#include <string>
#include <vector>

#include "cmdplab/types.hpp"

namespace cmdplab {

/// Finite constrained MDP with one primary reward (index 0) and I auxiliary
/// rewards whose discounted occupancy-weighted returns must clear thresholds.
/// The initial distribution is a point mass on `initial_state`.
///
/// Layout: `transition` is (S*A) x S, row sa_index(s,a) holding P(. | s, a);
/// each reward is a length-(S*A) vector with values in [0, 1].
/// Instances are immutable after construction; every operation is pure.
struct Cmdp {
  Index n_states = 0;
  Index n_actions = 0;
  Matrix transition;            // (S*A) x S
  std::vector<Vector> rewards;  // I+1 vectors of length S*A
  double gamma = 0.0;
  Index initial_state = 0;
  Vector thresholds;            // length I, values in [0, 1]

  Index n_state_actions() const { return n_states * n_actions; }
  Index n_constraints() const { return thresholds.size(); }
  double reward_at(Index i, Index s, Index a) const {
    return rewards[static_cast<std::size_t>(i)][sa_index(s, a, n_actions)];
  }
};

/// Stationary policy: row s is the action distribution at state s.
struct Policy {
  Matrix probs;  // S x A

  Index n_states() const { return probs.rows(); }
  Index n_actions() const { return probs.cols(); }
};

/// Nonnegative measure over state-action pairs, flattened with sa_index.
/// Admissibility (mass 1, zero flow residual) is not enforced here; several
/// constructions need genuinely inadmissible measures.
struct OccupancyMeasure {
  Vector values;  // length S*A

  double operator()(Index s, Index a, Index n_actions) const {
    return values[sa_index(s, a, n_actions)];
  }
};

/// Policy-evaluation output for one reward signal.
struct ValueFunctions {
  Vector v;              // length S
  Vector q;              // length S*A
  double scalar_return;  // v(initial_state)
};

/// One invariant violation found by validate_cmdp. `field` carries the
/// offending field name with indices, e.g. "transition[s=0,a=1]".
struct ValidationIssue {
  std::string field;
  std::string message;
};

/// Constructs a Cmdp, renormalizing probability rows whose sums are within
/// kRowSumTol of 1 so downstream linear solves see exact distributions.
/// Rows further off are stored as given for validate_cmdp to report.
Cmdp make_cmdp(Index n_states, Index n_actions, Matrix transition,
               std::vector<Vector> rewards, double gamma, Index initial_state,
               Vector thresholds);

/// Checks every Cmdp invariant and reports all violations found (empty means
/// the instance is well formed). Never throws.
std::vector<ValidationIssue> validate_cmdp(const Cmdp& cmdp);

/// Builds a policy from probability rows, renormalizing within kRowSumTol.
Policy make_policy(Matrix probs);

/// Policy that plays action `a` in every state.
Policy constant_policy(Index n_states, Index n_actions, Index a);

/// Uniform policy over all actions.
Policy uniform_policy(Index n_states, Index n_actions);

/// pi(a|s) = mu(s,a) / sum_a' mu(s,a'), uniform on states with zero row mass.
Policy extract_policy_from_occupancy(const OccupancyMeasure& mu, Index n_actions);

/// Extraction from an importance weight against a data distribution:
/// normalizes w(s,.) * mu_d(s,.) per state, uniform where the mass vanishes.
/// Both arguments are (s,a) tables of length S*A.
Policy extract_policy_from_weights(const Vector& w, const Vector& mu_d, Index n_states,
                                   Index n_actions);

/// Softmax policy pi(.|s) proportional to exp(c * q(s,.)), computed with
/// per-row max subtraction. The per-row shift makes the result invariant to
/// per-state constants in q and safe for c*q far outside exp range.
Policy softmax_policy(const Vector& q, double c, Index n_states, Index n_actions);

/// sup_s sum_a |p1(a|s) - p2(a|s)|. Throws std::invalid_argument on shape
/// mismatch.
double policy_distance_inf1(const Policy& p1, const Policy& p2);

/// Per-state row sums of an (s,a) table: the E^T operator.
Vector state_marginals(const Vector& sa_table, Index n_states, Index n_actions);

}  // namespace cmdplab
