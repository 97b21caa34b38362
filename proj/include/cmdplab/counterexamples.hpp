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
#include <string>
#include <vector>

#include "cmdplab/cmdp.hpp"

namespace cmdplab {

/// State and action labels of the five-state example MDP.
enum Figure1State : Index { kS0 = 0, kL1 = 1, kR1 = 2, kL2 = 3, kR2 = 4 };
enum Figure1Action : Index { kLeft = 0, kRight = 1 };

/// The five-state, two-action MDP on which restricted Lagrangian saddle
/// points go spurious. gamma = 1/2, start at s0; l1 pays 1, l2 pays 4, all
/// states below the first level absorbing. Action L splits 1/2-1/2 to the
/// next level, action R splits 1/4-3/4.
Cmdp build_figure1_mdp();

/// Same MDP with the l2 self-loop reward overridden; values other than 4 break
/// the documented value tables on purpose (debug aid).
Cmdp build_figure1_mdp_with_l2_reward(double l2_reward);

/// Finite saddle-point search space: primal candidates indexed 0..n_primal-1,
/// dual candidates 0..n_dual-1, with the Lagrangian supplied as a callback.
struct FiniteClassSaddleProblem {
  Index n_primal = 0;
  Index n_dual = 0;
  std::function<double(Index, Index)> value;
};

struct SaddleCertificate {
  bool is_saddle = false;
  double worst_violation = 0.0;
};

/// Exhaustively checks L(x, y_hat) <= L(x_hat, y_hat) <= L(x_hat, y) for every
/// listed x and y, within tol; reports the largest violation found.
SaddleCertificate certify_saddle_point(const FiniteClassSaddleProblem& problem,
                                       Index primal_idx, Index dual_idx, double tol);

/// Outcome of one reconstruction; `failures` lists any violated expectation.
struct DemoReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> failures;
  double j_star = 0.0;        // return of the optimal policy
  double j_spurious = 0.0;    // return extracted from the spurious candidate
  double gap = 0.0;           // j_star - j_spurious
  double saddle_value = 0.0;  // Lagrangian value at the certified saddle
  double worst_violation = 0.0;
  bool spurious_certified = false;
  bool optimal_certified = false;
};

/// Restricted classes U = {mu*, mu~}, V = {V*}: certifies the spurious pair
/// (mu~, V*), extracts its policy and shows it strictly suboptimal.
DemoReport demonstrate_prop1(double l2_reward = 4.0);

/// Split-variable classes U = {mu*}, Pi = {pi*, pi~}, Q = {Qhat}: both policy
/// choices sit at the same certified saddle value, so the saddle cannot
/// identify the optimal policy. Qhat assigns each pair the state's optimal
/// value V*(s).
DemoReport demonstrate_prop2(double l2_reward = 4.0);

struct RealizabilityReport {
  bool passed = true;
  std::vector<std::string> failures;
  // Fixed repairs on the example MDP.
  bool prop1_spurious_rejected = false;  // after adding V^{pi(mu~)}
  bool prop2_spurious_rejected = false;  // after adding Q^{pi~}
  // Random sweep.
  int n_mdps = 0;
  int n_saddles_checked = 0;
  int n_bad_extractions = 0;
  double worst_gap = 0.0;  // max over certified saddles of J* - J(extracted)
};

/// Constructive check that all-policy dual realizability removes spurious
/// saddles: repairs the two demonstrations above, then sweeps random MDPs
/// with dual classes containing V^pi for every candidate policy and verifies
/// every certified saddle extracts a near-optimal policy.
RealizabilityReport verify_realizability_fix(int n_mdps, std::uint64_t seed, double tol);

}  // namespace cmdplab
