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

#include "cmdplab/random_cmdp.hpp"

#include <stdexcept>

#include "cmdplab/exact_oracle.hpp"

namespace cmdplab {

Cmdp make_random_cmdp(const RandomCmdpParams& params, SplitMix64& rng) {
  const Index nsa = params.n_states * params.n_actions;
  Matrix transition(nsa, params.n_states);
  for (Index row = 0; row < nsa; ++row) {
    double sum = 0.0;
    for (Index sn = 0; sn < params.n_states; ++sn) {
      const double u = rng.next_double();
      transition(row, sn) = params.transition_smoothing + u * u;
      sum += transition(row, sn);
    }
    transition.row(row) /= sum;
  }

  std::vector<Vector> rewards;
  rewards.reserve(params.n_constraints + 1);
  for (Index i = 0; i <= params.n_constraints; ++i) {
    Vector r(nsa);
    for (Index k = 0; k < nsa; ++k) r[k] = rng.next_double();
    rewards.push_back(std::move(r));
  }

  const Index initial_state =
      static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(params.n_states)));

  Cmdp cmdp = make_cmdp(params.n_states, params.n_actions, std::move(transition),
                        std::move(rewards), params.gamma, initial_state,
                        Vector::Zero(params.n_constraints));
  if (params.n_constraints > 0) {
    const Policy uniform = uniform_policy(params.n_states, params.n_actions);
    const OccupancyMeasure mu_unif = occupancy_of_policy(cmdp, uniform);
    for (Index i = 0; i < params.n_constraints; ++i) {
      const double at_uniform =
          cmdp.rewards[static_cast<std::size_t>(i + 1)].dot(mu_unif.values);
      cmdp.thresholds[i] = rng.next_double() * 0.8 * at_uniform;
    }
  }
  return cmdp;
}

Cmdp make_random_feasible_cmdp(const FeasibleCmdpSpec& spec, SplitMix64& rng) {
  for (int attempt = 0; attempt < spec.max_tries; ++attempt) {
    Cmdp cmdp = make_random_cmdp(spec.base, rng);
    if (cmdp.n_constraints() < 1)
      throw std::invalid_argument("make_random_feasible_cmdp: needs constraints");

    if (spec.require_binding) {
      // Push thresholds above what the unconstrained optimum achieves, while
      // staying below each constraint's own maximum so a margin can survive.
      Cmdp unconstrained = cmdp;
      unconstrained.rewards.resize(1);
      unconstrained.thresholds = Vector();
      const LpSolution free_opt = solve_constrained_lp(unconstrained);
      bool ok = true;
      for (Index i = 0; i < cmdp.n_constraints(); ++i) {
        const double at_opt = cmdp.rewards[static_cast<std::size_t>(i + 1)].dot(
            free_opt.mu_star.values);
        const double at_best = max_achievable_constraint_value(cmdp, i + 1);
        if (at_best <= at_opt + 1e-9) {
          ok = false;  // this reward cannot bind; redraw the instance
          break;
        }
        cmdp.thresholds[i] =
            at_opt + rng.next_in(0.15, 0.7) * (at_best - at_opt);
      }
      if (!ok) continue;
    }

    const double phi = slater_margin(cmdp);
    if (phi < spec.min_slater) continue;
    if (spec.require_binding) {
      const LpSolution lp = solve_constrained_lp(cmdp);
      if (!lp.feasible || lp.dual_lambda.sum() < 1e-6) continue;
    }
    return cmdp;
  }
  throw std::runtime_error("make_random_feasible_cmdp: no acceptable instance after max_tries");
}

}  // namespace cmdplab
