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

#include "cmdplab/cmdp.hpp"
#include "cmdplab/rng.hpp"

namespace cmdplab {

struct RandomCmdpParams {
  Index n_states = 5;
  Index n_actions = 2;
  Index n_constraints = 0;
  double gamma = 0.8;
  /// Floor added to raw transition weights; keeps every row full-support so
  /// all states stay reachable.
  double transition_smoothing = 0.05;
};

/// Random dense CMDP: full-support transition rows, rewards uniform in [0,1].
/// When n_constraints > 0, thresholds are drawn below the uniform policy's
/// constraint values (loose but not always slack).
Cmdp make_random_cmdp(const RandomCmdpParams& params, SplitMix64& rng);

struct FeasibleCmdpSpec {
  RandomCmdpParams base;
  double min_slater = 0.05;     // accept only margins at least this large
  bool require_binding = false; // demand active constraints at the optimum
  int max_tries = 500;
};

/// Rejection-samples instances until the Slater margin clears min_slater (and,
/// when requested, the constrained optimum carries a nonzero multiplier).
/// Throws std::runtime_error if max_tries is exhausted.
Cmdp make_random_feasible_cmdp(const FeasibleCmdpSpec& spec, SplitMix64& rng);

}  // namespace cmdplab
