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
#include <string>

#include "cmdplab/cmdp.hpp"
#include "cmdplab/counterexamples.hpp"
#include "cmdplab/exact_oracle.hpp"

namespace cmdplab {

/// Raised on malformed input files or configs; carries the offending field.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// CMDP files: {n_states, n_actions, gamma, initial_state,
/// transition[s][a][s'], rewards[i][s][a], thresholds[]}.
std::string cmdp_to_json(const Cmdp& cmdp);
Cmdp cmdp_from_json(const std::string& text);
Cmdp load_cmdp_file(const std::string& path);
void save_cmdp_file(const std::string& path, const Cmdp& cmdp);

/// LP solutions: {feasible, objective, mu_star[s][a], policy_star[s][a],
/// dual_v[s], lambda_star[i], phi}.
std::string lp_solution_to_json(const Cmdp& cmdp, const LpSolution& solution,
                                std::optional<double> phi);

std::string demo_report_to_json(const DemoReport& report);
std::string realizability_report_to_json(const RealizabilityReport& report);

}  // namespace cmdplab
