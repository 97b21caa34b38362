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
#include <vector>

#include "cmdplab/json_io.hpp"
#include "cmdplab/random_cmdp.hpp"
#include "cmdplab/saddle_solvers.hpp"

namespace cmdplab {

/// Raised when an instance breaks a precondition of the requested algorithm
/// (infeasible constraints, nonpositive Slater margin, uncovered optimal
/// policy). Maps to exit code 3 in the CLI.
struct AssumptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeneratorSpec {
  RandomCmdpParams params;
  std::uint64_t seed = 1;
  double min_slater = 0.05;
  bool require_binding = false;
};

struct ExperimentConfig {
  // CMDP source: exactly one of the two.
  std::optional<std::string> cmdp_file;
  std::optional<GeneratorSpec> generator;

  // Data spec.
  double beta = 0.5;
  std::string anchor = "optimal";  // "optimal" or "uniform"
  std::vector<long> n_list;
  std::vector<std::uint64_t> seeds;

  // Solver spec.
  std::string algorithm = "pdorl";  // "pdorl" or "pdocrl"
  std::optional<long> fixed_T;      // default rule: T = n
  std::optional<double> alpha_override;
  std::optional<double> eta_override;
  double cw_slack = 1.0;
  bool record_trace = false;

  // Output spec.
  bool dump_datasets = false;
};

/// Parses and validates the config JSON; throws ConfigError with the offending
/// field on any problem.
ExperimentConfig experiment_config_from_json(const std::string& text);

struct ExperimentResult {
  std::string header;
  std::vector<std::string> rows;  // one per (n, seed) cell, deterministic order
  Index n_constraints = 0;
  double c_star = 0.0;
  double phi = 0.0;  // nan when I = 0
};

/// Resolves the CMDP, builds the data distribution, then runs one solver cell
/// per (n, seed) pair on a worker pool. Rows come back ordered by (n, seed)
/// regardless of completion order; apart from the wall_ms column they are a
/// pure function of the config.
/// When out_dir is nonempty, traces and dumped datasets land there.
ExperimentResult run_experiment(const ExperimentConfig& config, int threads,
                                const std::string& out_dir = "");

/// The CMDP named by the config (loaded or generated).
Cmdp resolve_cmdp(const ExperimentConfig& config);

/// Prints doubles with 12 significant digits, the precision of the results
/// contract.
std::string format_sig12(double x);

}  // namespace cmdplab
