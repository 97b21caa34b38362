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

#include "cmdplab/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "cmdplab/exact_oracle.hpp"

#include "json.hpp"

namespace cmdplab {

using nlohmann::json;

namespace {

struct Cell {
  long n = 0;
  std::uint64_t seed = 0;
};

struct SharedSetup {
  Cmdp cmdp;
  SolverProblem problem;
  DataDistribution mu_d;
  double c_star = 0.0;
  double phi = std::numeric_limits<double>::quiet_NaN();
  double j0_star = 0.0;  // reference optimal return for the chosen algorithm
  double cap_w = 0.0;
  double cap_q = 0.0;
  bool constrained = false;
};

double max_primary_reward(const Cmdp& cmdp) {
  double mx = 0.0;
  for (const Vector& r : cmdp.rewards) mx = std::max(mx, r.maxCoeff());
  return mx;
}

SharedSetup prepare(const ExperimentConfig& config) {
  SharedSetup setup;
  setup.cmdp = resolve_cmdp(config);
  setup.problem = SolverProblem::from_cmdp(setup.cmdp);
  setup.constrained = config.algorithm == "pdocrl";

  const Index I = setup.cmdp.n_constraints();
  if (setup.constrained && I < 1)
    throw ConfigError("algorithm pdocrl requires at least one constraint");

  // Reference optimum: the constrained LP for pdocrl, the plain LP otherwise.
  LpSolution reference;
  if (setup.constrained) {
    reference = solve_constrained_lp(setup.cmdp);
    if (!reference.feasible)
      throw AssumptionError("constraints are infeasible for this instance");
    setup.phi = slater_margin(setup.cmdp);
    if (setup.phi <= 0.0)
      throw AssumptionError("Slater margin is " + std::to_string(setup.phi) +
                            "; a strictly feasible policy is required");
  } else {
    Cmdp unconstrained = setup.cmdp;
    unconstrained.rewards.resize(1);
    unconstrained.thresholds = Vector();
    reference = solve_constrained_lp(unconstrained);
    if (I >= 1) setup.phi = slater_margin(setup.cmdp);
  }
  setup.j0_star = reference.objective / (1.0 - setup.cmdp.gamma);

  const Policy anchor = config.anchor == "uniform"
                            ? uniform_policy(setup.cmdp.n_states, setup.cmdp.n_actions)
                            : reference.policy_star;
  setup.mu_d = build_mixture_distribution(setup.cmdp, anchor, config.beta,
                                          config.anchor);
  setup.c_star = concentrability(setup.cmdp, reference.policy_star, setup.mu_d.probs);
  if (!std::isfinite(setup.c_star))
    throw AssumptionError("data distribution does not cover the optimal policy");

  setup.cap_w = setup.c_star * config.cw_slack;
  const double rmax = std::max(1.0, max_primary_reward(setup.cmdp));
  if (setup.constrained) {
    const double dual_bound = 1.0 + 1.0 / setup.phi;
    setup.cap_q = (rmax + dual_bound) / (1.0 - setup.cmdp.gamma);
  } else {
    setup.cap_q = rmax / (1.0 - setup.cmdp.gamma);
  }
  return setup;
}

std::string run_cell(const ExperimentConfig& config, const SharedSetup& setup,
                     const Cell& cell, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  const Cmdp& cmdp = setup.cmdp;
  const Index I = cmdp.n_constraints();

  const OfflineDataset data = sample_dataset(cmdp, setup.mu_d, cell.n, cell.seed);
  const long T = config.fixed_T.value_or(cell.n);

  SolverConfig solver_config = SolverConfig::defaults(
      T, cmdp.gamma, cmdp.n_actions, setup.cap_w,
      setup.constrained ? std::optional<double>(setup.phi) : std::nullopt);
  if (config.alpha_override) solver_config.alpha = *config.alpha_override;
  if (config.eta_override) solver_config.eta = *config.eta_override;
  solver_config.seed = cell.seed;
  solver_config.record_trace = config.record_trace;

  SolverClasses classes{WeightClassBox{setup.cap_w, data.size()},
                        QClassBox{setup.cap_q}};

  ReturnsEvaluator evaluator = [&cmdp, I](const Policy& policy) {
    Vector returns(I + 1);
    for (Index i = 0; i <= I; ++i)
      returns[i] = evaluate_policy(cmdp, policy, i).scalar_return;
    return returns;
  };

  const SolverResult result =
      setup.constrained
          ? run_pdocrl(setup.problem, data, classes, solver_config, evaluator)
          : run_pdorl(setup.problem, data, classes, solver_config, evaluator);

  const double j0_mix = result.mixture_returns[0];
  double violation_max = 0.0;
  for (Index i = 0; i < I; ++i) {
    const double achieved = (1.0 - cmdp.gamma) * result.mixture_returns[i + 1];
    violation_max = std::max(violation_max, cmdp.thresholds[i] - achieved);
  }

  if (!out_dir.empty() && config.record_trace) {
    std::ostringstream name;
    name << out_dir << "/trace_" << config.algorithm << "_n" << cell.n << "_seed"
         << cell.seed << ".csv";
    std::ofstream trace_out(name.str());
    write_trace_csv(trace_out, result, I);
  }
  if (!out_dir.empty() && config.dump_datasets) {
    std::ostringstream base;
    base << out_dir << "/dataset_n" << cell.n << "_seed" << cell.seed;
    std::ofstream csv(base.str() + ".csv");
    write_dataset_csv(csv, data);
    std::ofstream sidecar(base.str() + ".json");
    sidecar << dataset_sidecar_json(data) << '\n';
  }

  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                start)
          .count();

  std::ostringstream row;
  row << config.algorithm << ',' << cell.n << ',' << cell.seed << ',' << T << ','
      << format_sig12(j0_mix) << ',' << format_sig12(setup.j0_star) << ','
      << format_sig12(setup.j0_star - j0_mix);
  for (Index i = 0; i < I; ++i)
    row << ',' << format_sig12(result.mixture_returns[i + 1]);
  row << ',' << format_sig12(violation_max) << ',' << format_sig12(setup.c_star)
      << ',' << format_sig12(setup.phi) << ',' << format_sig12(wall_ms);
  return row.str();
}

}  // namespace

std::string format_sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::string(buf);
}

Cmdp resolve_cmdp(const ExperimentConfig& config) {
  if (config.cmdp_file.has_value() == config.generator.has_value())
    throw ConfigError("config must name exactly one of cmdp.file / cmdp.generator");
  if (config.cmdp_file) return load_cmdp_file(*config.cmdp_file);

  SplitMix64 rng(config.generator->seed);
  if (config.generator->params.n_constraints > 0) {
    FeasibleCmdpSpec spec;
    spec.base = config.generator->params;
    spec.min_slater = config.generator->min_slater;
    spec.require_binding = config.generator->require_binding;
    return make_random_feasible_cmdp(spec, rng);
  }
  return make_random_cmdp(config.generator->params, rng);
}

ExperimentConfig experiment_config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }

  ExperimentConfig config;
  try {
    const auto& jc = j.at("cmdp");
    if (jc.contains("file")) config.cmdp_file = jc.at("file").get<std::string>();
    if (jc.contains("generator")) {
      const auto& jg = jc.at("generator");
      GeneratorSpec gen;
      gen.params.n_states = jg.value("n_states", gen.params.n_states);
      gen.params.n_actions = jg.value("n_actions", gen.params.n_actions);
      gen.params.n_constraints = jg.value("n_constraints", gen.params.n_constraints);
      gen.params.gamma = jg.value("gamma", gen.params.gamma);
      gen.seed = jg.value("seed", gen.seed);
      gen.min_slater = jg.value("min_slater", gen.min_slater);
      gen.require_binding = jg.value("require_binding", gen.require_binding);
      config.generator = gen;
    }

    const auto& jd = j.at("data");
    config.beta = jd.value("beta", 0.5);
    config.anchor = jd.value("anchor", std::string("optimal"));
    for (const auto& n : jd.at("n")) config.n_list.push_back(n.get<long>());
    for (const auto& s : jd.at("seeds"))
      config.seeds.push_back(s.get<std::uint64_t>());

    const auto& js = j.at("solver");
    config.algorithm = js.at("algorithm").get<std::string>();
    if (js.contains("T")) config.fixed_T = js.at("T").get<long>();
    if (js.contains("alpha")) config.alpha_override = js.at("alpha").get<double>();
    if (js.contains("eta")) config.eta_override = js.at("eta").get<double>();
    config.cw_slack = js.value("cw_slack", 1.0);
    config.record_trace = js.value("record_trace", false);

    if (j.contains("output"))
      config.dump_datasets = j.at("output").value("dump_datasets", false);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config json: ") + e.what());
  }

  if (config.cmdp_file.has_value() == config.generator.has_value())
    throw ConfigError("config field 'cmdp': exactly one of file/generator");
  if (config.n_list.empty()) throw ConfigError("config field 'data.n': must be nonempty");
  for (long n : config.n_list)
    if (n < 1) throw ConfigError("config field 'data.n': every n must be >= 1");
  if (config.seeds.empty())
    throw ConfigError("config field 'data.seeds': must be nonempty");
  if (!(config.beta >= 0.0 && config.beta <= 1.0))
    throw ConfigError("config field 'data.beta': must lie in [0, 1]");
  if (config.anchor != "optimal" && config.anchor != "uniform")
    throw ConfigError("config field 'data.anchor': must be 'optimal' or 'uniform'");
  if (config.algorithm != "pdorl" && config.algorithm != "pdocrl")
    throw ConfigError("config field 'solver.algorithm': must be 'pdorl' or 'pdocrl'");
  if (config.fixed_T && *config.fixed_T < 1)
    throw ConfigError("config field 'solver.T': must be >= 1");
  return config;
}

ExperimentResult run_experiment(const ExperimentConfig& config, int threads,
                                const std::string& out_dir) {
  const SharedSetup setup = prepare(config);
  const Index I = setup.cmdp.n_constraints();

  std::vector<Cell> cells;
  for (long n : config.n_list)
    for (std::uint64_t seed : config.seeds) cells.push_back(Cell{n, seed});

  ExperimentResult result;
  result.n_constraints = I;
  result.c_star = setup.c_star;
  result.phi = setup.phi;
  {
    std::ostringstream header;
    header << "algo,n,seed,T,J0_mix,J0_star,subopt";
    for (Index i = 1; i <= I; ++i) header << ",J" << i << "_mix";
    header << ",violation_max,C_star,phi,wall_ms";
    result.header = header.str();
  }

  result.rows.resize(cells.size());
  const int worker_count =
      std::max(1, std::min<int>(threads, static_cast<int>(cells.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= cells.size()) return;
      try {
        result.rows[k] = run_cell(config, setup, cells[k], out_dir);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  if (worker_count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < worker_count; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return result;
}

}  // namespace cmdplab
