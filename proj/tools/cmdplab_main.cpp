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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "cmdplab/harness.hpp"

namespace {

// Exit codes: 0 success, 2 config error, 3 infeasible or assumption violated,
// 4 assertion failure.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitAssumption = 3;
constexpr int kExitAssertion = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw cmdplab::ConfigError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Accepts either a bare CMDP file or an experiment config naming one.
cmdplab::Cmdp cmdp_from_config_path(const std::string& path) {
  const std::string text = read_file(path);
  const auto probe = text.find("\"n_states\"");
  if (probe != std::string::npos) return cmdplab::cmdp_from_json(text);
  return cmdplab::resolve_cmdp(cmdplab::experiment_config_from_json(text));
}

int cmd_validate(const std::string& config_path, bool json_only) {
  const cmdplab::Cmdp cmdp = cmdp_from_config_path(config_path);
  const auto issues = cmdplab::validate_cmdp(cmdp);
  if (json_only) {
    std::cout << "{\"violations\":" << issues.size() << "}\n";
  } else {
    for (const auto& issue : issues)
      std::cout << issue.field << ": " << issue.message << '\n';
    if (issues.empty()) std::cout << "ok: all invariants hold\n";
  }
  return issues.empty() ? kExitOk : kExitConfig;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              bool json_only) {
  const cmdplab::Cmdp cmdp = cmdp_from_config_path(config_path);
  const cmdplab::LpSolution solution = cmdplab::solve_constrained_lp(cmdp);
  std::optional<double> phi;
  if (cmdp.n_constraints() >= 1) phi = cmdplab::slater_margin(cmdp);

  std::filesystem::create_directories(out_dir);
  const std::string out_path = out_dir + "/lp_solution.json";
  {
    std::ofstream out(out_path);
    out << cmdplab::lp_solution_to_json(cmdp, solution, phi) << '\n';
  }

  if (!solution.feasible) {
    std::ostringstream why;
    why << "infeasible:";
    for (cmdplab::Index i = 0; i < cmdp.n_constraints(); ++i) {
      const double best = cmdplab::max_achievable_constraint_value(cmdp, i + 1);
      if (best < cmdp.thresholds[i]) {
        why << " constraint " << (i + 1) << " unreachable (max achievable "
            << cmdplab::format_sig12(best) << " < tau "
            << cmdplab::format_sig12(cmdp.thresholds[i]) << ");";
      }
    }
    if (why.str() == "infeasible:")
      why << " thresholds jointly unattainable (each reachable in isolation)";
    std::cerr << why.str() << '\n';
    return kExitAssumption;
  }
  if (json_only) {
    std::cout << cmdplab::lp_solution_to_json(cmdp, solution, phi) << '\n';
  } else {
    std::cout << "objective " << cmdplab::format_sig12(solution.objective)
              << ", solution written to " << out_path << '\n';
  }
  return kExitOk;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, int threads,
            bool json_only) {
  const cmdplab::ExperimentConfig config =
      cmdplab::experiment_config_from_json(read_file(config_path));
  std::filesystem::create_directories(out_dir);
  const cmdplab::ExperimentResult result =
      cmdplab::run_experiment(config, threads, out_dir);

  const std::string out_path = out_dir + "/results.csv";
  {
    std::ofstream out(out_path);
    out << result.header << '\n';
    for (const auto& row : result.rows) out << row << '\n';
  }
  if (json_only) {
    std::cout << "{\"rows\":" << result.rows.size() << ",\"results\":\"" << out_path
              << "\"}\n";
  } else {
    std::cout << result.header << '\n';
    for (const auto& row : result.rows) std::cout << row << '\n';
    std::cout << "written to " << out_path << '\n';
  }
  return kExitOk;
}

int cmd_counterexamples(const std::string& out_dir, double l2_reward, bool json_only) {
  const cmdplab::DemoReport prop1 = cmdplab::demonstrate_prop1(l2_reward);
  const cmdplab::DemoReport prop2 = cmdplab::demonstrate_prop2(l2_reward);

  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir + "/prop1_report.json");
    out << cmdplab::demo_report_to_json(prop1) << '\n';
  }
  {
    std::ofstream out(out_dir + "/prop2_report.json");
    out << cmdplab::demo_report_to_json(prop2) << '\n';
  }
  cmdplab::save_cmdp_file(out_dir + "/figure1_cmdp.json",
                          cmdplab::build_figure1_mdp_with_l2_reward(l2_reward));

  if (json_only) {
    std::cout << "[" << cmdplab::demo_report_to_json(prop1) << ",\n"
              << cmdplab::demo_report_to_json(prop2) << "]\n";
  } else {
    for (const auto* report : {&prop1, &prop2}) {
      std::cout << report->name << ": " << (report->passed ? "ok" : "FAILED")
                << "  J*=" << cmdplab::format_sig12(report->j_star)
                << "  J(spurious)=" << cmdplab::format_sig12(report->j_spurious)
                << "  gap=" << cmdplab::format_sig12(report->gap)
                << "  L=" << cmdplab::format_sig12(report->saddle_value) << '\n';
      for (const auto& failure : report->failures)
        std::cout << "  violation: " << failure << '\n';
    }
    std::cout << "reports written to " << out_dir << '\n';
  }
  return (prop1.passed && prop2.passed) ? kExitOk : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cmdplab: exact oracles and primal-dual solvers for offline constrained tabular RL"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  int threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  bool json_only = false;
  double l2_reward = 4.0;

  app.add_option("--config", config_path, "path to a JSON config or CMDP file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for (n, seed) cells");
  app.add_flag("--json-only", json_only, "machine-readable stdout only");

  auto* solve = app.add_subcommand("solve", "solve the occupancy LP exactly");
  auto* run = app.add_subcommand("run", "run pdorl/pdocrl over an (n, seed) sweep");
  auto* counter = app.add_subcommand("counterexamples",
                                     "reproduce the spurious-saddle demonstrations");
  auto* validate = app.add_subcommand("validate", "check CMDP invariants");
  for (auto* sub : {solve, run, counter, validate}) sub->fallthrough();
  counter->add_option("--l2-reward", l2_reward,
                      "override the l2 self-loop reward (default 4; 2 shows the "
                      "broken variant)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed() || run->parsed() || validate->parsed()) {
      if (config_path.empty()) {
        std::cerr << "--config is required\n";
        return kExitConfig;
      }
    }
    if (solve->parsed()) return cmd_solve(config_path, out_dir, json_only);
    if (run->parsed()) return cmd_run(config_path, out_dir, threads, json_only);
    if (counter->parsed()) return cmd_counterexamples(out_dir, l2_reward, json_only);
    if (validate->parsed()) return cmd_validate(config_path, json_only);
  } catch (const cmdplab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cmdplab::AssumptionError& e) {
    std::cerr << "assumption violated: " << e.what() << '\n';
    return kExitAssumption;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitAssertion;
  }
  return kExitOk;
}
