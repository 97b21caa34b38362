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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cmdplab/counterexamples.hpp"
#include "cmdplab/harness.hpp"

using namespace cmdplab;

namespace {

std::string figure1_config(const std::string& cmdp_path, const char* algorithm,
                           const char* extra_solver = "") {
  std::ostringstream os;
  os << R"({"cmdp": {"file": ")" << cmdp_path << R"("},
           "data": {"beta": 0.5, "anchor": "optimal", "n": [200, 400], "seeds": [1, 2]},
           "solver": {"algorithm": ")"
     << algorithm << R"(")" << extra_solver << R"(}})";
  return os.str();
}

struct TempCmdpFile {
  std::string path;
  explicit TempCmdpFile(const Cmdp& cmdp) {
    path = (std::filesystem::temp_directory_path() / "cmdplab_test_cmdp.json").string();
    save_cmdp_file(path, cmdp);
  }
  ~TempCmdpFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("cmdp json round trip") {
  const Cmdp original = build_figure1_mdp();
  const Cmdp loaded = cmdp_from_json(cmdp_to_json(original));
  CHECK(loaded.n_states == original.n_states);
  CHECK(loaded.n_actions == original.n_actions);
  CHECK(loaded.gamma == original.gamma);
  CHECK(loaded.initial_state == original.initial_state);
  CHECK((loaded.transition - original.transition).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.rewards[0] - original.rewards[0]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cmdp json parse errors name the field") {
  CHECK_THROWS_WITH_AS(cmdp_from_json("{\"n_states\": 2}"),
                       doctest::Contains("n_actions"), ConfigError);
  CHECK_THROWS_AS(cmdp_from_json("not json at all"), ConfigError);
  // Wrong-shaped transition array.
  const std::string bad = R"({"n_states": 2, "n_actions": 1, "gamma": 0.5,
    "initial_state": 0, "transition": [[[1.0, 0.0]]],
    "rewards": [[[0.0], [0.0]]], "thresholds": []})";
  CHECK_THROWS_WITH_AS(cmdp_from_json(bad), doctest::Contains("transition"),
                       ConfigError);
}

TEST_CASE("experiment config validation catches the documented errors") {
  CHECK_THROWS_AS(experiment_config_from_json("{}"), ConfigError);
  CHECK_THROWS_WITH_AS(
      experiment_config_from_json(
          R"({"cmdp": {"file": "x"}, "data": {"n": [], "seeds": [1]},
              "solver": {"algorithm": "pdorl"}})"),
      doctest::Contains("data.n"), ConfigError);
  CHECK_THROWS_WITH_AS(
      experiment_config_from_json(
          R"({"cmdp": {"file": "x"}, "data": {"n": [0], "seeds": [1]},
              "solver": {"algorithm": "pdorl"}})"),
      doctest::Contains("every n"), ConfigError);
  CHECK_THROWS_WITH_AS(
      experiment_config_from_json(
          R"({"cmdp": {"file": "x"}, "data": {"n": [10], "seeds": [1]},
              "solver": {"algorithm": "sgd"}})"),
      doctest::Contains("algorithm"), ConfigError);
  CHECK_THROWS_WITH_AS(
      experiment_config_from_json(
          R"({"cmdp": {}, "data": {"n": [10], "seeds": [1]},
              "solver": {"algorithm": "pdorl"}})"),
      doctest::Contains("cmdp"), ConfigError);
}

TEST_CASE("pdocrl on a constraint-free cmdp is a config error") {
  const TempCmdpFile file(build_figure1_mdp());
  const ExperimentConfig config =
      experiment_config_from_json(figure1_config(file.path, "pdocrl"));
  CHECK_THROWS_AS(run_experiment(config, 1), ConfigError);
}

TEST_CASE("run_experiment emits one deterministic row per cell") {
  const TempCmdpFile file(build_figure1_mdp());
  const ExperimentConfig config =
      experiment_config_from_json(figure1_config(file.path, "pdorl"));
  const ExperimentResult first = run_experiment(config, 2);
  const ExperimentResult second = run_experiment(config, 1);

  CHECK(first.header == "algo,n,seed,T,J0_mix,J0_star,subopt,violation_max,C_star,phi,wall_ms");
  REQUIRE(first.rows.size() == 4);  // n in {200,400} x seeds {1,2}
  REQUIRE(second.rows.size() == 4);
  for (std::size_t k = 0; k < first.rows.size(); ++k) {
    // Identical up to the trailing wall_ms column.
    const auto strip = [](const std::string& row) {
      return row.substr(0, row.rfind(','));
    };
    CHECK(strip(first.rows[k]) == strip(second.rows[k]));
    CHECK(first.rows[k].rfind("pdorl,", 0) == 0);
  }
  CHECK(first.c_star == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("infeasible instances abort pdocrl with an assumption error") {
  Cmdp cmdp = build_figure1_mdp();
  cmdp.rewards.push_back(Vector::Zero(10));  // reward 0 cannot reach tau = 0.9
  cmdp.thresholds = Vector::Constant(1, 0.9);
  const TempCmdpFile file(cmdp);
  const ExperimentConfig config =
      experiment_config_from_json(figure1_config(file.path, "pdocrl"));
  CHECK_THROWS_AS(run_experiment(config, 1), AssumptionError);
}

TEST_CASE("lp solution json carries the documented fields") {
  const Cmdp cmdp = build_figure1_mdp();
  const LpSolution lp = solve_constrained_lp(cmdp);
  const std::string text = lp_solution_to_json(cmdp, lp, std::nullopt);
  CHECK(text.find("\"objective\": 0.5") != std::string::npos);
  CHECK(text.find("\"lambda_star\": []") != std::string::npos);
  CHECK(text.find("\"mu_star\"") != std::string::npos);
  CHECK(text.find("\"policy_star\"") != std::string::npos);
}

TEST_CASE("generator configs resolve to feasible instances") {
  const std::string text = R"({
    "cmdp": {"generator": {"n_states": 4, "n_actions": 2, "n_constraints": 1,
                           "gamma": 0.8, "seed": 5, "min_slater": 0.1,
                           "require_binding": true}},
    "data": {"beta": 0.5, "anchor": "optimal", "n": [300], "seeds": [1]},
    "solver": {"algorithm": "pdocrl"}})";
  const ExperimentConfig config = experiment_config_from_json(text);
  const Cmdp cmdp = resolve_cmdp(config);
  CHECK(cmdp.n_constraints() == 1);
  CHECK(slater_margin(cmdp) >= 0.1);
  const ExperimentResult result = run_experiment(config, 1);
  REQUIRE(result.rows.size() == 1);
  CHECK(result.rows[0].rfind("pdocrl,300,1,300,", 0) == 0);
  CHECK(result.phi >= 0.1);
}

TEST_CASE("format_sig12 prints 12 significant digits") {
  CHECK(format_sig12(0.5) == "0.5");
  CHECK(format_sig12(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig12(13.0 / 16.0) == "0.8125");
}
