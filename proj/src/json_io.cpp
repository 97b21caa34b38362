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

#include "cmdplab/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cmdplab {

using nlohmann::json;

namespace {

json sa_table_to_json(const Vector& table, Index n_states, Index n_actions) {
  json rows = json::array();
  for (Index s = 0; s < n_states; ++s) {
    json row = json::array();
    for (Index a = 0; a < n_actions; ++a) row.push_back(table[sa_index(s, a, n_actions)]);
    rows.push_back(std::move(row));
  }
  return rows;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string cmdp_to_json(const Cmdp& cmdp) {
  json j;
  j["n_states"] = cmdp.n_states;
  j["n_actions"] = cmdp.n_actions;
  j["gamma"] = cmdp.gamma;
  j["initial_state"] = cmdp.initial_state;

  json transition = json::array();
  for (Index s = 0; s < cmdp.n_states; ++s) {
    json per_action = json::array();
    for (Index a = 0; a < cmdp.n_actions; ++a) {
      json row = json::array();
      for (Index sn = 0; sn < cmdp.n_states; ++sn)
        row.push_back(cmdp.transition(sa_index(s, a, cmdp.n_actions), sn));
      per_action.push_back(std::move(row));
    }
    transition.push_back(std::move(per_action));
  }
  j["transition"] = std::move(transition);

  json rewards = json::array();
  for (const Vector& r : cmdp.rewards)
    rewards.push_back(sa_table_to_json(r, cmdp.n_states, cmdp.n_actions));
  j["rewards"] = std::move(rewards);

  j["thresholds"] = json::array();
  for (Index i = 0; i < cmdp.thresholds.size(); ++i)
    j["thresholds"].push_back(cmdp.thresholds[i]);
  return j.dump(2);
}

Cmdp cmdp_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cmdp json: ") + e.what());
  }
  try {
    const Index S = j.at("n_states").get<Index>();
    const Index A = j.at("n_actions").get<Index>();
    const double gamma = j.at("gamma").get<double>();
    const Index s0 = j.at("initial_state").get<Index>();
    if (S <= 0 || A <= 0) throw ConfigError("cmdp json: n_states/n_actions must be positive");

    const auto& jt = j.at("transition");
    if (static_cast<Index>(jt.size()) != S)
      throw ConfigError("cmdp json: field 'transition' must have n_states entries");
    Matrix transition(S * A, S);
    for (Index s = 0; s < S; ++s) {
      if (static_cast<Index>(jt.at(s).size()) != A)
        throw ConfigError("cmdp json: field 'transition' row has wrong action count");
      for (Index a = 0; a < A; ++a) {
        const auto& row = jt.at(s).at(a);
        if (static_cast<Index>(row.size()) != S)
          throw ConfigError("cmdp json: field 'transition' row has wrong state count");
        for (Index sn = 0; sn < S; ++sn)
          transition(sa_index(s, a, A), sn) = row.at(sn).get<double>();
      }
    }

    const auto& jr = j.at("rewards");
    if (jr.empty()) throw ConfigError("cmdp json: field 'rewards' must be nonempty");
    std::vector<Vector> rewards;
    for (const auto& jtable : jr) {
      if (static_cast<Index>(jtable.size()) != S)
        throw ConfigError("cmdp json: field 'rewards' table has wrong state count");
      Vector r(S * A);
      for (Index s = 0; s < S; ++s) {
        if (static_cast<Index>(jtable.at(s).size()) != A)
          throw ConfigError("cmdp json: field 'rewards' row has wrong action count");
        for (Index a = 0; a < A; ++a)
          r[sa_index(s, a, A)] = jtable.at(s).at(a).get<double>();
      }
      rewards.push_back(std::move(r));
    }

    const auto& jth = j.at("thresholds");
    Vector thresholds(jth.size());
    for (std::size_t i = 0; i < jth.size(); ++i) thresholds[i] = jth.at(i).get<double>();

    return make_cmdp(S, A, std::move(transition), std::move(rewards), gamma, s0,
                     std::move(thresholds));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cmdp json: ") + e.what());
  }
}

Cmdp load_cmdp_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open cmdp file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return cmdp_from_json(buffer.str());
}

void save_cmdp_file(const std::string& path, const Cmdp& cmdp) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write cmdp file: " + path);
  out << cmdp_to_json(cmdp) << '\n';
}

std::string lp_solution_to_json(const Cmdp& cmdp, const LpSolution& solution,
                                std::optional<double> phi) {
  json j;
  j["feasible"] = solution.feasible;
  if (solution.feasible) {
    j["objective"] = solution.objective;
    j["mu_star"] = sa_table_to_json(solution.mu_star.values, cmdp.n_states,
                                    cmdp.n_actions);
    j["policy_star"] = matrix_to_json(solution.policy_star.probs);
    j["dual_v"] = json::array();
    for (Index s = 0; s < solution.dual_v.size(); ++s)
      j["dual_v"].push_back(solution.dual_v[s]);
  }
  j["lambda_star"] = json::array();
  for (Index i = 0; i < solution.dual_lambda.size(); ++i)
    j["lambda_star"].push_back(solution.dual_lambda[i]);
  if (!solution.feasible && solution.farkas_certificate.size() > 0) {
    j["farkas_certificate"] = json::array();
    for (Index i = 0; i < solution.farkas_certificate.size(); ++i)
      j["farkas_certificate"].push_back(solution.farkas_certificate[i]);
  }
  if (phi.has_value()) j["phi"] = *phi;
  return j.dump(2);
}

std::string demo_report_to_json(const DemoReport& report) {
  json j;
  j["name"] = report.name;
  j["passed"] = report.passed;
  j["failures"] = report.failures;
  j["j_star"] = report.j_star;
  j["j_spurious"] = report.j_spurious;
  j["gap"] = report.gap;
  j["saddle_value"] = report.saddle_value;
  j["worst_violation"] = report.worst_violation;
  j["spurious_certified"] = report.spurious_certified;
  j["optimal_certified"] = report.optimal_certified;
  return j.dump(2);
}

std::string realizability_report_to_json(const RealizabilityReport& report) {
  json j;
  j["passed"] = report.passed;
  j["failures"] = report.failures;
  j["prop1_spurious_rejected"] = report.prop1_spurious_rejected;
  j["prop2_spurious_rejected"] = report.prop2_spurious_rejected;
  j["n_mdps"] = report.n_mdps;
  j["n_saddles_checked"] = report.n_saddles_checked;
  j["n_bad_extractions"] = report.n_bad_extractions;
  j["worst_gap"] = report.worst_gap;
  return j.dump(2);
}

}  // namespace cmdplab
