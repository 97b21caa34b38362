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

#include "cmdplab/offline_data.hpp"

#include <cassert>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "cmdplab/exact_oracle.hpp"
#include "cmdplab/rng.hpp"

#include "json.hpp"

namespace cmdplab {

DataDistribution build_mixture_distribution(const Cmdp& cmdp,
                                            const Policy& anchor_policy, double beta,
                                            std::string anchor_name) {
  assert(beta >= 0.0 && beta <= 1.0);
  const Index nsa = cmdp.n_state_actions();
  Vector probs = Vector::Constant(nsa, (1.0 - beta) / double(nsa));
  if (beta > 0.0) {
    const OccupancyMeasure anchor = occupancy_of_policy(cmdp, anchor_policy);
    probs += beta * anchor.values;
  }
  return DataDistribution{std::move(probs), beta, std::move(anchor_name)};
}

OfflineDataset sample_dataset(const Cmdp& cmdp, const DataDistribution& dist, Index n,
                              std::uint64_t seed) {
  assert(n >= 1);
  OfflineDataset data;
  data.seed = seed;
  data.beta = dist.beta;
  data.anchor = dist.anchor;
  data.s.reserve(n);
  data.a.reserve(n);
  data.s_next.reserve(n);

  SplitMix64 rng(seed);
  for (Index j = 0; j < n; ++j) {
    const Index sa = sample_categorical(dist.probs, rng.next_double());
    const Index s = sa / cmdp.n_actions;
    const Index a = sa % cmdp.n_actions;
    const Index s_next =
        sample_categorical(cmdp.transition.row(sa).transpose(), rng.next_double());
    data.s.push_back(static_cast<std::int32_t>(s));
    data.a.push_back(static_cast<std::int32_t>(a));
    data.s_next.push_back(static_cast<std::int32_t>(s_next));
  }
  return data;
}

Vector empirical_sa_frequencies(const OfflineDataset& data, Index n_states,
                                Index n_actions) {
  Vector freq = Vector::Zero(n_states * n_actions);
  for (Index j = 0; j < data.size(); ++j)
    freq[sa_index(data.s[j], data.a[j], n_actions)] += 1.0;
  return freq / double(data.size());
}

std::vector<std::string> dataset_kernel_diagnostic(const Cmdp& cmdp,
                                                   const OfflineDataset& data) {
  const Index nsa = cmdp.n_state_actions();
  Matrix counts = Matrix::Zero(nsa, cmdp.n_states);
  Vector totals = Vector::Zero(nsa);
  for (Index j = 0; j < data.size(); ++j) {
    const Index sa = sa_index(data.s[j], data.a[j], cmdp.n_actions);
    counts(sa, data.s_next[j]) += 1.0;
    totals[sa] += 1.0;
  }

  std::vector<std::string> flags;
  for (Index sa = 0; sa < nsa; ++sa) {
    if (totals[sa] < 30) continue;  // too few visits for a frequency check
    for (Index sn = 0; sn < cmdp.n_states; ++sn) {
      const double p = cmdp.transition(sa, sn);
      const double freq = counts(sa, sn) / totals[sa];
      const double band = 4.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / totals[sa]);
      if (std::abs(freq - p) > band) {
        std::ostringstream os;
        os << "(s=" << sa / cmdp.n_actions << ",a=" << sa % cmdp.n_actions
           << ",s'=" << sn << "): freq " << freq << " vs p " << p << " (band "
           << band << ", visits " << totals[sa] << ")";
        flags.push_back(os.str());
      }
    }
  }
  return flags;
}

void write_dataset_csv(std::ostream& out, const OfflineDataset& data) {
  out << "s,a,s_next\n";
  for (Index j = 0; j < data.size(); ++j)
    out << data.s[j] << ',' << data.a[j] << ',' << data.s_next[j] << '\n';
}

OfflineDataset read_dataset_csv(std::istream& in) {
  OfflineDataset data;
  std::string line;
  if (!std::getline(in, line) || line.rfind("s,a,s_next", 0) != 0)
    throw std::runtime_error("dataset csv: missing 's,a,s_next' header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::int32_t vals[3];
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(row, cell, ',')) throw std::runtime_error("dataset csv: short row");
      vals[k] = static_cast<std::int32_t>(std::stol(cell));
    }
    data.s.push_back(vals[0]);
    data.a.push_back(vals[1]);
    data.s_next.push_back(vals[2]);
  }
  return data;
}

std::string dataset_sidecar_json(const OfflineDataset& data) {
  nlohmann::json j;
  j["seed"] = data.seed;
  j["n"] = data.size();
  j["beta"] = data.beta;
  j["anchor"] = data.anchor;
  return j.dump(2);
}

void apply_dataset_sidecar_json(const std::string& text, OfflineDataset& data) {
  const auto j = nlohmann::json::parse(text);
  data.seed = j.at("seed").get<std::uint64_t>();
  data.beta = j.at("beta").get<double>();
  data.anchor = j.at("anchor").get<std::string>();
  if (j.at("n").get<Index>() != data.size())
    throw std::runtime_error("dataset sidecar: n does not match csv row count");
}

}  // namespace cmdplab
