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
#include <iosfwd>
#include <string>
#include <vector>

#include "cmdplab/cmdp.hpp"

namespace cmdplab {

/// Explicit tabular data distribution over state-action pairs, kept alongside
/// its mixture provenance. Only oracle-side diagnostics consume it; the
/// solvers see datasets alone.
struct DataDistribution {
  Vector probs;        // length S*A, sums to 1
  double beta = 0.0;   // mixture weight on the anchor occupancy
  std::string anchor;  // descriptor of the anchor component
};

/// i.i.d. transition triples (s, a, s') with (s, a) ~ mu_D and s' ~ P(.|s,a).
struct OfflineDataset {
  std::vector<std::int32_t> s;
  std::vector<std::int32_t> a;
  std::vector<std::int32_t> s_next;
  std::uint64_t seed = 0;
  double beta = 0.0;
  std::string anchor;

  Index size() const { return static_cast<Index>(s.size()); }
};

/// mu_D = beta * mu^{anchor} + (1 - beta) * uniform over S x A. With the
/// anchor set to an optimal policy this caps the concentrability coefficient
/// at 1/beta while keeping full support for beta < 1.
DataDistribution build_mixture_distribution(const Cmdp& cmdp, const Policy& anchor_policy,
                                            double beta, std::string anchor_name = "anchor");

/// Draws n i.i.d. triples with the seeded SplitMix64 stream; the dataset is a
/// pure function of (cmdp, dist, n, seed).
OfflineDataset sample_dataset(const Cmdp& cmdp, const DataDistribution& dist, Index n,
                              std::uint64_t seed);

/// Empirical distribution of (s, a) pairs in the dataset, length S*A.
Vector empirical_sa_frequencies(const OfflineDataset& data, Index n_states, Index n_actions);

/// Statistical sampling check: for each (s, a) cell with enough visits, flags
/// next-state frequencies further than 4 * sqrt(p(1-p)/count) from P(s'|s,a).
/// Returns human-readable flags; an empty result means nothing looked off.
/// This reports, it never fails.
std::vector<std::string> dataset_kernel_diagnostic(const Cmdp& cmdp,
                                                   const OfflineDataset& data);

/// CSV with header "s,a,s_next", one triple per row.
void write_dataset_csv(std::ostream& out, const OfflineDataset& data);
OfflineDataset read_dataset_csv(std::istream& in);

/// JSON sidecar {seed, n, beta, anchor} carried next to the CSV.
std::string dataset_sidecar_json(const OfflineDataset& data);
void apply_dataset_sidecar_json(const std::string& text, OfflineDataset& data);

}  // namespace cmdplab
