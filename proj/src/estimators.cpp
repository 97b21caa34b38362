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

#include "cmdplab/estimators.hpp"

#include <cassert>

namespace cmdplab {

namespace {

constexpr Index kPairwiseBlock = 64;

// Mixed action values q(s, pi) = sum_a pi(a|s) q(s,a), one entry per state.
Vector mixed_q(const Policy& policy, const Vector& q) {
  const Index S = policy.n_states();
  const Index A = policy.n_actions();
  Vector out(S);
  for (Index s = 0; s < S; ++s)
    out[s] = policy.probs.row(s).dot(q.segment(s * A, A).transpose());
  return out;
}

// r_0 + sum_i lambda_i r_i evaluated on each dataset point.
Vector mixed_reward_on_data(const SolverProblem& problem, const OfflineDataset& data,
                            const Vector& lambda) {
  assert(lambda.size() == 0 || lambda.size() == problem.n_constraints());
  const Index n = data.size();
  Vector r(n);
  for (Index j = 0; j < n; ++j) {
    const Index sa = sa_index(data.s[j], data.a[j], problem.n_actions);
    double val = problem.rewards[0][sa];
    for (Index i = 0; i < lambda.size(); ++i)
      val += lambda[i] * problem.rewards[static_cast<std::size_t>(i + 1)][sa];
    r[j] = val;
  }
  return r;
}

}  // namespace

double pairwise_sum(const double* x, Index n) {
  if (n <= kPairwiseBlock) {
    double acc = 0.0;
    for (Index k = 0; k < n; ++k) acc += x[k];
    return acc;
  }
  const Index half = n / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

double pairwise_dot(const double* x, const double* y, Index n) {
  if (n <= kPairwiseBlock) {
    double acc = 0.0;
    for (Index k = 0; k < n; ++k) acc += x[k] * y[k];
    return acc;
  }
  const Index half = n / 2;
  return pairwise_dot(x, y, half) + pairwise_dot(x + half, y + half, n - half);
}

double estimate_L_wv(const SolverProblem& problem, const OfflineDataset& data,
                     const Vector& w, const Vector& v) {
  const Index n = data.size();
  assert(w.size() == n && v.size() == problem.n_states);
  Vector terms(n);
  for (Index j = 0; j < n; ++j) {
    const Index sa = sa_index(data.s[j], data.a[j], problem.n_actions);
    terms[j] = problem.rewards[0][sa] + problem.gamma * v[data.s_next[j]] - v[data.s[j]];
  }
  return (1.0 - problem.gamma) * v[problem.initial_state] +
         pairwise_dot(w.data(), terms.data(), n) / double(n);
}

double estimate_L_wpq(const SolverProblem& problem, const OfflineDataset& data,
                      const Vector& w, const Policy& policy, const Vector& q) {
  return estimate_L_constrained(problem, data, w, policy, q, Vector());
}

double estimate_L_constrained(const SolverProblem& problem, const OfflineDataset& data,
                              const Vector& w, const Policy& policy, const Vector& q,
                              const Vector& lambda) {
  const Index n = data.size();
  assert(w.size() == n);
  const Vector h = td_coefficients(problem, data, policy, q, lambda);
  const Vector qpi = mixed_q(policy, q);
  double value = (1.0 - problem.gamma) * qpi[problem.initial_state] +
                 pairwise_dot(w.data(), h.data(), n) / double(n);
  for (Index i = 0; i < lambda.size(); ++i)
    value -= lambda[i] * problem.thresholds[i];
  return value;
}

Vector td_coefficients(const SolverProblem& problem, const OfflineDataset& data,
                       const Policy& policy, const Vector& q, const Vector& lambda) {
  const Index n = data.size();
  const Vector qpi = mixed_q(policy, q);
  Vector h = mixed_reward_on_data(problem, data, lambda);
  for (Index j = 0; j < n; ++j) {
    const Index sa = sa_index(data.s[j], data.a[j], problem.n_actions);
    h[j] += problem.gamma * qpi[data.s_next[j]] - q[sa];
  }
  return h;
}

Vector lagrangian_gradient_wrt_w(const SolverProblem& problem, const OfflineDataset& data,
                                 const Policy& policy, const Vector& q,
                                 const Vector& lambda) {
  return td_coefficients(problem, data, policy, q, lambda) / double(data.size());
}

Vector weights_from_table(const OfflineDataset& data, const Vector& table,
                          Index n_actions) {
  Vector w(data.size());
  for (Index j = 0; j < data.size(); ++j)
    w[j] = table[sa_index(data.s[j], data.a[j], n_actions)];
  return w;
}

Vector weight_table_from_datapoints(const OfflineDataset& data, const Vector& w,
                                    Index n_states, Index n_actions) {
  Vector sums = Vector::Zero(n_states * n_actions);
  Vector counts = Vector::Zero(n_states * n_actions);
  for (Index j = 0; j < data.size(); ++j) {
    const Index sa = sa_index(data.s[j], data.a[j], n_actions);
    sums[sa] += w[j];
    counts[sa] += 1.0;
  }
  for (Index k = 0; k < sums.size(); ++k)
    if (counts[k] > 0.0) sums[k] /= counts[k];
  return sums;
}

}  // namespace cmdplab
