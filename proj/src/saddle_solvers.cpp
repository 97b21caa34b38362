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

#include "cmdplab/saddle_solvers.hpp"

#include <cassert>
#include <cmath>
#include <ostream>

#include "cmdplab/exact_oracle.hpp"
#include "cmdplab/rng.hpp"

namespace cmdplab {

namespace {

constexpr Index kReservoirSize = 32;

// Softmax rows of accumulated logits with per-row max subtraction. Starting
// from zero logits and adding alpha * Q_t each round is exactly the
// mirror-descent recursion from the uniform policy, kept in a form that
// cannot underflow however large alpha * sum Q grows.
Policy policy_from_logits(const Matrix& logits) {
  Matrix probs(logits.rows(), logits.cols());
  for (Index s = 0; s < logits.rows(); ++s) {
    const double shift = logits.row(s).maxCoeff();
    Eigen::ArrayXd expo = (logits.row(s).array() - shift).exp();
    probs.row(s) = (expo / expo.sum()).matrix();
  }
  return Policy{std::move(probs)};
}

// Sufficient statistics of the dataset for the primal-dual loop. With the
// weight iterate constant within (s,a) cells, every quantity the loop needs
// reduces to the empirical (s,a,s') histogram, making each iteration
// O(S^2 A) regardless of n.
struct DataHistogram {
  Index n = 0;
  Vector count;        // visits per (s,a) cell, length S*A
  Matrix next_counts;  // (S*A) x S transition counts

  DataHistogram(const SolverProblem& problem, const OfflineDataset& data) {
    n = data.size();
    const Index nsa = problem.n_states * problem.n_actions;
    count = Vector::Zero(nsa);
    next_counts = Matrix::Zero(nsa, problem.n_states);
    for (Index j = 0; j < n; ++j) {
      const Index sa = sa_index(data.s[j], data.a[j], problem.n_actions);
      count[sa] += 1.0;
      next_counts(sa, data.s_next[j]) += 1.0;
    }
  }
};

// Per-datapoint view of a cell-constant weight table, for snapshots.
Vector expand_weights(const Vector& w_table, const SolverProblem& problem,
                      const OfflineDataset& data) {
  Vector w(data.size());
  for (Index j = 0; j < data.size(); ++j)
    w[j] = w_table[sa_index(data.s[j], data.a[j], problem.n_actions)];
  return w;
}

SolverResult run_primal_dual(const SolverProblem& problem, const OfflineDataset& data,
                             const SolverClasses& classes, const SolverConfig& config,
                             const ReturnsEvaluator& evaluator, bool constrained) {
  const Index n = data.size();
  const Index S = problem.n_states;
  const Index A = problem.n_actions;
  const Index nsa = S * A;
  const Index I = constrained ? problem.n_constraints() : 0;
  const long T = config.iterations;
  const double gamma = problem.gamma;
  const double cap_w = classes.w_box.upper_bound;
  const double cap_q = classes.q_box.upper_bound;
  assert(T >= 1 && n >= 1);
  assert(!constrained || I >= 1);

  const DataHistogram hist(problem, data);

  // The w iterate lives in the function-class box: one coordinate per (s,a)
  // cell, clamped to [0, cap_w]. Stepping each cell by eta times the cell-mean
  // td coefficient is the Euclidean projection of the per-datapoint ascent
  // step onto weights that are functions of (s,a); see the ledger note on why
  // per-datapoint coordinates are not used.
  Matrix logits = Matrix::Zero(S, A);  // pi_0 uniform
  Vector w_table = Vector::Constant(nsa, cap_w / 2.0);
  Vector q = Vector::Zero(nsa);         // Q_0
  Vector lambda = Vector::Zero(I);      // lambda_0
  Vector h_cell = Vector::Zero(nsa);    // cell-mean td coefficients, previous round
  Vector qpi(S), inflow(S), coef(nsa), r_mixed(nsa);

  SolverResult result;
  result.iterations = T;
  Vector return_sums;
  SplitMix64 reservoir_rng(config.seed ^ 0x5eed5eedULL);
  if (config.record_trace) result.mixture.reserve(T);

  for (long t = 1; t <= T; ++t) {
    // w-player: one projected ascent step on the previous round's objective.
    if (t >= 2) {
      w_table += config.eta * h_cell;
      w_table = w_table.cwiseMax(0.0).cwiseMin(cap_w);
    }

    // pi-player: mirror-descent step with Q_{t-1}.
    for (Index s = 0; s < S; ++s)
      logits.row(s) += config.alpha * q.segment(s * A, A).transpose();
    const Policy policy = policy_from_logits(logits);

    // Q-player: greedy box vertex of the affine-in-Q objective. Coefficient of
    // Q(s,a) is (1-gamma) 1[s=s_0] pi(a|s_0)
    //   + (1/n) sum_j (gamma 1[s=s'_j] pi(a|s) - 1[(s,a)=(s_j,a_j)]) w_j.
    for (Index s = 0; s < S; ++s) inflow[s] = hist.next_counts.col(s).dot(w_table);
    for (Index s = 0; s < S; ++s) {
      const double scale = gamma * inflow[s] / double(n);
      for (Index a = 0; a < A; ++a) {
        const Index k = s * A + a;
        coef[k] = scale * policy.probs(s, a) - w_table[k] * hist.count[k] / double(n);
      }
    }
    for (Index a = 0; a < A; ++a)
      coef[problem.initial_state * A + a] +=
          (1.0 - gamma) * policy.probs(problem.initial_state, a);
    for (Index k = 0; k < nsa; ++k) q[k] = coef[k] < 0.0 ? cap_q : 0.0;

    // lambda-player: greedy vertex of B * simplex against the data term.
    if (constrained) {
      Vector data_term(I);
      for (Index i = 0; i < I; ++i) {
        const Vector& r = problem.rewards[static_cast<std::size_t>(i + 1)];
        data_term[i] =
            w_table.cwiseProduct(hist.count).dot(r) / double(n);
      }
      lambda = lambda_best_response(data_term, problem.thresholds, config.dual_bound);
    }

    // Refresh the cell-mean td coefficients (feed the next w step) and the
    // estimator value.
    for (Index s = 0; s < S; ++s)
      qpi[s] = policy.probs.row(s).dot(q.segment(s * A, A).transpose());
    r_mixed = problem.rewards[0];
    for (Index i = 0; i < I; ++i)
      if (lambda[i] != 0.0)
        r_mixed += lambda[i] * problem.rewards[static_cast<std::size_t>(i + 1)];
    double data_sum = 0.0;  // sum_j w_j h_j
    for (Index k = 0; k < nsa; ++k) {
      if (hist.count[k] == 0.0) {
        h_cell[k] = 0.0;
        continue;
      }
      const double mean_next_q = hist.next_counts.row(k).dot(qpi) / hist.count[k];
      h_cell[k] = r_mixed[k] + gamma * mean_next_q - q[k];
      data_sum += w_table[k] * hist.count[k] * h_cell[k];
    }

    double l_hat = (1.0 - gamma) * qpi[problem.initial_state] + data_sum / double(n);
    for (Index i = 0; i < I; ++i) l_hat -= lambda[i] * problem.thresholds[i];
    if (!std::isfinite(l_hat))
      throw SolverAbort("primal-dual loop: estimator value became non-finite at t=" +
                        std::to_string(t));

    Vector returns;
    if (evaluator) {
      returns = evaluator(policy);
      if (return_sums.size() == 0) return_sums = Vector::Zero(returns.size());
      return_sums += returns;
    }
    if (constrained) {
      if (result.lambda_avg.size() == 0) result.lambda_avg = Vector::Zero(I);
      result.lambda_avg += lambda;
    }

    if (config.record_trace) {
      double w_inf = 0.0;
      for (Index k = 0; k < nsa; ++k)
        if (hist.count[k] > 0.0) w_inf = std::max(w_inf, w_table[k]);
      result.mixture.push_back(policy);
      result.trace.push_back(TraceRow{t, l_hat, returns, lambda, w_inf});
    }
    if (config.record_iterates)
      result.iterates.push_back(
          IterateSnapshot{policy, q, expand_weights(w_table, problem, data), lambda});

    // Reservoir of iterates for spot checks when the full list is not kept.
    if (static_cast<Index>(result.sampled_policies.size()) < kReservoirSize) {
      result.sampled_policies.push_back(policy);
    } else {
      const std::uint64_t slot = reservoir_rng.next_below(static_cast<std::uint64_t>(t));
      if (slot < kReservoirSize) result.sampled_policies[slot] = policy;
    }
  }

  if (return_sums.size() > 0) result.mixture_returns = return_sums / double(T);
  if (result.lambda_avg.size() > 0) result.lambda_avg /= double(T);
  return result;
}

}  // namespace

OgdOracleState make_ogd_state(const WeightClassBox& box, double step_size,
                              double gradient_bound) {
  return OgdOracleState{Vector::Constant(box.dimension, box.upper_bound / 2.0),
                        step_size, gradient_bound, box.upper_bound};
}

OgdOracleState ogd_step(const OgdOracleState& state, const Vector& gradient) {
  OgdOracleState next = state;
  next.current = (state.current + state.step_size * gradient)
                     .cwiseMax(0.0)
                     .cwiseMin(state.box_upper);
  return next;
}

Policy mirror_descent_update(const Policy& policy, const Vector& q, double alpha) {
  const Index S = policy.n_states();
  const Index A = policy.n_actions();
  Matrix probs(S, A);
  for (Index s = 0; s < S; ++s) {
    const auto row = q.segment(s * A, A);
    const double shift = row.maxCoeff();
    Eigen::ArrayXd factor = (alpha * (row.array() - shift)).exp();
    Eigen::ArrayXd next = policy.probs.row(s).transpose().array() * factor;
    probs.row(s) = (next / next.sum()).matrix().transpose();
  }
  return Policy{std::move(probs)};
}

Vector lambda_best_response(const Vector& data_term_per_constraint,
                            const Vector& thresholds, double dual_bound) {
  const Index I = data_term_per_constraint.size();
  assert(thresholds.size() == I && dual_bound > 0.0);
  Vector lambda = Vector::Zero(I);
  Index best = -1;
  double best_c = 0.0;
  for (Index i = 0; i < I; ++i) {
    const double c = data_term_per_constraint[i] - thresholds[i];
    if (c < 0.0 && (best < 0 || c < best_c)) {  // strict: ties keep lowest index
      best = i;
      best_c = c;
    }
  }
  if (best >= 0) lambda[best] = dual_bound;
  return lambda;
}

SolverConfig SolverConfig::defaults(long iterations, double gamma, Index n_actions,
                                    double weight_cap,
                                    std::optional<double> slater_margin_phi) {
  SolverConfig config;
  config.iterations = iterations;
  const double sqrt_T = std::sqrt(double(iterations));
  config.alpha = (1.0 - gamma) * std::sqrt(std::log(double(n_actions))) / sqrt_T;
  const double b_prime = 1.0 + 1.0 / (1.0 - gamma);
  config.eta = weight_cap / (b_prime * sqrt_T);
  if (slater_margin_phi.has_value())
    config.dual_bound = 1.0 + 1.0 / *slater_margin_phi;
  return config;
}

SolverResult run_pdorl(const SolverProblem& problem, const OfflineDataset& data,
                       const SolverClasses& classes, const SolverConfig& config,
                       const ReturnsEvaluator& evaluator) {
  return run_primal_dual(problem, data, classes, config, evaluator, false);
}

SolverResult run_pdocrl(const SolverProblem& problem, const OfflineDataset& data,
                        const SolverClasses& classes, const SolverConfig& config,
                        const ReturnsEvaluator& evaluator) {
  if (problem.n_constraints() < 1)
    throw std::invalid_argument("run_pdocrl: needs at least one constraint");
  if (!(config.dual_bound > 0.0))
    throw std::invalid_argument("run_pdocrl: dual_bound must be positive");
  return run_primal_dual(problem, data, classes, config, evaluator, true);
}

Vector evaluate_mixture(const Cmdp& cmdp, const std::vector<Policy>& mixture) {
  assert(!mixture.empty());
  Vector sums = Vector::Zero(cmdp.n_constraints() + 1);
  for (const Policy& policy : mixture)
    for (Index i = 0; i <= cmdp.n_constraints(); ++i)
      sums[i] += evaluate_policy(cmdp, policy, i).scalar_return;
  return sums / double(mixture.size());
}

void write_trace_csv(std::ostream& out, const SolverResult& result,
                     Index n_constraints) {
  out << "t,L_hat";
  for (Index i = 0; i <= n_constraints; ++i) out << ",J" << i << "_exact";
  for (Index i = 1; i <= n_constraints; ++i) out << ",lambda_" << i;
  out << ",w_norm_inf\n";
  char buf[32];
  auto fmt = [&buf](double x) {
    snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
  };
  for (const TraceRow& row : result.trace) {
    out << row.t << ',' << fmt(row.l_hat);
    for (Index i = 0; i <= n_constraints; ++i)
      out << ',' << (row.returns.size() > i ? fmt(row.returns[i]) : "nan");
    for (Index i = 0; i < n_constraints; ++i)
      out << ',' << (row.lambda.size() > i ? fmt(row.lambda[i]) : "0");
    out << ',' << fmt(row.w_inf) << '\n';
  }
}

}  // namespace cmdplab
