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

#include "cmdplab/cmdp.hpp"

#include <cassert>
#include <cmath>
#include <sstream>

namespace cmdplab {

namespace {

// Renormalizes rows whose sum is within kRowSumTol of 1; leaves others alone.
void renormalize_rows(Matrix& rows) {
  for (Index r = 0; r < rows.rows(); ++r) {
    const double sum = rows.row(r).sum();
    if (sum > 0.0 && std::abs(sum - 1.0) <= kRowSumTol) rows.row(r) /= sum;
  }
}

}  // namespace

Cmdp make_cmdp(Index n_states, Index n_actions, Matrix transition,
               std::vector<Vector> rewards, double gamma, Index initial_state,
               Vector thresholds) {
  Cmdp cmdp;
  cmdp.n_states = n_states;
  cmdp.n_actions = n_actions;
  cmdp.transition = std::move(transition);
  cmdp.rewards = std::move(rewards);
  cmdp.gamma = gamma;
  cmdp.initial_state = initial_state;
  cmdp.thresholds = std::move(thresholds);
  renormalize_rows(cmdp.transition);
  return cmdp;
}

std::vector<ValidationIssue> validate_cmdp(const Cmdp& cmdp) {
  std::vector<ValidationIssue> issues;
  auto field = [](const char* name, Index s, Index a) {
    std::ostringstream os;
    os << name << "[s=" << s << ",a=" << a << "]";
    return os.str();
  };

  if (cmdp.n_states <= 0) issues.push_back({"n_states", "must be positive"});
  if (cmdp.n_actions <= 0) issues.push_back({"n_actions", "must be positive"});
  if (!(cmdp.gamma > 0.0 && cmdp.gamma < 1.0)) {
    std::ostringstream os;
    os << "gamma = " << cmdp.gamma << " must lie strictly inside (0, 1)";
    issues.push_back({"gamma", os.str()});
  }
  if (cmdp.initial_state < 0 || cmdp.initial_state >= cmdp.n_states)
    issues.push_back({"initial_state", "out of range"});

  if (cmdp.transition.rows() != cmdp.n_state_actions() ||
      cmdp.transition.cols() != cmdp.n_states) {
    issues.push_back({"transition", "wrong shape"});
    return issues;  // shape errors make element checks meaningless
  }

  for (Index s = 0; s < cmdp.n_states; ++s) {
    for (Index a = 0; a < cmdp.n_actions; ++a) {
      const auto row = cmdp.transition.row(sa_index(s, a, cmdp.n_actions));
      if ((row.array() < 0.0).any()) {
        issues.push_back({field("transition", s, a), "negative probability"});
      }
      const double sum = row.sum();
      if (std::abs(sum - 1.0) > kRowSumTol) {
        std::ostringstream os;
        os << "row sums to " << sum << " (must be 1 within " << kRowSumTol << ")";
        issues.push_back({field("transition", s, a), os.str()});
      }
    }
  }

  if (cmdp.rewards.empty()) {
    issues.push_back({"rewards", "at least the primary reward is required"});
  }
  for (std::size_t i = 0; i < cmdp.rewards.size(); ++i) {
    const Vector& r = cmdp.rewards[i];
    if (r.size() != cmdp.n_state_actions()) {
      std::ostringstream os;
      os << "rewards[" << i << "]";
      issues.push_back({os.str(), "wrong length"});
      continue;
    }
    // Constraint rewards must stay in [0, 1] (their returns compare against
    // thresholds on that scale); the primary reward only needs to be a finite
    // nonnegative value so that analysis MDPs with larger payoffs validate.
    for (Index s = 0; s < cmdp.n_states; ++s) {
      for (Index a = 0; a < cmdp.n_actions; ++a) {
        const double val = r[sa_index(s, a, cmdp.n_actions)];
        const bool ok = i == 0 ? (std::isfinite(val) && val >= 0.0)
                               : (val >= 0.0 && val <= 1.0);
        if (!ok) {
          std::ostringstream os;
          os << "rewards[" << i << "][s=" << s << ",a=" << a << "]";
          issues.push_back({os.str(), i == 0 ? "value must be finite and nonnegative"
                                             : "value outside [0, 1]"});
        }
      }
    }
  }

  if (!cmdp.rewards.empty() &&
      cmdp.thresholds.size() + 1 != static_cast<Index>(cmdp.rewards.size())) {
    issues.push_back(
        {"thresholds", "length must equal the number of constraint rewards"});
  }
  for (Index i = 0; i < cmdp.thresholds.size(); ++i) {
    if (!(cmdp.thresholds[i] >= 0.0 && cmdp.thresholds[i] <= 1.0)) {
      std::ostringstream os;
      os << "thresholds[" << i << "]";
      issues.push_back({os.str(), "value outside [0, 1]"});
    }
  }
  return issues;
}

Policy make_policy(Matrix probs) {
  renormalize_rows(probs);
  return Policy{std::move(probs)};
}

Policy constant_policy(Index n_states, Index n_actions, Index a) {
  Matrix probs = Matrix::Zero(n_states, n_actions);
  probs.col(a).setOnes();
  return Policy{std::move(probs)};
}

Policy uniform_policy(Index n_states, Index n_actions) {
  return Policy{Matrix::Constant(n_states, n_actions, 1.0 / double(n_actions))};
}

Policy extract_policy_from_occupancy(const OccupancyMeasure& mu, Index n_actions) {
  const Index n_states = mu.values.size() / n_actions;
  Matrix probs(n_states, n_actions);
  for (Index s = 0; s < n_states; ++s) {
    const auto row = mu.values.segment(s * n_actions, n_actions);
    const double mass = row.sum();
    if (mass > 0.0) {
      probs.row(s) = row.transpose() / mass;
    } else {
      probs.row(s).setConstant(1.0 / double(n_actions));
    }
  }
  return Policy{std::move(probs)};
}

Policy extract_policy_from_weights(const Vector& w, const Vector& mu_d,
                                   Index n_states, Index n_actions) {
  OccupancyMeasure reweighted{w.cwiseProduct(mu_d)};
  (void)n_states;
  return extract_policy_from_occupancy(reweighted, n_actions);
}

Policy softmax_policy(const Vector& q, double c, Index n_states, Index n_actions) {
  Matrix probs(n_states, n_actions);
  for (Index s = 0; s < n_states; ++s) {
    const auto row = q.segment(s * n_actions, n_actions);
    const double shift = row.maxCoeff();
    Eigen::ArrayXd expo = (c * (row.array() - shift)).exp();
    probs.row(s) = (expo / expo.sum()).matrix().transpose();
  }
  return Policy{std::move(probs)};
}

double policy_distance_inf1(const Policy& p1, const Policy& p2) {
  if (p1.probs.rows() != p2.probs.rows() || p1.probs.cols() != p2.probs.cols())
    throw std::invalid_argument("policy_distance_inf1: shape mismatch");
  return (p1.probs - p2.probs).cwiseAbs().rowwise().sum().maxCoeff();
}

Vector state_marginals(const Vector& sa_table, Index n_states, Index n_actions) {
  assert(sa_table.size() == n_states * n_actions);
  Vector out(n_states);
  for (Index s = 0; s < n_states; ++s)
    out[s] = sa_table.segment(s * n_actions, n_actions).sum();
  return out;
}

}  // namespace cmdplab
