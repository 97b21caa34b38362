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

#include <algorithm>

#include "cmdplab/types.hpp"

namespace cmdplab {

/// Importance-weight class [0, C_W]^n, one coordinate per dataset point.
/// Choosing C_W at least the concentrability coefficient keeps the true
/// optimal weight function inside the box.
struct WeightClassBox {
  double upper_bound = 1.0;  // C_W
  Index dimension = 0;       // dataset size n
};

/// Value-function box [0, upper_bound]^{S x A}. The plain box with cap
/// 1/(1-gamma) contains Q_i^pi for every policy and reward index; the
/// constrained variant widens the cap to (1+B)/(1-gamma) so it still contains
/// action values of lambda-mixed rewards with ||lambda||_1 <= B.
struct QClassBox {
  double upper_bound = 1.0;

  static QClassBox for_gamma(double gamma) { return {1.0 / (1.0 - gamma)}; }
  static QClassBox for_mixed_rewards(double gamma, double dual_bound) {
    return {(1.0 + dual_bound) / (1.0 - gamma)};
  }
  /// Cap scaled for instances whose primary reward exceeds 1 (analysis MDPs);
  /// keeps every Q^pi inside the box.
  static QClassBox for_reward_range(double gamma, double max_reward) {
    return {std::max(1.0, max_reward) / (1.0 - gamma)};
  }
};

/// Softmax class descriptor Pi(Q, C): policies exp(c q(s,.)) / norm with
/// q drawn from the base box and c in [0, cap]. Mirror-descent iterates with
/// step alpha stay inside the class for cap >= alpha * t * (box diameter).
struct SoftmaxPolicyClassDescriptor {
  QClassBox base;
  double cap = 0.0;  // C
};

/// Euclidean projection onto [0, C_W]^n: the coordinate-wise clamp.
Vector project_weights(const Vector& v, const WeightClassBox& box);

/// Vertex of [0, q_max]^{S x A} minimizing <coefficients, q>: q = 0 where the
/// coefficient is positive or zero, q = q_max where it is negative.
Vector argmin_linear_q(const Vector& coefficients, const QClassBox& box);

/// Same, over the plain box with cap 1/(1-gamma).
Vector argmin_linear_q(const Vector& coefficients, double gamma);

}  // namespace cmdplab
