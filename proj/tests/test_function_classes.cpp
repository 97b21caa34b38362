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

#include "cmdplab/counterexamples.hpp"
#include "cmdplab/exact_oracle.hpp"
#include "cmdplab/function_classes.hpp"
#include "cmdplab/offline_data.hpp"
#include "cmdplab/rng.hpp"

using namespace cmdplab;

TEST_CASE("project_weights clamps coordinate-wise") {
  const WeightClassBox box{2.0, 4};
  Vector v(4);
  v << -0.3, 0.5, 2.0, 7.0;
  const Vector p = project_weights(v, box);
  CHECK(p[0] == 0.0);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 2.0);
  CHECK(p[3] == 2.0);

  Vector inside(4);
  inside << 0.1, 1.0, 1.9, 0.0;
  CHECK((project_weights(inside, box) - inside).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("project_weights is the Euclidean projection per coordinate") {
  const WeightClassBox box{1.5, 1};
  SplitMix64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    Vector v(1);
    v[0] = rng.next_in(-4, 6);
    const double projected = project_weights(v, box)[0];
    // Scan a grid of the box for anything closer.
    const double d_proj = std::abs(projected - v[0]);
    for (double g = 0.0; g <= 1.5 + 1e-12; g += 0.0005)
      CHECK(d_proj <= std::abs(g - v[0]) + 1e-12);
  }
}

TEST_CASE("argmin_linear_q picks the right box vertex") {
  const double gamma = 0.5;  // cap 2
  SUBCASE("all positive coefficients give the zero function") {
    const Vector q = argmin_linear_q(Vector::Constant(6, 0.3), gamma);
    CHECK(q.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("all negative coefficients saturate the cap") {
    const Vector q = argmin_linear_q(Vector::Constant(6, -0.3), gamma);
    CHECK(q.minCoeff() == 2.0);
  }
  SUBCASE("exact zeros break toward zero") {
    Vector c(3);
    c << 0.0, -1.0, 1.0;
    const Vector q = argmin_linear_q(c, gamma);
    CHECK(q[0] == 0.0);
    CHECK(q[1] == 2.0);
    CHECK(q[2] == 0.0);
  }
}

TEST_CASE("argmin_linear_q dominates random box points") {
  SplitMix64 rng(17);
  const QClassBox box = QClassBox::for_gamma(0.8);
  for (int trial = 0; trial < 20; ++trial) {
    Vector c(12);
    for (Index k = 0; k < 12; ++k) c[k] = rng.next_in(-1, 1);
    const Vector best = argmin_linear_q(c, box);
    const double best_value = c.dot(best);
    for (int k = 0; k < 10000; ++k) {
      Vector q(12);
      for (Index i = 0; i < 12; ++i) q[i] = rng.next_double() * box.upper_bound;
      CHECK(best_value <= c.dot(q) + 1e-12);
    }
    // Output must be a vertex.
    for (Index i = 0; i < 12; ++i)
      CHECK((best[i] == 0.0 || best[i] == box.upper_bound));
  }
}

TEST_CASE("argmin_linear_q dominates exact policy action values") {
  const Cmdp mdp = build_figure1_mdp();
  const QClassBox box = QClassBox::for_reward_range(mdp.gamma, 4.0);
  SplitMix64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    Vector c(10);
    for (Index k = 0; k < 10; ++k) c[k] = rng.next_in(-1, 1);
    const double best_value = c.dot(argmin_linear_q(c, box));
    Matrix probs(5, 2);
    for (Index s = 0; s < 5; ++s) {
      const double p = rng.next_double();
      probs(s, 0) = p;
      probs(s, 1) = 1.0 - p;
    }
    const Vector q_pi = evaluate_policy(mdp, Policy{std::move(probs)}, 0).q;
    CHECK(q_pi.maxCoeff() <= box.upper_bound + 1e-12);  // realizability of the box
    CHECK(best_value <= c.dot(q_pi) + 1e-12);
  }
}

TEST_CASE("true density ratio fits the weight box sized by concentrability") {
  const Cmdp mdp = build_figure1_mdp();
  const Policy pi_star = constant_policy(5, 2, kLeft);
  const DataDistribution mu_d = build_mixture_distribution(mdp, pi_star, 0.5);
  const double c_star = concentrability(mdp, pi_star, mu_d.probs);
  const OccupancyMeasure mu_star = occupancy_of_policy(mdp, pi_star);
  const Vector w_star = mu_star.values.cwiseQuotient(mu_d.probs);
  CHECK(w_star.maxCoeff() <= c_star + 1e-12);
}
