// Temporary diagnostic: primal-dual loop with weights tied per (s,a) cell
// (the function-class weight box). Not part of the build.
#include <cstdio>
#include <vector>

#include "cmdplab/counterexamples.hpp"
#include "cmdplab/exact_oracle.hpp"
#include "cmdplab/offline_data.hpp"
#include "cmdplab/saddle_solvers.hpp"

using namespace cmdplab;

int main() {
  const Cmdp mdp = build_figure1_mdp();
  const Policy pi_star = constant_policy(5, 2, kLeft);
  const DataDistribution mu_d = build_mixture_distribution(mdp, pi_star, 0.5);
  const double c_star = concentrability(mdp, pi_star, mu_d.probs);
  const Index S = 5, A = 2, nsa = 10;
  const double gamma = 0.5, cap_q = 8.0, cap_w = c_star;

  for (Index n : {1000, 10000, 100000}) {
    std::printf("n=%6ld subopt:", long(n));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const OfflineDataset data = sample_dataset(mdp, mu_d, n, seed);
      const long T = n;
      const double alpha = 0.5 * std::sqrt(std::log(2.0) / double(T));
      const double eta = cap_w / (3.0 * std::sqrt(double(T)));

      std::vector<Index> saf(n);
      std::vector<Index> counts(nsa, 0);
      Vector r0d(n);
      for (Index j = 0; j < n; ++j) {
        saf[j] = sa_index(data.s[j], data.a[j], A);
        ++counts[saf[j]];
        r0d[j] = mdp.rewards[0][saf[j]];
      }

      Matrix logits = Matrix::Zero(S, A);
      Vector w_table = Vector::Constant(nsa, cap_w / 2.0);
      Vector q = Vector::Zero(nsa);
      Vector h_cell = Vector::Zero(nsa);  // cell-mean td coefficient
      Vector qpi(S), w_by_next(S), w_by_sa(nsa), coef(nsa);
      double j_sum = 0.0;

      for (long t = 1; t <= T; ++t) {
        if (t >= 2)
          w_table = (w_table + eta * h_cell).cwiseMax(0.0).cwiseMin(cap_w);

        for (Index s = 0; s < S; ++s)
          logits.row(s) += alpha * q.segment(s * A, A).transpose();
        Matrix probs(S, A);
        for (Index s = 0; s < S; ++s) {
          Eigen::ArrayXd e =
              (logits.row(s).array() - logits.row(s).maxCoeff()).exp();
          probs.row(s) = (e / e.sum()).matrix();
        }
        const Policy policy{probs};

        w_by_next.setZero();
        w_by_sa.setZero();
        for (Index j = 0; j < n; ++j) {
          w_by_next[data.s_next[j]] += w_table[saf[j]];
          w_by_sa[saf[j]] += w_table[saf[j]];
        }
        coef.setZero();
        for (Index a = 0; a < A; ++a)
          coef[0 * A + a] = 0.5 * probs(0, a);
        for (Index s = 0; s < S; ++s) {
          const double scale = gamma * w_by_next[s] / double(n);
          for (Index a = 0; a < A; ++a) coef[s * A + a] += scale * probs(s, a);
        }
        coef -= w_by_sa / double(n);
        for (Index k = 0; k < nsa; ++k) q[k] = coef[k] < 0.0 ? cap_q : 0.0;

        for (Index s = 0; s < S; ++s)
          qpi[s] = probs.row(s).dot(q.segment(s * A, A).transpose());
        h_cell.setZero();
        for (Index j = 0; j < n; ++j)
          h_cell[saf[j]] += r0d[j] + gamma * qpi[data.s_next[j]] - q[saf[j]];
        for (Index k = 0; k < nsa; ++k)
          if (counts[k] > 0) h_cell[k] /= double(counts[k]);

        j_sum += evaluate_policy(mdp, policy, 0).scalar_return;
      }
      std::printf(" %.4f", 1.0 - j_sum / double(T));
      std::fflush(stdout);
    }
    std::printf("\n");
  }
  return 0;
}
