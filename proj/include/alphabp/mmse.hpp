#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "alphabp/factor_graph.hpp"
#include "alphabp/models.hpp"
#include "alphabp/numeric.hpp"

namespace alphabp {

/// Covariance convention for the Gaussian posterior. `sigma` scales the
/// inverse Gram matrix by sigma_w, `sigma_squared` by sigma_w^2. The default
/// is `sigma`; only the sharpness of derived prior tables depends on it.
enum class CovarianceScaling { sigma, sigma_squared };

struct MmsePosterior {
  Eigen::VectorXd mean;        // (H'H + s^2 I)^{-1} H'y
  Eigen::MatrixXd covariance;  // scale * (H'H + s^2 I)^{-1}
};

/// Linear MMSE posterior via Cholesky solves of the SPD system; no explicit
/// inverse is formed for the mean.
inline MmsePosterior mmse_posterior(const MimoInstance& inst,
                                    CovarianceScaling scaling = CovarianceScaling::sigma) {
  if (!(inst.sigma_w > 0.0)) throw std::invalid_argument("mmse_posterior: sigma_w must be > 0");
  const int n = inst.n();
  const Eigen::MatrixXd system =
      inst.channel.transpose() * inst.channel +
      inst.sigma_w * inst.sigma_w * Eigen::MatrixXd::Identity(n, n);
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("mmse_posterior: Cholesky factorization failed");
  }
  const double scale =
      scaling == CovarianceScaling::sigma ? inst.sigma_w : inst.sigma_w * inst.sigma_w;
  MmsePosterior post;
  post.mean = llt.solve(inst.channel.transpose() * inst.observation);
  post.covariance = scale * llt.solve(Eigen::MatrixXd::Identity(n, n));
  return post;
}

/// Hard decision: nearest alphabet value per component, ties to the lower index.
inline std::vector<int> mmse_decide(const MmsePosterior& post, const Alphabet& alphabet) {
  std::vector<int> decision(post.mean.size());
  for (int i = 0; i < post.mean.size(); ++i) {
    std::size_t best = 0;
    double best_dist = std::abs(alphabet.value(0) - post.mean[i]);
    for (std::size_t a = 1; a < alphabet.size(); ++a) {
      const double d = std::abs(alphabet.value(a) - post.mean[i]);
      if (d < best_dist) {
        best = a;
        best_dist = d;
      }
    }
    decision[i] = static_cast<int>(best);
  }
  return decision;
}

/// Gaussian prior tables p^_i(x) ∝ exp(-(x - mu_i)^2 / (2 Sigma_ii)),
/// normalized per variable. These plug straight into the engine's prior slot.
inline std::vector<std::vector<double>> mmse_prior_factors(const MmsePosterior& post,
                                                           const Alphabet& alphabet) {
  std::vector<std::vector<double>> priors(post.mean.size());
  for (int i = 0; i < post.mean.size(); ++i) {
    const double var = post.covariance(i, i);
    if (!(var > 0.0)) {
      throw std::invalid_argument("mmse_prior_factors: non-positive covariance diagonal");
    }
    std::vector<double> lv(alphabet.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      const double d = alphabet.value(a) - post.mean[i];
      lv[a] = -d * d / (2.0 * var);
    }
    priors[i].resize(alphabet.size());
    detail::softmax_from_logs(lv.data(), alphabet.size(), priors[i].data());
  }
  return priors;
}

}  // namespace alphabp
