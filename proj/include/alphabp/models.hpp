#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "alphabp/factor_graph.hpp"

namespace alphabp {

/// Binary MRF with energy x'Jx + b'x over x in {-1,+1}^N. J is symmetric
/// with zero diagonal as generated; a nonzero diagonal would only add an
/// assignment-independent constant.
struct IsingModel {
  Eigen::MatrixXd coupling;
  Eigen::VectorXd bias;

  int n() const { return static_cast<int>(bias.size()); }
};

/// One linear-channel detection instance: y = H x_true + noise.
struct MimoInstance {
  Eigen::MatrixXd channel;    // M x N
  Eigen::VectorXd x_true;     // entries in {-1,+1}
  Eigen::VectorXd observation;
  double sigma_w = 1.0;

  int n() const { return static_cast<int>(channel.cols()); }
  int m() const { return static_cast<int>(channel.rows()); }
};

/// Erdos-Renyi coupled Ising model: each pair i<j carries J_ij ~ N(0,1) with
/// probability edge_prob, b_i ~ N(0, 1/16). Pure function of (n, edge_prob, seed).
inline IsingModel sample_ising(int n, double edge_prob, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_ising: n must be >= 1");
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) {
    throw std::invalid_argument("sample_ising: edge_prob must be in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> coupling_dist(0.0, 1.0);
  std::normal_distribution<double> bias_dist(0.0, 0.25);
  std::uniform_real_distribution<double> u01(0.0, 1.0);

  IsingModel model;
  model.coupling = Eigen::MatrixXd::Zero(n, n);
  model.bias.resize(n);
  for (int i = 0; i < n; ++i) model.bias[i] = bias_dist(rng);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (u01(rng) < edge_prob) {
        const double v = coupling_dist(rng);
        model.coupling(i, j) = v;
        model.coupling(j, i) = v;
      }
    }
  }
  return model;
}

/// Factor graph over alphabet {-1,+1} whose joint is exp{-x'Jx - b'x}:
/// t_k(x_i,x_j) = exp(-2 J_ij x_i x_j) per nonzero coupling and
/// f_i(x_i) = exp(-J_ii - b_i x_i). Zero couplings produce no factor.
inline FactorGraph ising_to_graph(const IsingModel& model) {
  const Alphabet alphabet{{-1.0, +1.0}};
  const int n = model.n();
  if (model.coupling.rows() != n || model.coupling.cols() != n) {
    throw std::invalid_argument("ising_to_graph: coupling matrix shape mismatch");
  }
  std::vector<std::vector<double>> singletons(n);
  for (int i = 0; i < n; ++i) {
    singletons[i].resize(2);
    for (int a = 0; a < 2; ++a) {
      singletons[i][a] = std::exp(-model.coupling(i, i) - model.bias[i] * alphabet.value(a));
    }
  }
  std::vector<PairwiseSpec> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double coupling = model.coupling(i, j);
      if (coupling == 0.0) continue;
      PairwiseSpec spec;
      spec.i = i;
      spec.j = j;
      spec.table.assign(2, std::vector<double>(2));
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          spec.table[a][b] = std::exp(-2.0 * coupling * alphabet.value(a) * alphabet.value(b));
        }
      }
      pairs.push_back(std::move(spec));
    }
  }
  return FactorGraph(alphabet, std::move(singletons), pairs);
}

/// Gaussian channel instance: H entries iid N(0,1), x_true uniform over
/// {-1,+1}^n, y = H x_true + N(0, sigma_w^2 I). Pure function of the seed.
inline MimoInstance sample_mimo(int n, int m, double sigma_w, std::uint64_t seed) {
  if (n < 1 || m < 1) throw std::invalid_argument("sample_mimo: dimensions must be >= 1");
  if (!(sigma_w > 0.0)) throw std::invalid_argument("sample_mimo: sigma_w must be > 0");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> coin(0, 1);

  MimoInstance inst;
  inst.sigma_w = sigma_w;
  inst.channel.resize(m, n);
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < n; ++c) inst.channel(r, c) = unit(rng);
  }
  inst.x_true.resize(n);
  for (int i = 0; i < n; ++i) inst.x_true[i] = coin(rng) == 0 ? -1.0 : +1.0;
  inst.observation = inst.channel * inst.x_true;
  for (int r = 0; r < m; ++r) inst.observation[r] += sigma_w * unit(rng);
  return inst;
}

namespace detail {

// Tables built from exponentiated energies are shifted by their max log entry
// before exponentiation so the largest entry is 1; this only changes the
// assignment-independent constant. Entries that still underflow are clamped.
constexpr double kMinFactorEntry = 1e-290;

inline std::vector<double> shifted_exp(const std::vector<double>& log_entries) {
  double shift = log_entries[0];
  for (double lv : log_entries) shift = std::max(shift, lv);
  std::vector<double> out(log_entries.size());
  for (std::size_t a = 0; a < log_entries.size(); ++a) {
    out[a] = std::max(std::exp(log_entries[a] - shift), kMinFactorEntry);
  }
  return out;
}

}  // namespace detail

/// Factor graph over {-1,+1} proportional to the detection posterior
/// exp{-||Hx - y||^2 / (2 sigma_w^2)}. With S = H'H:
///   f_i(x_i)     = exp(-S_ii x_i^2 / (2 s^2) + <h_i, y> x_i / s^2)
///   t_k(x_i,x_j) = exp(-x_i S_ij x_j / s^2)   for every pair i<j with S_ij != 0
/// so a generic channel yields the complete graph on N variables.
inline FactorGraph mimo_to_graph(const MimoInstance& inst) {
  const Alphabet alphabet{{-1.0, +1.0}};
  const int n = inst.n();
  const double inv_var = 1.0 / (inst.sigma_w * inst.sigma_w);
  const Eigen::MatrixXd gram = inst.channel.transpose() * inst.channel;
  const Eigen::VectorXd match = inst.channel.transpose() * inst.observation;

  std::vector<std::vector<double>> singletons(n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> lv(2);
    for (int a = 0; a < 2; ++a) {
      const double x = alphabet.value(a);
      lv[a] = -gram(i, i) * x * x * 0.5 * inv_var + match[i] * x * inv_var;
    }
    singletons[i] = detail::shifted_exp(lv);
  }
  std::vector<PairwiseSpec> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (gram(i, j) == 0.0) continue;
      std::vector<double> lv(4);
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          lv[a * 2 + b] = -alphabet.value(a) * gram(i, j) * alphabet.value(b) * inv_var;
        }
      }
      const std::vector<double> flat = detail::shifted_exp(lv);
      PairwiseSpec spec;
      spec.i = i;
      spec.j = j;
      spec.table = {{flat[0], flat[1]}, {flat[2], flat[3]}};
      pairs.push_back(std::move(spec));
    }
  }
  return FactorGraph(alphabet, std::move(singletons), pairs);
}

}  // namespace alphabp
