#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "alphabp/factor_graph.hpp"
#include "alphabp/numeric.hpp"

namespace alphabp {

enum class Schedule { fixed_order, seeded_random_order };

struct EngineConfig {
  double alpha = 1.0;        // divergence parameter; 1 recovers sum-product BP
  int max_sweeps = 50;
  double tolerance = 1e-6;   // max per-entry message change per sweep
  Schedule schedule = Schedule::fixed_order;
  std::uint64_t schedule_seed = 0;  // drives seeded_random_order only
  double damping = 0.0;      // 0 = undamped updates
  double message_floor = 1e-12;
};

inline void validate(const EngineConfig& c) {
  if (!std::isfinite(c.alpha) || !(c.alpha > 0.0) || !(c.alpha <= 2.0)) {
    throw std::invalid_argument("engine config: alpha must be in (0, 2]");
  }
  if (c.max_sweeps < 1) throw std::invalid_argument("engine config: max_sweeps must be >= 1");
  if (!(c.tolerance > 0.0)) throw std::invalid_argument("engine config: tolerance must be > 0");
  if (!(c.damping >= 0.0 && c.damping < 1.0)) {
    throw std::invalid_argument("engine config: damping must be in [0, 1)");
  }
  if (!(c.message_floor > 0.0)) {
    throw std::invalid_argument("engine config: message_floor must be > 0");
  }
}

struct ConvergenceReport {
  bool converged = false;
  int sweeps_used = 0;
  double final_residual = std::numeric_limits<double>::infinity();
};

/// A directed message table over the alphabet, normalized to sum 1.
struct Message {
  std::vector<double> table;
};

/// Mutable per-run state: all factor-to-variable messages plus the surrogate
/// singleton tables and optional per-variable priors. Messages are stored at
/// edge slot 2k+s, where s = 0 addresses the lower endpoint of factor k and
/// s = 1 the higher one.
struct BeliefState {
  std::vector<std::vector<double>> messages;   // 2 * n_factors tables, each sums to 1
  std::vector<std::vector<double>> surrogate;  // f~ per variable, strictly positive
  std::vector<std::vector<double>> prior;      // per variable; empty table = no prior

  static int edge(int k, int slot) { return 2 * k + slot; }
  bool has_prior(int i) const {
    return !prior.empty() && !prior[static_cast<std::size_t>(i)].empty();
  }
};

namespace detail {

// log m_{j->k}: log f~_j (+ log prior_j) + sum over incoming factor messages
// except k, normalized in log domain. Writes |A| entries into out.
inline void log_var_to_factor(const BeliefState& s, const FactorGraph& g, int j, int k,
                              double* out) {
  const std::size_t states = g.n_states();
  for (std::size_t a = 0; a < states; ++a) out[a] = std::log(s.surrogate[j][a]);
  if (s.has_prior(j)) {
    for (std::size_t a = 0; a < states; ++a) out[a] += std::log(s.prior[j][a]);
  }
  for (int n : g.neighbors(j)) {
    if (n == k) continue;
    const int slot = g.endpoints(n).first == j ? 0 : 1;
    const auto& m = s.messages[BeliefState::edge(n, slot)];
    for (std::size_t a = 0; a < states; ++a) out[a] += std::log(m[a]);
  }
  const double l = log_sum_exp(out, states);
  for (std::size_t a = 0; a < states; ++a) out[a] -= l;
}

// New message from factor k toward the endpoint at `slot`, Eq.-style:
//   m_new(x_i) ∝ [ sum_{x_j} t^alpha * m_{k->j}^(1-alpha) * m_{j->k} ] * m_{k->i}^(1-alpha)
// computed in log domain, exponentiated, floor-clamped and normalized.
// lbuf and tbuf are |A| scratch arrays; the result lands in out (linear).
inline void update_factor_to_var(const BeliefState& s, const FactorGraph& g, int k, int slot,
                                 double alpha, double floor, double* lbuf, double* tbuf,
                                 std::vector<double>& out) {
  const std::size_t states = g.n_states();
  const auto [lo, hi] = g.endpoints(k);
  const int j = slot == 0 ? hi : lo;
  const double beta = 1.0 - alpha;
  const auto& table = g.pair_table(k);
  const auto& m_ki = s.messages[BeliefState::edge(k, slot)];
  const auto& m_kj = s.messages[BeliefState::edge(k, 1 - slot)];

  log_var_to_factor(s, g, j, k, lbuf);
  for (std::size_t b = 0; b < states; ++b) lbuf[b] += beta * std::log(m_kj[b]);

  out.resize(states);
  for (std::size_t a = 0; a < states; ++a) {
    for (std::size_t b = 0; b < states; ++b) {
      // table rows are indexed by the lower endpoint's value
      const double t = slot == 0 ? table[a * states + b] : table[b * states + a];
      tbuf[b] = alpha * std::log(t) + lbuf[b];
    }
    out[a] = log_sum_exp(tbuf, states) + beta * std::log(m_ki[a]);
  }
  softmax_from_logs(out.data(), states, out.data());
  bool clamped = false;
  for (std::size_t a = 0; a < states; ++a) {
    if (out[a] < floor) {
      out[a] = floor;
      clamped = true;
    }
  }
  if (clamped) normalize_in_place(out);
}

}  // namespace detail

/// Fresh state: uniform factor-to-variable messages, surrogates equal to the
/// graph's singleton tables, priors validated and stored. An empty `priors`
/// vector means no priors anywhere; an empty inner table skips one variable.
inline BeliefState init_state(const FactorGraph& g,
                              const std::vector<std::vector<double>>& priors = {}) {
  const std::size_t states = g.n_states();
  if (!priors.empty() && priors.size() != static_cast<std::size_t>(g.n_vars())) {
    throw std::invalid_argument("priors: need one table per variable (or an empty list)");
  }
  for (std::size_t i = 0; i < priors.size(); ++i) {
    if (priors[i].empty()) continue;
    if (priors[i].size() != states) {
      throw std::invalid_argument("prior table " + std::to_string(i) +
                                  ": length does not match alphabet size");
    }
    for (double x : priors[i]) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument("prior table " + std::to_string(i) +
                                    ": non-positive or non-finite entry");
      }
    }
  }

  BeliefState s;
  s.messages.assign(2 * static_cast<std::size_t>(g.n_factors()),
                    std::vector<double>(states, 1.0 / static_cast<double>(states)));
  s.surrogate.resize(g.n_vars());
  for (int i = 0; i < g.n_vars(); ++i) s.surrogate[i] = g.singleton(i);
  s.prior = priors;
  return s;
}

/// Variable-to-factor message m_{j->k}: normalized product of the surrogate,
/// the prior if present, and all incoming factor messages except from k.
inline Message variable_to_factor(const BeliefState& s, const FactorGraph& g, int j, int k) {
  const auto& pa = g.neighbors(j);
  if (std::find(pa.begin(), pa.end(), k) == pa.end()) {
    throw std::invalid_argument("variable_to_factor: factor " + std::to_string(k) +
                                " is not incident to variable " + std::to_string(j));
  }
  Message m;
  m.table.resize(g.n_states());
  detail::log_var_to_factor(s, g, j, k, m.table.data());
  detail::softmax_from_logs(m.table.data(), g.n_states(), m.table.data());
  return m;
}

/// One application of the alpha message rule for the edge (factor k -> variable i).
/// Pure: the caller commits the result, which is what enables damping.
inline Message factor_to_variable_update(const BeliefState& s, const FactorGraph& g, int k,
                                         int i, double alpha,
                                         double message_floor = 1e-12) {
  const auto [lo, hi] = g.endpoints(k);
  if (i != lo && i != hi) {
    throw std::invalid_argument("factor_to_variable_update: variable " + std::to_string(i) +
                                " is not an endpoint of factor " + std::to_string(k));
  }
  const int slot = i == lo ? 0 : 1;
  std::vector<double> lbuf(g.n_states()), tbuf(g.n_states());
  Message m;
  detail::update_factor_to_var(s, g, k, slot, alpha, message_floor, lbuf.data(), tbuf.data(),
                               m.table);
  return m;
}

/// Surrogate refinement f~_i <- normalize(f_i^alpha * f~_i^(1-alpha)).
/// With f~ initialized to f this is a fixed point, so it only rescales.
inline void singleton_refresh(BeliefState& s, const FactorGraph& g, int i, double alpha) {
  const std::size_t states = g.n_states();
  const double beta = 1.0 - alpha;
  auto& f_tilde = s.surrogate[i];
  const auto& f = g.singleton(i);
  for (std::size_t a = 0; a < states; ++a) {
    f_tilde[a] = alpha * std::log(f[a]) + beta * std::log(f_tilde[a]);
  }
  detail::softmax_from_logs(f_tilde.data(), states, f_tilde.data());
}

/// One sweep: refresh every surrogate, then update and commit both directed
/// messages of every pairwise factor (fixed id order, or a seeded shuffle).
/// Newly committed messages are visible to later updates within the same
/// sweep. Returns the max absolute per-entry change over committed messages.
inline double run_sweep(BeliefState& s, const FactorGraph& g, const EngineConfig& cfg,
                        std::mt19937_64& order_rng) {
  const std::size_t states = g.n_states();
  std::vector<int> order(g.n_factors());
  std::iota(order.begin(), order.end(), 0);
  if (cfg.schedule == Schedule::seeded_random_order) {
    std::shuffle(order.begin(), order.end(), order_rng);
  }
  for (int i = 0; i < g.n_vars(); ++i) singleton_refresh(s, g, i, cfg.alpha);

  std::vector<double> lbuf(states), tbuf(states), fresh(states);
  double residual = 0.0;
  for (int k : order) {
    for (int slot = 0; slot < 2; ++slot) {
      detail::update_factor_to_var(s, g, k, slot, cfg.alpha, cfg.message_floor, lbuf.data(),
                                   tbuf.data(), fresh);
      auto& committed = s.messages[BeliefState::edge(k, slot)];
      if (cfg.damping > 0.0) {
        double sum = 0.0;
        for (std::size_t a = 0; a < states; ++a) {
          fresh[a] = (1.0 - cfg.damping) * fresh[a] + cfg.damping * committed[a];
          sum += fresh[a];
        }
        for (std::size_t a = 0; a < states; ++a) fresh[a] /= sum;
      }
      for (std::size_t a = 0; a < states; ++a) {
        residual = std::max(residual, std::abs(fresh[a] - committed[a]));
      }
      committed.swap(fresh);
    }
  }
  return residual;
}

/// Full run: sweeps until the residual drops to the tolerance or the sweep
/// budget runs out. Non-convergence is reported, never thrown. Deterministic
/// for a given graph, config and priors.
inline std::pair<BeliefState, ConvergenceReport> run(
    const FactorGraph& g, const EngineConfig& cfg,
    const std::vector<std::vector<double>>& priors = {}) {
  validate(cfg);
  BeliefState s = init_state(g, priors);
  std::mt19937_64 order_rng(cfg.schedule_seed);
  ConvergenceReport rep;
  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    const double residual = run_sweep(s, g, cfg, order_rng);
    rep.sweeps_used = sweep;
    rep.final_residual = residual;
    if (residual <= cfg.tolerance) {
      rep.converged = true;
      break;
    }
  }
  return {std::move(s), rep};
}

/// Belief q_i: normalized product of the surrogate, the prior if present, and
/// all incoming factor messages.
inline std::vector<double> marginal(const BeliefState& s, const FactorGraph& g, int i) {
  const std::size_t states = g.n_states();
  std::vector<double> lv(states);
  for (std::size_t a = 0; a < states; ++a) lv[a] = std::log(s.surrogate[i][a]);
  if (s.has_prior(i)) {
    for (std::size_t a = 0; a < states; ++a) lv[a] += std::log(s.prior[i][a]);
  }
  for (int k : g.neighbors(i)) {
    const int slot = g.endpoints(k).first == i ? 0 : 1;
    const auto& m = s.messages[BeliefState::edge(k, slot)];
    for (std::size_t a = 0; a < states; ++a) lv[a] += std::log(m[a]);
  }
  detail::softmax_from_logs(lv.data(), states, lv.data());
  return lv;
}

/// Per-variable argmax of the belief, ties to the lowest alphabet index.
inline std::vector<int> map_decision(const BeliefState& s, const FactorGraph& g) {
  std::vector<int> decision(g.n_vars());
  for (int i = 0; i < g.n_vars(); ++i) {
    decision[i] = static_cast<int>(detail::argmax_lowest(marginal(s, g, i)));
  }
  return decision;
}

}  // namespace alphabp
