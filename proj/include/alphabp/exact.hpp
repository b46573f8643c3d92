#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "alphabp/factor_graph.hpp"
#include "alphabp/numeric.hpp"

namespace alphabp {

/// Normalized joint distribution by full enumeration. Assignments are ordered
/// mixed-radix with variable 0 most significant, so index 0 is the
/// all-lowest-value assignment and ties in argmax searches resolve
/// lexicographically.
struct JointTable {
  std::size_t n_vars = 0;
  std::size_t n_states = 0;
  std::vector<double> probabilities;
  double normalization = 0.0;  // sum of unnormalized joint values
};

namespace detail {

// Enumeration guard: |A|^N must not exceed 2^20.
inline std::size_t enumeration_size(const FactorGraph& g) {
  const double bits = g.n_vars() * std::log2(static_cast<double>(g.n_states()));
  if (bits > 20.0 + 1e-9) {
    throw std::invalid_argument("enumeration too large: |A|^N exceeds 2^20");
  }
  std::size_t total = 1;
  for (int i = 0; i < g.n_vars(); ++i) total *= g.n_states();
  return total;
}

// Odometer step in mixed-radix order, least significant digit last.
inline bool next_assignment(std::vector<int>& a, std::size_t states) {
  for (int d = static_cast<int>(a.size()) - 1; d >= 0; --d) {
    if (static_cast<std::size_t>(++a[d]) < states) return true;
    a[d] = 0;
  }
  return false;
}

}  // namespace detail

inline JointTable enumerate_joint(const FactorGraph& g) {
  const std::size_t total = detail::enumeration_size(g);
  std::vector<double> log_values(total);
  std::vector<int> assignment(g.n_vars(), 0);
  double shift = -std::numeric_limits<double>::infinity();
  std::size_t t = 0;
  do {
    const double lv = g.log_joint(assignment);
    log_values[t++] = lv;
    if (lv > shift) shift = lv;
  } while (detail::next_assignment(assignment, g.n_states()));

  detail::KahanSum scaled_sum;
  JointTable jt;
  jt.n_vars = static_cast<std::size_t>(g.n_vars());
  jt.n_states = g.n_states();
  jt.probabilities.resize(total);
  for (std::size_t u = 0; u < total; ++u) {
    jt.probabilities[u] = std::exp(log_values[u] - shift);
    scaled_sum.add(jt.probabilities[u]);
  }
  const double s = scaled_sum.value();
  for (double& p : jt.probabilities) p /= s;
  jt.normalization = std::exp(shift) * s;  // may overflow to inf for extreme graphs
  return jt;
}

/// Ground-truth MAP by enumeration: the lexicographically-first maximizer of
/// the joint, together with its unnormalized evaluate_joint value.
inline std::pair<std::vector<int>, double> exact_map(const FactorGraph& g) {
  detail::enumeration_size(g);
  std::vector<int> assignment(g.n_vars(), 0);
  std::vector<int> best = assignment;
  double best_log = g.log_joint(assignment);
  while (detail::next_assignment(assignment, g.n_states())) {
    const double lv = g.log_joint(assignment);
    if (lv > best_log) {
      best_log = lv;
      best = assignment;
    }
  }
  return {best, g.evaluate_joint(best)};
}

/// Per-variable marginals of the normalized joint.
inline std::vector<std::vector<double>> exact_marginals(const FactorGraph& g) {
  const JointTable jt = enumerate_joint(g);
  const std::size_t states = jt.n_states;
  std::vector<std::vector<detail::KahanSum>> acc(jt.n_vars,
                                                 std::vector<detail::KahanSum>(states));
  std::vector<int> assignment(g.n_vars(), 0);
  std::size_t t = 0;
  do {
    for (std::size_t i = 0; i < jt.n_vars; ++i) acc[i][assignment[i]].add(jt.probabilities[t]);
    ++t;
  } while (detail::next_assignment(assignment, states));

  std::vector<std::vector<double>> marginals(jt.n_vars, std::vector<double>(states));
  for (std::size_t i = 0; i < jt.n_vars; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < states; ++a) {
      marginals[i][a] = acc[i][a].value();
      s += marginals[i][a];
    }
    for (double& m : marginals[i]) m /= s;
  }
  return marginals;
}

}  // namespace alphabp
