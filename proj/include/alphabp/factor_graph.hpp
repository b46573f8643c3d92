#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace alphabp {

/// Shared finite alphabet of variable values. Order is fixed and meaningful:
/// it defines factor-table indexing and argmax tie-breaking (lowest index wins).
struct Alphabet {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double value(std::size_t a) const { return values[a]; }
};

/// Input description of one pairwise factor: a dense |A|x|A| table over
/// (x_i, x_j). Endpoints may be given in either order; the graph stores the
/// canonical i < j orientation and transposes the table if needed.
struct PairwiseSpec {
  int i = 0;
  int j = 0;
  std::vector<std::vector<double>> table;
};

/// Immutable pairwise discrete MRF: one strictly positive singleton table per
/// variable, a set of strictly positive pairwise tables, and the adjacency
/// lists tying them together. The unnormalized density is the product of all
/// factor entries at an assignment.
class FactorGraph {
 public:
  FactorGraph(Alphabet alphabet, std::vector<std::vector<double>> singleton_tables,
              const std::vector<PairwiseSpec>& pairwise_specs)
      : alphabet_(std::move(alphabet)), singletons_(std::move(singleton_tables)) {
    validate_alphabet();
    const std::size_t states = alphabet_.size();
    const int n = static_cast<int>(singletons_.size());
    if (n < 1) throw std::invalid_argument("graph needs at least one variable");
    for (int i = 0; i < n; ++i) {
      if (singletons_[i].size() != states) {
        throw std::invalid_argument("singleton table " + std::to_string(i) +
                                    ": length does not match alphabet size");
      }
      check_positive(singletons_[i], "singleton table " + std::to_string(i));
    }

    adjacency_.resize(n);
    pair_tables_.reserve(pairwise_specs.size());
    endpoints_.reserve(pairwise_specs.size());
    for (std::size_t k = 0; k < pairwise_specs.size(); ++k) {
      const auto& spec = pairwise_specs[k];
      const std::string where = "pairwise factor " + std::to_string(k);
      if (spec.i == spec.j) throw std::invalid_argument(where + ": endpoints are equal");
      if (spec.i < 0 || spec.i >= n || spec.j < 0 || spec.j >= n) {
        throw std::invalid_argument(where + ": endpoint variable id out of range");
      }
      if (spec.table.size() != states) {
        throw std::invalid_argument(where + ": table must have one row per alphabet value");
      }
      for (const auto& row : spec.table) {
        if (row.size() != states) {
          throw std::invalid_argument(where + ": table row length does not match alphabet size");
        }
      }
      const bool flip = spec.i > spec.j;
      const int lo = flip ? spec.j : spec.i;
      const int hi = flip ? spec.i : spec.j;
      for (const auto& [a, b] : endpoints_) {
        if (a == lo && b == hi) {
          throw std::invalid_argument(where + ": duplicate edge (" + std::to_string(lo) + "," +
                                      std::to_string(hi) + ")");
        }
      }
      std::vector<double> flat(states * states);
      for (std::size_t a = 0; a < states; ++a) {
        for (std::size_t b = 0; b < states; ++b) {
          flat[a * states + b] = flip ? spec.table[b][a] : spec.table[a][b];
        }
      }
      check_positive(flat, where);
      endpoints_.emplace_back(lo, hi);
      pair_tables_.push_back(std::move(flat));
      adjacency_[lo].push_back(static_cast<int>(k));
      adjacency_[hi].push_back(static_cast<int>(k));
    }
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t n_states() const { return alphabet_.size(); }
  int n_vars() const { return static_cast<int>(singletons_.size()); }
  int n_factors() const { return static_cast<int>(pair_tables_.size()); }

  const std::vector<double>& singleton(int i) const { return singletons_[i]; }
  std::pair<int, int> endpoints(int k) const { return endpoints_[k]; }
  const std::vector<double>& pair_table(int k) const { return pair_tables_[k]; }

  double pair_entry(int k, std::size_t a_lo, std::size_t a_hi) const {
    return pair_tables_[k][a_lo * n_states() + a_hi];
  }

  /// Pa[i]: ids of pairwise factors incident to variable i.
  const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }

  int other_endpoint(int k, int i) const {
    const auto [lo, hi] = endpoints_[k];
    return i == lo ? hi : lo;
  }

  /// Unnormalized product of all factor entries at the assignment
  /// (one alphabet index per variable).
  double evaluate_joint(std::span<const int> assignment) const {
    check_assignment(assignment);
    double v = 1.0;
    for (int i = 0; i < n_vars(); ++i) v *= singletons_[i][assignment[i]];
    for (int k = 0; k < n_factors(); ++k) {
      const auto [lo, hi] = endpoints_[k];
      v *= pair_entry(k, assignment[lo], assignment[hi]);
    }
    return v;
  }

  /// Sum of log factor entries; equals log(evaluate_joint) without the
  /// intermediate under/overflow.
  double log_joint(std::span<const int> assignment) const {
    check_assignment(assignment);
    double lv = 0.0;
    for (int i = 0; i < n_vars(); ++i) lv += std::log(singletons_[i][assignment[i]]);
    for (int k = 0; k < n_factors(); ++k) {
      const auto [lo, hi] = endpoints_[k];
      lv += std::log(pair_entry(k, assignment[lo], assignment[hi]));
    }
    return lv;
  }

 private:
  void validate_alphabet() const {
    if (alphabet_.size() < 2) throw std::invalid_argument("alphabet: need at least 2 values");
    for (std::size_t a = 0; a < alphabet_.size(); ++a) {
      if (!std::isfinite(alphabet_.values[a])) {
        throw std::invalid_argument("alphabet: values must be finite");
      }
      for (std::size_t b = a + 1; b < alphabet_.size(); ++b) {
        if (alphabet_.values[a] == alphabet_.values[b]) {
          throw std::invalid_argument("alphabet: values must be distinct");
        }
      }
    }
  }

  static void check_positive(const std::vector<double>& table, const std::string& where) {
    for (double x : table) {
      if (!(x > 0.0) || !std::isfinite(x)) {
        throw std::invalid_argument(where + ": non-positive or non-finite entry");
      }
    }
  }

  void check_assignment(std::span<const int> assignment) const {
    if (assignment.size() != static_cast<std::size_t>(n_vars())) {
      throw std::invalid_argument("assignment length does not match variable count");
    }
    for (int x : assignment) {
      if (x < 0 || static_cast<std::size_t>(x) >= n_states()) {
        throw std::invalid_argument("assignment index out of alphabet range");
      }
    }
  }

  Alphabet alphabet_;
  std::vector<std::vector<double>> singletons_;
  std::vector<std::pair<int, int>> endpoints_;   // canonical lo < hi
  std::vector<std::vector<double>> pair_tables_; // row-major (x_lo, x_hi)
  std::vector<std::vector<int>> adjacency_;
};

}  // namespace alphabp
