#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace alphabp {
namespace detail {

inline double log_sum_exp(const double* v, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < n; ++a) {
    if (v[a] > m) m = v[a];
  }
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (std::size_t a = 0; a < n; ++a) s += std::exp(v[a] - m);
  return m + std::log(s);
}

inline double log_sum_exp(std::span<const double> v) {
  return log_sum_exp(v.data(), v.size());
}

// Writes exp(lv[a] - lse(lv)) into out; result sums to 1 up to rounding.
inline void softmax_from_logs(const double* lv, std::size_t n, double* out) {
  const double l = log_sum_exp(lv, n);
  for (std::size_t a = 0; a < n; ++a) out[a] = std::exp(lv[a] - l);
}

// Divides by the sum. Throws if the sum is not a positive finite number.
inline void normalize_in_place(std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::runtime_error("normalization failed: table sum is not positive and finite");
  }
  for (double& x : v) x /= s;
}

// Index of the largest entry; the first one wins on exact ties.
inline std::size_t argmax_lowest(std::span<const double> v) {
  std::size_t best = 0;
  for (std::size_t a = 1; a < v.size(); ++a) {
    if (v[a] > v[best]) best = a;
  }
  return best;
}

// Kahan compensated accumulator for long sums of small positive terms.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace detail
}  // namespace alphabp
