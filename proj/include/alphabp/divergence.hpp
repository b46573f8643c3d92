#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>

namespace alphabp {

/// Alpha-divergence between two unnormalized non-negative tables:
///   sum_a [ alpha*p + (1-alpha)*q - p^alpha * q^(1-alpha) ] / (alpha*(1-alpha))
/// Entries with p == q contribute exactly zero, which also settles the
/// 0^x conventions at (0,0). For alpha in (0,1) a zero on one side zeroes the
/// geometric term; for alpha > 1 a zero in q under positive p diverges.
inline double alpha_divergence(std::span<const double> p, std::span<const double> q,
                               double alpha) {
  if (p.size() != q.size()) throw std::invalid_argument("alpha_divergence: length mismatch");
  if (alpha == 0.0 || alpha == 1.0) {
    throw std::invalid_argument("alpha_divergence: alpha must not be 0 or 1 (use kl_divergence)");
  }
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha_divergence: alpha must be finite");

  const double beta = 1.0 - alpha;
  double acc = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double pa = p[a];
    const double qa = q[a];
    if (pa < 0.0 || qa < 0.0) throw std::invalid_argument("alpha_divergence: negative entry");
    if (pa == qa) continue;
    double geo;
    if (pa == 0.0) {
      geo = 0.0;
    } else if (qa == 0.0) {
      geo = beta > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    } else {
      geo = std::exp(alpha * std::log(pa) + beta * std::log(qa));
    }
    acc += alpha * pa + beta * qa - geo;
  }
  return acc / (alpha * beta);
}

/// KL divergence for unnormalized tables, with the mass-difference correction:
///   sum_a p*log(p/q) + sum_a (q - p),   using 0*log(0) = 0.
/// Requires support(p) within support(q).
inline double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("kl_divergence: length mismatch");
  double log_term = 0.0;
  double mass_term = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    const double pa = p[a];
    const double qa = q[a];
    if (pa < 0.0 || qa < 0.0) throw std::invalid_argument("kl_divergence: negative entry");
    if (qa == 0.0 && pa != 0.0) {
      throw std::invalid_argument("kl_divergence: support violation (q zero where p positive)");
    }
    if (pa != 0.0) log_term += pa * std::log(pa / qa);
    mass_term += qa - pa;
  }
  return log_term + mass_term;
}

}  // namespace alphabp
