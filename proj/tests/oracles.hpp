// Test-only oracles, independent of the library's solve paths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "attribmkt/demand_core.hpp"
#include "attribmkt/rng.hpp"

namespace attribmkt::testing {

/// Dense inverse through partial-pivot LU, independent of the Woodbury path.
inline Matrix dense_inverse(const Matrix& m) {
  return Eigen::PartialPivLU<Matrix>(m).inverse();
}

/// Iterated grid-refinement maximizer over [lo, hi]; no golden-section
/// machinery shared with the library. Localizes a maximum of a unimodal (or
/// sampled-global) objective to roughly (hi-lo) * 4^-rounds.
inline double grid_refine_max(const std::function<double(double)>& f, double lo, double hi,
                              int points_per_round = 81, int rounds = 14) {
  double best = lo;
  double fbest = f(lo);
  for (int round = 0; round < rounds; ++round) {
    const double step = (hi - lo) / (points_per_round - 1.0);
    best = lo;
    fbest = f(lo);
    for (int i = 1; i < points_per_round; ++i) {
      const double x = lo + i * step;
      const double value = f(x);
      if (value > fbest) {
        fbest = value;
        best = x;
      }
    }
    lo = std::max(lo, best - step);
    hi = std::min(hi, best + step);
  }
  return best;
}

/// Central-difference derivative.
inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Random factor structure with gamma in (0, gamma_max] and N(0,1) loadings.
inline FactorStructure random_factor_structure(Rng& rng, int max_goods = 50, int max_attrs = 10,
                                               double gamma_max = 10.0, double rho = 1.0) {
  const int n = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_goods - 1));
  const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_attrs));
  Matrix s(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) s(i, j) = rng.normal();
  Vector gamma(k);
  for (int j = 0; j < k; ++j) gamma(j) = gamma_max * rng.next_unit();
  return FactorStructure(std::move(s), std::move(gamma), rho);
}

}  // namespace attribmkt::testing
