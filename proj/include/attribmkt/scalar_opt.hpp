#pragma once

#include <cmath>
#include <functional>

#include "attribmkt/types.hpp"

namespace attribmkt {

/// Golden-section maximization of a unimodal f on [lo, hi].
/// Returns the abscissa of the maximum to within tol.
inline double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                 double tol = 1e-10, int max_iter = 200) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

/// Bisection for a root of g on [lo, hi]; requires a sign change across the
/// bracket. Shrinks the interval below xtol and returns its midpoint.
inline double bisect_root(const std::function<double(double)>& g, double lo, double hi,
                          double xtol = 1e-12, int max_iter = 400) {
  double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  require(glo * ghi < 0.0, "bisect_root: no sign change on bracket");
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gmid = g(mid);
    if (gmid == 0.0) return mid;
    if (glo * gmid < 0.0) {
      hi = mid;
    } else {
      lo = mid;
      glo = gmid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Grows hi geometrically from hi0 until g(hi) < 0, then bisects.
/// Intended for decreasing-tail functions with g(0+) > 0.
inline double bisect_root_growing(const std::function<double(double)>& g, double lo, double hi0,
                                  double xtol = 1e-12, double grow = 4.0, int max_grow = 200) {
  double hi = hi0;
  int i = 0;
  while (g(hi) >= 0.0) {
    hi *= grow;
    if (++i > max_grow) throw numerical_error("bisect_root_growing: no sign change found");
  }
  return bisect_root(g, lo, hi, xtol);
}

}  // namespace attribmkt
