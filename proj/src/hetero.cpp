#include "attribmkt/hetero.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numeric>

#include "attribmkt/scalar_opt.hpp"

namespace attribmkt {

namespace {

// Goods' unit attribute profiles as rows, at angles t1, t2 in the plane.
Matrix rows_at_angles(double t1, double t2) {
  Matrix s(2, 2);
  s << std::cos(t1), std::sin(t1), std::cos(t2), std::sin(t2);
  return s;
}

ConsumerMix with_loadings(const ConsumerMix& base, Matrix loadings) {
  ConsumerMix mix = base;
  mix.loadings = std::move(loadings);
  return mix;
}

double duopoly_firm_profit(const ConsumerMix& base, double t1, double t2, int firm) {
  const ConsumerMix mix = with_loadings(base, rows_at_angles(t1, t2));
  const PriceEquilibrium eq = mixed_bertrand_equilibrium(mix);
  return eq.profits(firm);
}

}  // namespace

void ConsumerMix::validate() const {
  require(mu >= 0.0 && mu <= 1.0, "ConsumerMix: mu must lie in [0,1]");
  require(phi < 0.0, "ConsumerMix: phi must be < 0");
  const auto k = loadings.cols();
  require(b1.size() == k && b2.size() == k, "ConsumerMix: taste vector length != n_attrs");
  require(gamma1.size() == k && gamma2.size() == k, "ConsumerMix: gamma length != n_attrs");
  require((gamma1.array() > 0.0).all() && (gamma2.array() > 0.0).all(),
          "ConsumerMix: attribute weights must be > 0");
}

FactorStructure ConsumerMix::consumer_structure(int which) const {
  return FactorStructure(loadings, which == 1 ? gamma1 : gamma2, 1.0);
}

Vector ConsumerMix::consumer_delta(int which) const {
  return loadings * (which == 1 ? b1 : b2);
}

MixedSigma mixed_sigma(const ConsumerMix& mix) {
  mix.validate();
  const Vector effective = mix.mu * mix.gamma1 + (1.0 - mix.mu) * mix.gamma2;
  MixedSigma out;
  if ((effective.array() > 0.0).all()) {
    const FactorStructure fs(mix.loadings, effective, 1.0);
    out.sigma = sigma_dense(fs);
    out.inverse = sigma_inverse(fs);
  } else {
    // mu at an endpoint can zero out a weight; fall back to a dense solve.
    const int n = static_cast<int>(mix.loadings.rows());
    out.sigma = Matrix::Identity(n, n) +
                mix.loadings * effective.asDiagonal() * mix.loadings.transpose();
    out.inverse = out.sigma.llt().solve(Matrix::Identity(n, n));
  }
  return out;
}

AggregateDemand aggregate_demand(const ConsumerMix& mix) {
  mix.validate();
  AggregateDemand out;
  const Matrix w1 = sigma_inverse(mix.consumer_structure(1));
  const Matrix w2 = sigma_inverse(mix.consumer_structure(2));
  out.slope = mix.mu * w1 + (1.0 - mix.mu) * w2;
  out.intercept = mix.mu * (w1 * mix.consumer_delta(1)) + (1.0 - mix.mu) * (w2 * mix.consumer_delta(2));
  return out;
}

double mixed_monopoly_profit(const ConsumerMix& mix) {
  const AggregateDemand agg = aggregate_demand(mix);
  return -0.25 / mix.phi * agg.intercept.dot(agg.slope.llt().solve(agg.intercept));
}

double mixed_monopoly_profit(const ConsumerMix& mix, const Vector& s1, const Vector& s2) {
  require(s1.size() == s2.size() && s1.size() >= 1, "mixed_monopoly_profit: column size mismatch");
  Matrix loadings(s1.size(), 2);
  loadings.col(0) = s1;
  loadings.col(1) = s2;
  return mixed_monopoly_profit(with_loadings(mix, std::move(loadings)));
}

PriceEquilibrium mixed_bertrand_equilibrium(const ConsumerMix& mix) {
  mix.validate();
  const int n = static_cast<int>(mix.loadings.rows());
  const double phi = mix.phi;

  PriceEquilibrium eq;
  eq.regime = PricingRegime::SingleProductIterative;
  eq.prices = Vector::Zero(n);
  eq.quantities = Vector::Zero(n);
  eq.profits = Vector::Zero(n);

  std::vector<int> act(n);
  std::iota(act.begin(), act.end(), 0);
  for (int round = 0; round <= n; ++round) {
    if (act.empty()) break;
    const int m = static_cast<int>(act.size());
    Matrix sub(m, static_cast<int>(mix.loadings.cols()));
    for (int i = 0; i < m; ++i) sub.row(i) = mix.loadings.row(act[i]);
    const AggregateDemand agg = aggregate_demand(with_loadings(mix, sub));

    Matrix lhs = agg.slope;
    lhs.diagonal() += agg.slope.diagonal();
    const Vector p = -(1.0 / phi) * lhs.llt().solve(agg.intercept);
    const Vector q = -phi * agg.slope.diagonal().cwiseProduct(p);

    std::vector<int> survivors;
    for (int i = 0; i < m; ++i)
      if (q(i) > 0.0) survivors.push_back(act[i]);
    if (survivors.size() == act.size()) {
      for (int i = 0; i < m; ++i) {
        eq.prices(act[i]) = p(i);
        eq.quantities(act[i]) = q(i);
      }
      eq.profits = eq.prices.cwiseProduct(eq.quantities);
      eq.active = act;
      return eq;
    }
    act = std::move(survivors);
  }
  eq.active = act;
  return eq;
}

ConsumerMix swapped_mix(double b_high, double b_low, double g_high, double g_low, double phi,
                        double mu) {
  require(b_high > 0.0 && b_low > 0.0 && g_high > 0.0 && g_low > 0.0,
          "swapped_mix: parameters must be > 0");
  ConsumerMix mix;
  mix.mu = mu;
  mix.phi = phi;
  mix.b1 = Vector(2);
  mix.b1 << b_high, b_low;
  mix.b2 = Vector(2);
  mix.b2 << b_low, b_high;
  mix.gamma1 = Vector(2);
  mix.gamma1 << g_high, g_low;
  mix.gamma2 = Vector(2);
  mix.gamma2 << g_low, g_high;
  mix.loadings = Matrix::Identity(2, 2);
  mix.validate();
  return mix;
}

double rho_star_monopoly(double b_high, double b_low, double g_high, double g_low, double phi,
                         double mu, const RhoSearchOptions& opts) {
  const ConsumerMix base = swapped_mix(b_high, b_low, g_high, g_low, phi, mu);
  const auto profit = [&](double rho) {
    Matrix s(2, 2);
    s << 1.0, rho, 0.0, std::sqrt(std::max(0.0, 1.0 - rho * rho));
    return mixed_monopoly_profit(with_loadings(base, std::move(s)));
  };

  const int last = opts.grid_points - 1;
  int best = 0;
  double fbest = profit(0.0);
  for (int i = 1; i <= last; ++i) {
    const double value = profit(static_cast<double>(i) / last);
    if (value > fbest) {
      fbest = value;
      best = i;
    }
  }
  const double lo = static_cast<double>(std::max(0, best - 1)) / last;
  const double hi = static_cast<double>(std::min(last, best + 1)) / last;
  double rho = golden_section_max(profit, lo, hi, opts.refine_tol * 1e-2);
  // Endpoints win ties so aligned optima report exactly 1.
  if (profit(1.0) >= profit(rho)) rho = 1.0;
  if (profit(0.0) > profit(rho)) rho = 0.0;
  return rho;
}

DuopolyAngleResult rho_star_duopoly(double b_high, double b_low, double g_high, double g_low,
                                    double phi, double mu, const RhoSearchOptions& opts) {
  require(std::abs(mu - 0.5) < 1e-12,
          "rho_star_duopoly: the symmetric reduction requires mu = 1/2");
  const ConsumerMix base = swapped_mix(b_high, b_low, g_high, g_low, phi, mu);

  // Symmetrized best response: the rival sits mirrored at pi/4 - psi and the
  // firm's reply pins the next half-angle.
  const auto respond = [&](double psi) {
    const auto objective = [&](double theta) {
      return duopoly_firm_profit(base, theta, M_PI / 4.0 - psi, 0);
    };
    const int coarse = 32;
    int best = 0;
    double fbest = objective(0.0);
    for (int i = 1; i <= coarse; ++i) {
      const double theta = i * (M_PI / 2.0) / coarse;
      const double value = objective(theta);
      if (value > fbest) {
        fbest = value;
        best = i;
      }
    }
    const double step = (M_PI / 2.0) / coarse;
    const double lo = std::max(0.0, best * step - step);
    const double hi = std::min(M_PI / 2.0, best * step + step);
    return golden_section_max(objective, lo, hi, 1e-12) - M_PI / 4.0;
  };

  DuopolyAngleResult out;
  double psi = 1e-4;  // deterministic nudge off the (possibly unstable) diagonal
  for (out.iterations = 0; out.iterations < opts.max_iterations; ++out.iterations) {
    const double next = respond(psi);
    const double change = std::abs(next - psi);
    psi = next;
    if (change < opts.angle_tol) {
      out.converged = true;
      break;
    }
    if (std::abs(psi) < 1e-7 && change < 1e-6) {
      psi = 0.0;  // flowed back to the aligned point
      out.converged = true;
      break;
    }
  }
  if (!out.converged)
    throw numerical_error("rho_star_duopoly: best-response iteration did not converge");
  out.half_angle = psi;
  out.rho_star = std::cos(2.0 * psi);
  if (out.rho_star > 1.0 - 1e-9) out.rho_star = 1.0;
  return out;
}

void RhoGrid::validate() const {
  require(static_cast<Eigen::Index>(b_ratios.size()) == cells.rows() &&
              static_cast<Eigen::Index>(g_ratios.size()) == cells.cols(),
          "RhoGrid: cell matrix shape mismatch");
  require((cells.array() >= 0.0).all() && (cells.array() <= 1.0).all(),
          "RhoGrid: cells must lie in [0,1]");
}

}  // namespace attribmkt
