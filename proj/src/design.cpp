#include "attribmkt/design.hpp"

#include <cmath>

#include "attribmkt/scalar_opt.hpp"

namespace attribmkt {

namespace {

double effective_b2(const Vector& b, const Vector& gamma) {
  require(b.size() == gamma.size(), "design: b and gamma length mismatch");
  require((gamma.array() > 0.0).all(), "design: gamma must be > 0");
  return (b.array().square() / gamma.array()).sum();
}

void check_cost_phi(double c, double phi) {
  require(c > 0.0, "design: cost scale c must be > 0");
  require(phi < 0.0, "design: phi must be < 0");
}

}  // namespace

Vector orientation_rule(const Vector& b, const Vector& gamma) {
  require(b.size() == gamma.size() && b.size() >= 1, "orientation_rule: dimension mismatch");
  require((gamma.array() > 0.0).all(), "orientation_rule: gamma must be > 0");
  Vector d = b.array() * gamma.array().pow(-1.5);
  const double norm = d.norm();
  require(norm > 0.0, "orientation_rule: b must be nonzero");
  d /= norm;
  if (b.dot(d) < 0.0) d = -d;
  return d;
}

double monopoly_intensity_reduced(double effective_b2, double c, double phi) {
  check_cost_phi(c, phi);
  const double inner = -effective_b2 / (2.0 * c * phi);
  if (!(inner > 1.0)) return 0.0;
  return std::sqrt(std::sqrt(inner) - 1.0);
}

double monopoly_intensity(const Vector& b, const Vector& gamma, double c, double phi) {
  return monopoly_intensity_reduced(effective_b2(b, gamma), c, phi);
}

double one_attribute_norm(double b, double gamma, double c, double phi) {
  check_cost_phi(c, phi);
  require(gamma > 0.0, "one_attribute_norm: gamma must be > 0");
  const double inner = -b * b / (2.0 * c * phi);
  if (!(inner > 1.0)) return 0.0;
  return std::sqrt((std::sqrt(inner) - 1.0) / gamma);
}

double reduced_monopoly_objective(double effective_b2, double c, double phi, double t) {
  const double u = t * t;
  return -0.25 / phi * effective_b2 * u / (1.0 + u) - 0.5 * c * u;
}

void PairParams::validate() const {
  require(gamma_i > 0.0 && gamma_j > 0.0, "pairwise: gamma must be > 0");
  require(norm_sq_i >= 0.0 && norm_sq_j >= 0.0, "pairwise: squared norms must be >= 0");
  require(phi < 0.0, "pairwise: phi must be < 0");
  const double bound = std::sqrt(norm_sq_i * norm_sq_j);
  require(inner >= 0.0 && inner <= bound * (1.0 + 1e-12) + 1e-300,
          "pairwise: inner product violates the Cauchy-Schwarz bound");
}

double pairwise_profit(const PairParams& p) {
  p.validate();
  const double a = 1.0 / p.gamma_i + p.norm_sq_i;
  const double e = 1.0 / p.gamma_j + p.norm_sq_j;
  const double x = p.inner;
  const double det = a * e - x * x;
  const double w1 = p.b_i * p.norm_sq_i + p.b_j * x;
  const double w2 = p.b_i * x + p.b_j * p.norm_sq_j;
  const double quad = (e * w1 * w1 - 2.0 * x * w1 * w2 + a * w2 * w2) / det;
  const double gross = p.b_i * p.b_i * p.norm_sq_i + p.b_j * p.b_j * p.norm_sq_j +
                       2.0 * p.b_i * p.b_j * x - quad;
  return -0.25 / p.phi * gross;
}

double alignment_gradient(const PairParams& p) {
  p.validate();
  const double a = 1.0 / p.gamma_i + p.norm_sq_i;
  const double e = 1.0 / p.gamma_j + p.norm_sq_j;
  const double x = p.inner;
  const double det = a * e - x * x;
  const double w1 = p.b_i * p.norm_sq_i + p.b_j * x;
  const double w2 = p.b_i * x + p.b_j * p.norm_sq_j;
  const double quad_num = e * w1 * w1 - 2.0 * x * w1 * w2 + a * w2 * w2;
  // d/dx of quad_num, with dw1/dx = b_j, dw2/dx = b_i.
  const double quad_num_dx = 2.0 * e * w1 * p.b_j - 2.0 * w1 * w2 -
                             2.0 * x * (p.b_j * w2 + p.b_i * w1) + 2.0 * a * w2 * p.b_i;
  const double quad_dx = (quad_num_dx * det + 2.0 * x * quad_num) / (det * det);
  return -0.25 / p.phi * (2.0 * p.b_i * p.b_j - quad_dx);
}

double pairwise_profit_typeset(const PairParams& p) {
  p.validate();
  const double x = p.inner;
  const double det = (1.0 / p.gamma_i + p.norm_sq_i) * (1.0 / p.gamma_j + p.norm_sq_j) - x * x;
  const double num =
      p.b_i * p.b_i * (p.norm_sq_j / p.gamma_i + p.norm_sq_i * (1.0 / p.gamma_i + 1.0)) +
      p.b_j * p.b_j * (p.norm_sq_i / p.gamma_j + p.norm_sq_j * (1.0 / p.gamma_j + 1.0)) +
      2.0 * p.b_i * p.b_j * (1.0 / p.gamma_i + 1.0 / p.gamma_j + 1.0) * x +
      (p.b_i * p.gamma_j + p.b_j * p.gamma_i) * x * x;
  return -0.25 / p.phi * num / det;
}

double monopoly_aligned_profit(const Vector& b, const Vector& gamma, const Vector& r, double phi) {
  require(b.size() == gamma.size() && b.size() == r.size(), "aligned_profit: dimension mismatch");
  require((gamma.array() > 0.0).all(), "aligned_profit: gamma must be > 0");
  require((r.array() >= 0.0).all(), "aligned_profit: loadings must be >= 0");
  require(phi < 0.0, "aligned_profit: phi must be < 0");
  const double br = b.dot(r);
  const double rgr = (gamma.array() * r.array().square()).sum();
  return -0.25 / phi * br * br / (1.0 + rgr);
}

void ExclusivityPartition::validate(int n_attrs) const {
  require(n_firms >= 1, "exclusivity: need at least one firm");
  require(static_cast<int>(owner.size()) == n_attrs, "exclusivity: owner list length != K");
  for (const int n : owner)
    require(n >= 0 && n < n_firms, "exclusivity: owner index out of range");
}

ExclusivityEquilibrium exclusivity_equilibrium(const ExclusivityPartition& partition,
                                               const Vector& b, const Vector& gamma, double c,
                                               double phi) {
  const int k_total = static_cast<int>(b.size());
  partition.validate(k_total);
  require(b.size() == gamma.size(), "exclusivity: b and gamma length mismatch");
  require((gamma.array() > 0.0).all(), "exclusivity: gamma must be > 0");
  check_cost_phi(c, phi);

  ExclusivityEquilibrium out;
  out.designs.resize(partition.n_firms);
  Vector delta_n = Vector::Zero(partition.n_firms);
  Vector sigma_diag = Vector::Ones(partition.n_firms);

  for (int n = 0; n < partition.n_firms; ++n) {
    std::vector<int> owned;
    for (int k = 0; k < k_total; ++k)
      if (partition.owner[k] == n) owned.push_back(k);

    DesignSolution& design = out.designs[n];
    design.orientation = Vector::Zero(k_total);
    design.loadings = Vector::Zero(k_total);
    if (owned.empty()) continue;  // pure-noise good, t = 0

    Vector b_own(owned.size()), g_own(owned.size());
    for (size_t i = 0; i < owned.size(); ++i) {
      b_own(i) = b(owned[i]);
      g_own(i) = gamma(owned[i]);
    }
    const Vector d_own = orientation_rule(b_own, g_own);
    const double t = monopoly_intensity(b_own, g_own, c, phi);
    design.intensity = t;
    for (size_t i = 0; i < owned.size(); ++i) {
      design.orientation(owned[i]) = d_own(i);
      design.loadings(owned[i]) = t * d_own(i) / std::sqrt(g_own(i));
    }
    const double b2 = effective_b2(b_own, g_own);
    design.net_profit = reduced_monopoly_objective(b2, c, phi, t);

    delta_n(n) = b.dot(design.loadings);
    sigma_diag(n) += (gamma.array() * design.loadings.array().square()).sum();
  }

  PriceEquilibrium& eq = out.pricing;
  eq.regime = PricingRegime::SingleProductClosedForm;
  eq.prices = -delta_n / (2.0 * phi);
  eq.quantities = delta_n.array() / (2.0 * sigma_diag.array());
  eq.profits = eq.prices.cwiseProduct(eq.quantities);
  for (int n = 0; n < partition.n_firms; ++n)
    if (eq.quantities(n) > 0.0) eq.active.push_back(n);
  return out;
}

double symmetric_foc_lhs(double u, double effective_b2, double c, double phi, int n_firms) {
  require(n_firms >= 1, "symmetric_foc: need at least one firm");
  const double m = n_firms - 1.0;
  const double num = 3.0 * m * u + 2.0 - n_firms * m * m * u * u * u;
  const double den = std::pow(1.0 + n_firms * u, 2) * std::pow(2.0 + m * u, 3);
  return -(1.0 / (c * phi)) * effective_b2 * num / den;
}

double reduced_symmetric_objective(double effective_b2, double c, double phi, int n_firms,
                                   double t) {
  const double u = t * t;
  const double m = n_firms - 1.0;
  const double share = u * (1.0 + m * u) / ((1.0 + n_firms * u) * std::pow(2.0 + m * u, 2));
  return -(1.0 / phi) * effective_b2 * share - 0.5 * c * u;
}

double symmetric_intensity_reduced(double effective_b2, double c, double phi, int n_firms) {
  check_cost_phi(c, phi);
  require(n_firms >= 1, "symmetric_intensity: need at least one firm");
  if (!(c < -effective_b2 / (2.0 * phi))) return 0.0;
  const auto gap = [&](double u) {
    return symmetric_foc_lhs(u, effective_b2, c, phi, n_firms) - 0.5;
  };
  const double u = bisect_root_growing(gap, 0.0, 1.0, 1e-12);
  return std::sqrt(u);
}

double symmetric_intensity(const Vector& b, const Vector& gamma, double c, double phi,
                           int n_firms) {
  return symmetric_intensity_reduced(effective_b2(b, gamma), c, phi, n_firms);
}

SymmetricOutcome symmetric_competition_outcome(double effective_b2, double c, double phi,
                                               int n_firms) {
  SymmetricOutcome out;
  out.intensity = symmetric_intensity_reduced(effective_b2, c, phi, n_firms);
  if (out.intensity == 0.0) return out;
  const double u = out.intensity * out.intensity;
  const double m = n_firms - 1.0;
  const double beta = std::sqrt(effective_b2) * out.intensity;  // b-hat dot r-hat
  out.price = -beta / (phi * (2.0 + m * u));
  out.quantity = beta * (1.0 + m * u) / ((1.0 + n_firms * u) * (2.0 + m * u));
  out.gross_profit = out.price * out.quantity;
  out.net_profit = out.gross_profit - 0.5 * c * u;
  return out;
}

DesignSolution monopoly_design(const Vector& b, const Vector& gamma, double c, double phi) {
  DesignSolution design;
  design.orientation = orientation_rule(b, gamma);
  design.intensity = monopoly_intensity(b, gamma, c, phi);
  design.loadings = design.intensity * design.orientation.array() / gamma.array().sqrt();
  if (design.intensity == 0.0) design.loadings.setZero();
  design.net_profit = reduced_monopoly_objective(effective_b2(b, gamma), c, phi, design.intensity);
  return design;
}

}  // namespace attribmkt
