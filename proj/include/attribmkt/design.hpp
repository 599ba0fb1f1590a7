#pragma once

#include <optional>
#include <vector>

#include "attribmkt/pricing.hpp"

namespace attribmkt {

/// An optimal-design result in attribute space. The orientation d is a unit
/// vector in the gamma-rescaled (hat) space, the intensity t its length, and
/// loadings r the raw per-attribute coefficients r_k = t d_k / sqrt(gamma_k).
/// Attribute cost is quadratic in the hat norm: cost(t) = (c/2) t^2.
struct DesignSolution {
  Vector orientation;                 // d, length K, ||d|| = 1 when t > 0
  double intensity = 0.0;             // t >= 0
  Vector loadings;                    // r, length K
  std::optional<Vector> allocation;   // y, unit length when present
  double net_profit = 0.0;
};

/// Optimal design orientation Gamma^{-3/2} b, normalized, with the sign
/// fixed so that b'd >= 0. Rejects b = 0.
Vector orientation_rule(const Vector& b, const Vector& gamma);

/// Closed-form monopoly design intensity
///   t* = sqrt(max{0, sqrt(-(1/(2 c phi)) B) - 1}),   B = sum_k b_k^2/gamma_k,
/// zero at or beyond the viability boundary c >= -B/(2 phi).
double monopoly_intensity(const Vector& b, const Vector& gamma, double c, double phi);

/// Same closed form parameterized directly by B.
double monopoly_intensity_reduced(double effective_b2, double c, double phi);

/// One-attribute optimal length ||s||* = sqrt((sqrt(-b^2/(2 c phi)) - 1)/gamma)
/// when c < -b^2/(2 phi), else 0.
double one_attribute_norm(double b, double gamma, double c, double phi);

/// Reduced monopoly net objective -(1/4phi) B t^2/(1+t^2) - (c/2) t^2.
/// monopoly_intensity maximizes this in t.
double reduced_monopoly_objective(double effective_b2, double c, double phi, double t);

/// Inputs for the two-attribute pair analysis: norms squared d = ||s_i||^2,
/// f = ||s_j||^2 and the inner product s_i's_j (within [0, sqrt(d f)]).
struct PairParams {
  double b_i, b_j;
  double gamma_i, gamma_j;
  double norm_sq_i, norm_sq_j;  // d, f
  double inner;                 // s_i' s_j
  double phi;

  void validate() const;
};

/// The {i,j}-pair contribution to monopoly expected profit, computed from
/// the 2x2 block of (Gamma^-1 + S'S)^-1:
///   EPi_ij = -(1/4phi) [ delta_p'delta_p - w' A^-1 w ],
/// with A = [[1/gamma_i + d, inner], [inner, 1/gamma_j + f]] and
/// w = (b_i d + b_j inner, b_i inner + b_j f).
double pairwise_profit(const PairParams& params);

/// Analytic derivative of pairwise_profit with respect to the inner product.
/// Strictly positive over [0, sqrt(df)) when the attribute lengths stand in
/// the design-rule proportion ||s_k|| ~ b_k/gamma_k; with badly mismatched
/// lengths the sign can flip (aligning a long, weakly valued attribute with
/// a short, strongly valued one raises competition faster than utility).
double alignment_gradient(const PairParams& params);

/// The pair profit as typeset in the source expansion (kept as a diagnostic;
/// it disagrees with the block construction above for generic inputs).
double pairwise_profit_typeset(const PairParams& params);

/// Reduced parallel-attribute monopoly profit -(1/4phi)(b'r)^2/(1 + r'Gamma r).
double monopoly_aligned_profit(const Vector& b, const Vector& gamma, const Vector& r, double phi);

/// Assignment of each attribute to exactly one owning firm.
struct ExclusivityPartition {
  int n_firms = 0;
  std::vector<int> owner;  // length K, values in [0, n_firms)

  void validate(int n_attrs) const;
};

struct ExclusivityEquilibrium {
  std::vector<DesignSolution> designs;  // one per firm, loadings over all K
  PriceEquilibrium pricing;
};

/// Stage-1 designs and stage-2 prices under attribute exclusivity. The
/// problem decouples by firm: each firm applies the orientation rule on its
/// own attribute set with intensity from the monopoly closed form, and with
/// the resulting diagonal interaction matrix prices satisfy
///   q_n = delta_n / (2 (1 + sum_{k in A_n} gamma_k r_nk^2)),
///   p_n = -delta_n / (2 phi).
/// A firm that owns no attributes sells a pure-noise good at zero design.
ExclusivityEquilibrium exclusivity_equilibrium(const ExclusivityPartition& partition,
                                               const Vector& b, const Vector& gamma, double c,
                                               double phi);

/// LHS of the symmetric non-exclusive design first-order condition in u = t^2:
///   -(1/(c phi)) B (3(N-1)u + 2 - N(N-1)^2 u^3) / ((1+Nu)^2 (2+(N-1)u)^3),
/// which equals 1/2 at the optimum.
double symmetric_foc_lhs(double u, double effective_b2, double c, double phi, int n_firms);

/// Per-firm profit on the symmetric design path at intensity t, net of cost.
double reduced_symmetric_objective(double effective_b2, double c, double phi, int n_firms,
                                   double t);

/// Symmetric non-exclusive equilibrium intensity: the unique positive root of
/// the FOC above (bracketing + bisection), or 0 when c >= -B/(2 phi).
/// At N = 1 the root coincides with the monopoly closed form.
double symmetric_intensity(const Vector& b, const Vector& gamma, double c, double phi,
                           int n_firms);
double symmetric_intensity_reduced(double effective_b2, double c, double phi, int n_firms);

/// Symmetric-equilibrium per-firm price, quantity and profit at intensity t.
struct SymmetricOutcome {
  double intensity = 0.0;
  double price = 0.0;
  double quantity = 0.0;
  double gross_profit = 0.0;
  double net_profit = 0.0;
};
SymmetricOutcome symmetric_competition_outcome(double effective_b2, double c, double phi,
                                               int n_firms);

/// Full monopoly design: orientation rule plus closed-form intensity,
/// loadings and net profit.
DesignSolution monopoly_design(const Vector& b, const Vector& gamma, double c, double phi);

}  // namespace attribmkt
