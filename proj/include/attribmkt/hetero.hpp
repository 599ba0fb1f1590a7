#pragma once

#include "attribmkt/pricing.hpp"

namespace attribmkt {

/// Two representative consumers sharing the attribute loadings S but with
/// their own taste vectors and attribute weights; mu is the weight of
/// consumer 1 in the aggregate.
struct ConsumerMix {
  double mu = 0.5;
  Vector b1, b2;          // length K
  Vector gamma1, gamma2;  // length K, > 0
  Matrix loadings;        // N x K shared
  double phi = -1.0;

  void validate() const;
  FactorStructure consumer_structure(int which) const;  // which in {1, 2}
  Vector consumer_delta(int which) const;
};

struct MixedSigma {
  Matrix sigma;
  Matrix inverse;
};

/// Combined interaction matrix I + mu sum_k gamma_1k s_k s_k'
/// + (1-mu) sum_k gamma_2k s_k s_k'. With shared loadings this is the factor
/// form with effective weights mu gamma_1 + (1-mu) gamma_2, so the inverse
/// goes through the same K x K Woodbury solve.
MixedSigma mixed_sigma(const ConsumerMix& mix);

/// Aggregate linear demand across consumers, q(p) = intercept + phi*slope*p:
///   slope = mu Sigma_1^-1 + (1-mu) Sigma_2^-1,
///   intercept = mu Sigma_1^-1 delta_1 + (1-mu) Sigma_2^-1 delta_2.
struct AggregateDemand {
  Matrix slope;
  Vector intercept;
};
AggregateDemand aggregate_demand(const ConsumerMix& mix);

/// Monopoly profit against the aggregate demand of the two consumers,
///   EPi = -(1/4phi) m' M^-1 m
/// with (m, M) the aggregate intercept and slope. Collapses to
/// -(1/4phi) delta' Sigma^-1 delta for identical consumers and to the
/// mu-weighted sum of per-consumer profits whenever delta is common.
double mixed_monopoly_profit(const ConsumerMix& mix);

/// Same, with the shared loadings replaced by the two explicit columns.
double mixed_monopoly_profit(const ConsumerMix& mix, const Vector& s1, const Vector& s2);

/// Bertrand equilibrium of single-product firms facing the aggregate demand,
/// with the same shutdown rule as the one-consumer solver.
PriceEquilibrium mixed_bertrand_equilibrium(const ConsumerMix& mix);

/// Swapped-taste mix for the horizontal-differentiation study: consumer 1
/// carries (b_H, b_L) and diag(g_H, g_L), consumer 2 the swap.
ConsumerMix swapped_mix(double b_high, double b_low, double g_high, double g_low, double phi,
                        double mu = 0.5);

struct RhoSearchOptions {
  int grid_points = 401;      // coarse scan resolution on [0, 1]
  double refine_tol = 1e-6;   // golden-section window
  int max_iterations = 500;   // duopoly best-response iterations
  double angle_tol = 1e-8;    // duopoly fixed-point tolerance
};

/// Monopoly equilibrium inner product between the two goods' unit attribute
/// profiles: argmax over rho in [0, 1] of the mixed monopoly profit, by
/// grid scan plus golden-section refinement. Exactly 1 when alignment is
/// globally optimal.
double rho_star_monopoly(double b_high, double b_low, double g_high, double g_low, double phi,
                         double mu = 0.5, const RhoSearchOptions& opts = RhoSearchOptions());

struct DuopolyAngleResult {
  double rho_star = 1.0;
  double half_angle = 0.0;  // psi; goods sit at pi/4 +- psi
  bool converged = false;
  int iterations = 0;
};

/// Symmetric best-response fixed point for two single-product firms, each
/// choosing its own good's unit attribute profile, priced on the aggregate
/// demand. Firms start aligned on the diagonal (rho = 1); the symmetrized
/// map psi -> BR(pi/4 - psi) - pi/4 is iterated from a small deterministic
/// perturbation so an unstable aligned point escapes to the stable
/// equilibrium. Requires mu = 1/2 (the symmetric reduction needs the
/// swapped-consumer structure).
DuopolyAngleResult rho_star_duopoly(double b_high, double b_low, double g_high, double g_low,
                                    double phi, double mu = 0.5,
                                    const RhoSearchOptions& opts = RhoSearchOptions());

/// Rectangular rho* sweep over taste and weight ratios.
struct RhoGrid {
  std::vector<double> b_ratios;   // axis 1
  std::vector<double> g_ratios;   // axis 2
  Matrix cells;                   // b_ratios.size() x g_ratios.size()

  void validate() const;  // all cells within [0, 1]
};

}  // namespace attribmkt
