#pragma once

#include "attribmkt/types.hpp"

namespace attribmkt {

/// Factor representation of the market interaction matrix,
///
///   Sigma = rho * I + S * Gamma * S',
///
/// with N goods, K attributes, loadings S (N x K, columns s_k), positive
/// attribute weights gamma and positive baseline rho. Positive definiteness
/// is automatic for any S once gamma > 0 and rho > 0. K = 0 is the
/// degenerate case Sigma = rho * I.
struct FactorStructure {
  int n_goods = 0;
  Matrix loadings;   // N x K
  Vector weights;    // K, all > 0
  double baseline = 1.0;

  FactorStructure() = default;
  FactorStructure(Matrix S, Vector gamma, double rho = 1.0);

  /// Sigma = rho * I with no factor term.
  static FactorStructure identity(int n, double rho = 1.0);

  int n_attrs() const { return static_cast<int>(loadings.cols()); }
  void validate() const;
};

/// Consumer-side primitives: attribute tastes b, price sensitivity phi < 0,
/// scalar attribute cost scale c > 0 and an optional good-level utility
/// shock v (empty means zero).
struct Preferences {
  Vector attr_weights;        // b, length K
  double price_sensitivity;   // phi < 0
  double attr_cost = 1.0;     // c > 0
  Vector noise;               // v, length N or empty

  Preferences() = default;
  Preferences(Vector b, double phi, double c = 1.0, Vector v = Vector());

  void validate() const;
};

/// Dense Sigma = rho*I + sum_k gamma_k s_k s_k'. Symmetric positive definite.
Matrix sigma_dense(const FactorStructure& fs);

/// Exact inverse through the K x K Woodbury identity,
///   Sigma^-1 = (1/rho) [ I - S (rho*Gamma^-1 + S'S)^-1 S' ],
/// solved by a symmetric factorization of the K x K core rather than an
/// explicit inversion.
Matrix sigma_inverse(const FactorStructure& fs);

/// Applies Sigma^-1 to a vector without forming the dense inverse.
Vector sigma_solve(const FactorStructure& fs, const Vector& rhs);

/// Good-level utilities delta = S b + v. Positivity is not enforced here;
/// pricing entry points check it where their closed forms require it.
Vector delta(const FactorStructure& fs, const Preferences& prefs);

/// True when every entry of delta is strictly positive.
bool delta_positive(const FactorStructure& fs, const Preferences& prefs);

/// Linear demand q = Sigma^-1 (delta + phi * p). Entries may be negative;
/// the pricing layer owns the shutdown handling.
Vector demand(const FactorStructure& fs, const Preferences& prefs, const Vector& prices);

/// Price Jacobian dq/dp = phi * Sigma^-1.
Matrix demand_jacobian(const FactorStructure& fs, const Preferences& prefs);

/// Orthonormalizes raw product characteristics X (N x K, full column rank)
/// into attributes Z spanning span(X), via a QR factorization. Column signs
/// are fixed so each column's largest-magnitude entry is positive. Throws
/// validation_error when the numerical rank of X falls below K (tolerance
/// 1e-10 relative to the largest singular value).
Matrix attributes_from_characteristics(const Matrix& X);

/// Recovers a FactorStructure from a known SPD interaction matrix by
/// spectral decomposition: eigenpairs with lambda_i - rho above tolerance
/// become factors with gamma_i = lambda_i - rho; the rest are clipped, so
/// reconstruction is exact only when every eigenvalue exceeds rho.
FactorStructure spectral_factorization(const Matrix& sigma, double rho = 1.0);

}  // namespace attribmkt
