#pragma once

#include <vector>

#include "attribmkt/types.hpp"

namespace attribmkt {

/// One Givens factor acting on the coordinate pair (i, j), 0-based, i < j.
struct GivensAngle {
  int i = 0;
  int j = 1;
  double theta = 0.0;
};

/// Ordered Givens parameterization of a K x K rotation. The stored order is
/// the composition order; factors apply by left-multiplication, the
/// canonical layout being lexicographically ascending (i, j).
struct RotationParams {
  int dimension = 0;
  std::vector<GivensAngle> angles;

  void validate() const;  // 0 <= i < j < K, theta in (-pi, pi]
};

/// K x K Givens rotation: identity except rows/columns i and j, where the
/// block is [[cos, sin], [-sin, cos]]. Orthogonal with determinant one and
/// givens(i,j,theta)^-1 = givens(i,j,-theta).
Matrix givens(int i, int j, double theta, int dimension);

/// Product of the Givens factors in stored order (left-multiplication).
/// Empty parameter lists give the identity; factors do not commute, so the
/// order is part of the parameterization.
Matrix compose_u(const RotationParams& params);

/// Shrinkage weights alpha_k = gamma_k / (1 + gamma_k) in [0, 1) and their
/// complements beta_k = 1 - alpha_k.
struct ShrinkageWeights {
  Vector alphas;
  Vector betas;

  static ShrinkageWeights from_gamma(const Vector& gamma);
};

/// Applies M^-1 = I - sum_k alpha_k s_k s_k' for orthonormal columns S:
/// identity on the orthogonal complement, scaling by beta_k along s_k.
/// Rejects S whose Gram matrix deviates from the identity by more than 1e-8.
Vector minv_apply(const Vector& alphas, const Matrix& loadings, const Vector& v);

struct AngleRecovery {
  double theta = 0.0;          // least-squares angle in (-pi/2, pi/2]
  double theta_alt = 0.0;      // the +pi/2 branch, same normalization
  double residual = 0.0;       // | ||r|| - |beta_d| ||v|| |
};

/// Closed-form least-squares recovery of a pair angle from the 2-vector of
/// pair components before (v) and after (h) the M^-1 action:
///   r = h - beta_s v,  u = J(v)^-1 r / beta_d,  theta = atan2(u_2, u_1)/2,
/// with beta_s = (beta_p + beta_q)/2 and beta_d = (beta_p - beta_q)/2.
/// The recovered angle is identified modulo pi (the map depends on 2 theta);
/// theta_alt reports the quarter-turn branch. Requires beta_p != beta_q and
/// v != 0.
AngleRecovery recover_angle(const Eigen::Vector2d& v, const Eigen::Vector2d& h, double beta_p,
                            double beta_q);

/// Forward map of the pair block: h = [beta_s I + beta_d T(theta)] v with
/// T(theta) = [[cos 2theta, sin 2theta], [sin 2theta, -cos 2theta]].
Eigen::Vector2d pair_forward(const Eigen::Vector2d& v, double beta_p, double beta_q, double theta);

}  // namespace attribmkt
