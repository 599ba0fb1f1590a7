#include "attribmkt/rotation.hpp"

#include <cmath>

namespace attribmkt {

void RotationParams::validate() const {
  require(dimension >= 1, "RotationParams: dimension must be >= 1");
  for (const auto& angle : angles) {
    require(angle.i >= 0 && angle.i < angle.j && angle.j < dimension,
            "RotationParams: need 0 <= i < j < K");
    require(angle.theta > -M_PI && angle.theta <= M_PI,
            "RotationParams: theta must lie in (-pi, pi]");
  }
}

Matrix givens(int i, int j, double theta, int dimension) {
  require(i >= 0 && i < j && j < dimension, "givens: need 0 <= i < j < K");
  Matrix g = Matrix::Identity(dimension, dimension);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  g(i, i) = c;
  g(j, j) = c;
  g(i, j) = s;
  g(j, i) = -s;
  return g;
}

Matrix compose_u(const RotationParams& params) {
  params.validate();
  Matrix u = Matrix::Identity(params.dimension, params.dimension);
  for (const auto& angle : params.angles) {
    u = givens(angle.i, angle.j, angle.theta, params.dimension) * u;
  }
  return u;
}

ShrinkageWeights ShrinkageWeights::from_gamma(const Vector& gamma) {
  require((gamma.array() > 0.0).all(), "ShrinkageWeights: gamma must be > 0");
  ShrinkageWeights w;
  w.alphas = gamma.array() / (1.0 + gamma.array());
  w.betas = 1.0 - w.alphas.array();
  return w;
}

Vector minv_apply(const Vector& alphas, const Matrix& loadings, const Vector& v) {
  require(alphas.size() == loadings.cols(), "minv_apply: alphas length != n columns");
  require(v.size() == loadings.rows(), "minv_apply: vector length != n rows");
  require((alphas.array() >= 0.0).all() && (alphas.array() < 1.0).all(),
          "minv_apply: alphas must lie in [0,1)");
  const Matrix gram = loadings.transpose() * loadings;
  const double deviation =
      (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  require(deviation <= 1e-8, "minv_apply: loadings are not orthonormal");
  return v - loadings * (alphas.asDiagonal() * (loadings.transpose() * v));
}

Eigen::Vector2d pair_forward(const Eigen::Vector2d& v, double beta_p, double beta_q,
                             double theta) {
  const double beta_s = 0.5 * (beta_p + beta_q);
  const double beta_d = 0.5 * (beta_p - beta_q);
  const double c2 = std::cos(2.0 * theta);
  const double s2 = std::sin(2.0 * theta);
  Eigen::Matrix2d t;
  t << c2, s2, s2, -c2;
  return beta_s * v + beta_d * (t * v);
}

AngleRecovery recover_angle(const Eigen::Vector2d& v, const Eigen::Vector2d& h, double beta_p,
                            double beta_q) {
  const double beta_s = 0.5 * (beta_p + beta_q);
  const double beta_d = 0.5 * (beta_p - beta_q);
  const double v_norm_sq = v.squaredNorm();
  if (v_norm_sq <= 0.0) throw validation_error("recover_angle: singular J, pair component is zero");
  if (beta_d == 0.0) throw validation_error("recover_angle: degenerate pair, beta_p equals beta_q");

  const Eigen::Vector2d r = h - beta_s * v;
  // u = J(v)^-1 r / beta_d, with J(v)^-1 = [[v_p, -v_q], [v_q, v_p]] / ||v||^2.
  const double u1 = (v(0) * r(0) - v(1) * r(1)) / (v_norm_sq * beta_d);
  const double u2 = (v(1) * r(0) + v(0) * r(1)) / (v_norm_sq * beta_d);

  AngleRecovery out;
  out.theta = 0.5 * std::atan2(u2, u1);  // already within (-pi/2, pi/2]
  out.theta_alt = out.theta > 0.0 ? out.theta - M_PI / 2.0 : out.theta + M_PI / 2.0;
  out.residual = std::abs(r.norm() - std::abs(beta_d) * std::sqrt(v_norm_sq));
  return out;
}

}  // namespace attribmkt
