#include "attribmkt/rotation.hpp"

#include <doctest.h>

#include "oracles.hpp"

using namespace attribmkt;
namespace oracle = attribmkt::testing;

TEST_CASE("givens factors") {
  CHECK(givens(0, 1, 0.0, 3).isIdentity(0.0));

  const Matrix quarter = givens(0, 1, M_PI / 2.0, 2);
  Matrix expected(2, 2);
  expected << 0.0, 1.0, -1.0, 0.0;
  CHECK((quarter - expected).cwiseAbs().maxCoeff() < 1e-15);

  const Matrix g = givens(1, 3, 0.7, 5);
  CHECK((g * givens(1, 3, -0.7, 5) - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(g.determinant() - 1.0) < 1e-12);
  CHECK_THROWS_AS(givens(2, 1, 0.1, 3), validation_error);
}

TEST_CASE("compose_u builds orthogonal products in stored order") {
  RotationParams empty;
  empty.dimension = 4;
  CHECK(compose_u(empty).isIdentity(0.0));

  RotationParams ab;
  ab.dimension = 3;
  ab.angles = {{0, 1, 0.4}, {0, 2, 1.1}};
  RotationParams ba;
  ba.dimension = 3;
  ba.angles = {{0, 2, 1.1}, {0, 1, 0.4}};
  CHECK((compose_u(ab) - compose_u(ba)).cwiseAbs().maxCoeff() > 1e-3);

  Rng rng(71);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 6);
    RotationParams params;
    params.dimension = k;
    for (int i = 0; i < k; ++i) {
      for (int j = i + 1; j < k; ++j) {
        params.angles.push_back({i, j, (rng.next_unit() * 2.0 - 1.0) * 0.999 * M_PI});
      }
    }
    const Matrix u = compose_u(params);
    CHECK((u.transpose() * u - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(u.determinant() - 1.0) < 1e-12);
  }
}

TEST_CASE("minv_apply acts as the shrinkage operator") {
  Rng rng(73);
  Matrix raw(6, 2);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 2; ++j) raw(i, j) = rng.normal();
  const Matrix s = attributes_from_characteristics(raw);
  Vector gamma(2);
  gamma << 0.8, 2.5;
  const ShrinkageWeights weights = ShrinkageWeights::from_gamma(gamma);

  // Identity on the orthogonal complement.
  Vector v(6);
  for (int i = 0; i < 6; ++i) v(i) = rng.normal();
  const Vector v_perp = v - s * (s.transpose() * v);
  CHECK((minv_apply(weights.alphas, s, v_perp) - v_perp).cwiseAbs().maxCoeff() < 1e-12);

  // Columns scale by beta_k.
  CHECK((minv_apply(weights.alphas, s, s.col(1)) - weights.betas(1) * s.col(1))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // Dense-inverse oracle on random vectors.
  Matrix m = Matrix::Identity(6, 6);
  for (int k = 0; k < 2; ++k) m += gamma(k) * s.col(k) * s.col(k).transpose();
  const Matrix dense = oracle::dense_inverse(m);
  for (int trial = 0; trial < 5; ++trial) {
    Vector x(6);
    for (int i = 0; i < 6; ++i) x(i) = rng.normal();
    CHECK((minv_apply(weights.alphas, s, x) - dense * x).cwiseAbs().maxCoeff() < 1e-10);
  }

  Matrix skew = s;
  skew(0, 0) += 0.05;
  CHECK_THROWS_AS(minv_apply(weights.alphas, skew, v), validation_error);
}

TEST_CASE("recover_angle closed form") {
  const Eigen::Vector2d v(1.0, 2.0);

  // theta = 0 maps back exactly.
  const Eigen::Vector2d h0 = pair_forward(v, 0.5, 0.2, 0.0);
  const AngleRecovery at_zero = recover_angle(v, h0, 0.5, 0.2);
  CHECK(std::abs(at_zero.theta) < 1e-14);
  CHECK(at_zero.residual < 1e-14);

  const Eigen::Vector2d h = pair_forward(v, 0.5, 0.2, 0.3);
  const AngleRecovery rec = recover_angle(v, h, 0.5, 0.2);
  CHECK(std::abs(rec.theta - 0.3) < 1e-10);
  CHECK(rec.residual < 1e-12);

  // Negative beta_d: the signed division keeps the primary branch correct.
  const Eigen::Vector2d h_neg = pair_forward(v, 0.2, 0.5, 0.3);
  CHECK(std::abs(recover_angle(v, h_neg, 0.2, 0.5).theta - 0.3) < 1e-10);

  CHECK_THROWS_AS(recover_angle(Eigen::Vector2d::Zero(), h, 0.5, 0.2), validation_error);
  CHECK_THROWS_AS(recover_angle(v, h, 0.4, 0.4), validation_error);
}

TEST_CASE("roundtrip recovery modulo the half-period") {
  Rng rng(79);
  for (int trial = 0; trial < 300; ++trial) {
    const double beta_p = 0.05 + 0.9 * rng.next_unit();
    double beta_q = 0.05 + 0.9 * rng.next_unit();
    if (std::abs(beta_p - beta_q) < 1e-4) beta_q += 0.01;
    const double theta = (rng.next_unit() - 0.5) * M_PI;  // full period of the 2-theta map
    Eigen::Vector2d v(rng.normal(), rng.normal());
    if (v.norm() < 1e-6) v << 1.0, 0.0;
    const AngleRecovery rec = recover_angle(v, pair_forward(v, beta_p, beta_q, theta), beta_p,
                                            beta_q);
    double gap = std::remainder(rec.theta - theta, M_PI);
    CHECK(std::abs(gap) < 1e-8);
    // The alternate branch sits a quarter turn away.
    CHECK(std::abs(std::remainder(rec.theta_alt - rec.theta, M_PI / 2.0)) < 1e-12);
  }
}

TEST_CASE("noisy residual equals the closed-form minimum") {
  Rng rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const double beta_p = 0.7, beta_q = 0.25;
    const double beta_s = 0.5 * (beta_p + beta_q);
    const double beta_d = 0.5 * (beta_p - beta_q);
    Eigen::Vector2d v(1.0 + rng.next_unit(), rng.normal());
    Eigen::Vector2d h = pair_forward(v, beta_p, beta_q, 0.4);
    h += 0.05 * Eigen::Vector2d(rng.normal(), rng.normal());

    const AngleRecovery rec = recover_angle(v, h, beta_p, beta_q);
    const Eigen::Vector2d r = h - beta_s * v;

    // Brute-force scan of the constrained objective.
    double best = 1e18;
    for (int i = 0; i < 200000; ++i) {
      const double theta = -M_PI / 2.0 + M_PI * i / 200000.0;
      Eigen::Matrix2d t;
      t << std::cos(2 * theta), std::sin(2 * theta), std::sin(2 * theta), -std::cos(2 * theta);
      best = std::min(best, (r - beta_d * (t * v)).norm());
    }
    CHECK(rec.residual <= best + 1e-9);
    CHECK(std::abs(rec.residual - best) < 1e-6);
  }
}
