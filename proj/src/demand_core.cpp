#include "attribmkt/demand_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>

namespace attribmkt {

namespace {

// Largest-magnitude entry of each column made positive. Eigenvectors and QR
// columns are determined only up to sign; this pins one representative.
void normalize_column_signs(Matrix& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Eigen::Index imax = 0;
    m.col(c).cwiseAbs().maxCoeff(&imax);
    if (m(imax, c) < 0.0) m.col(c) = -m.col(c);
  }
}

// K x K Woodbury core rho*Gamma^-1 + S'S, factorized once per call site.
Eigen::LDLT<Matrix> woodbury_core(const FactorStructure& fs) {
  Matrix core = fs.loadings.transpose() * fs.loadings;
  core.diagonal() += fs.baseline * fs.weights.cwiseInverse();
  return core.ldlt();
}

}  // namespace

FactorStructure::FactorStructure(Matrix S, Vector gamma, double rho)
    : n_goods(static_cast<int>(S.rows())), loadings(std::move(S)), weights(std::move(gamma)), baseline(rho) {
  validate();
}

FactorStructure FactorStructure::identity(int n, double rho) {
  FactorStructure fs;
  fs.n_goods = n;
  fs.loadings = Matrix::Zero(n, 0);
  fs.weights = Vector::Zero(0);
  fs.baseline = rho;
  fs.validate();
  return fs;
}

void FactorStructure::validate() const {
  require(n_goods >= 1, "FactorStructure: need at least one good");
  require(loadings.rows() == n_goods, "FactorStructure: loadings row count != n_goods");
  require(weights.size() == loadings.cols(), "FactorStructure: weights length != loadings columns");
  require((weights.array() > 0.0).all(), "FactorStructure: all attribute weights must be > 0");
  require(baseline > 0.0, "FactorStructure: baseline rho must be > 0");
}

Preferences::Preferences(Vector b, double phi, double c, Vector v)
    : attr_weights(std::move(b)), price_sensitivity(phi), attr_cost(c), noise(std::move(v)) {
  validate();
}

void Preferences::validate() const {
  require(price_sensitivity < 0.0, "Preferences: price sensitivity phi must be < 0");
  require(attr_cost > 0.0, "Preferences: attribute cost scale c must be > 0");
}

Matrix sigma_dense(const FactorStructure& fs) {
  fs.validate();
  Matrix sigma = fs.baseline * Matrix::Identity(fs.n_goods, fs.n_goods);
  if (fs.n_attrs() > 0) {
    sigma.noalias() += fs.loadings * fs.weights.asDiagonal() * fs.loadings.transpose();
  }
  return sigma;
}

Matrix sigma_inverse(const FactorStructure& fs) {
  fs.validate();
  const int n = fs.n_goods;
  if (fs.n_attrs() == 0) return Matrix::Identity(n, n) / fs.baseline;
  const auto core = woodbury_core(fs);
  Matrix inv = Matrix::Identity(n, n);
  inv.noalias() -= fs.loadings * core.solve(fs.loadings.transpose());
  inv /= fs.baseline;
  return inv;
}

Vector sigma_solve(const FactorStructure& fs, const Vector& rhs) {
  fs.validate();
  require(rhs.size() == fs.n_goods, "sigma_solve: rhs length != n_goods");
  if (fs.n_attrs() == 0) return rhs / fs.baseline;
  const auto core = woodbury_core(fs);
  Vector out = rhs;
  out.noalias() -= fs.loadings * core.solve(fs.loadings.transpose() * rhs);
  return out / fs.baseline;
}

Vector delta(const FactorStructure& fs, const Preferences& prefs) {
  fs.validate();
  prefs.validate();
  require(prefs.attr_weights.size() == fs.n_attrs(), "delta: taste vector length != n_attrs");
  Vector d = fs.n_attrs() > 0 ? Vector(fs.loadings * prefs.attr_weights) : Vector(Vector::Zero(fs.n_goods));
  if (prefs.noise.size() > 0) {
    require(prefs.noise.size() == fs.n_goods, "delta: noise length != n_goods");
    d += prefs.noise;
  }
  return d;
}

bool delta_positive(const FactorStructure& fs, const Preferences& prefs) {
  return (delta(fs, prefs).array() > 0.0).all();
}

Vector demand(const FactorStructure& fs, const Preferences& prefs, const Vector& prices) {
  require(prices.size() == fs.n_goods, "demand: price vector length != n_goods");
  const Vector gross = delta(fs, prefs) + prefs.price_sensitivity * prices;
  return sigma_solve(fs, gross);
}

Matrix demand_jacobian(const FactorStructure& fs, const Preferences& prefs) {
  prefs.validate();
  return prefs.price_sensitivity * sigma_inverse(fs);
}

Matrix attributes_from_characteristics(const Matrix& X) {
  require(X.rows() >= 1 && X.cols() >= 1, "attributes: X must be non-empty");
  require(X.rows() >= X.cols(), "attributes: need at least as many goods as characteristics");
  const Eigen::JacobiSVD<Matrix> svd(X);
  const Vector sv = svd.singularValues();
  const double tol = 1e-10 * sv(0);
  if (!(sv(sv.size() - 1) > tol)) {
    throw validation_error("attributes: characteristics matrix is numerically rank-deficient");
  }
  Eigen::HouseholderQR<Matrix> qr(X);
  Matrix Z = qr.householderQ() * Matrix::Identity(X.rows(), X.cols());
  normalize_column_signs(Z);
  return Z;
}

FactorStructure spectral_factorization(const Matrix& sigma, double rho) {
  require(sigma.rows() == sigma.cols() && sigma.rows() >= 1, "spectral: matrix must be square");
  require(rho > 0.0, "spectral: rho must be > 0");
  const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
  require((sigma - sigma.transpose()).cwiseAbs().maxCoeff() <= 1e-10 * scale,
          "spectral: matrix is not symmetric");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(sigma);
  require(eig.info() == Eigen::Success, "spectral: eigendecomposition failed");
  const Vector lambda = eig.eigenvalues();  // ascending
  require(lambda(0) > 0.0, "spectral: matrix is not positive definite");

  const double tol = 1e-10 * std::max(1.0, lambda(lambda.size() - 1));
  std::vector<Eigen::Index> kept;
  for (Eigen::Index i = lambda.size() - 1; i >= 0; --i) {
    if (lambda(i) - rho > tol) kept.push_back(i);  // descending by eigenvalue
  }

  FactorStructure fs;
  fs.n_goods = static_cast<int>(sigma.rows());
  fs.baseline = rho;
  fs.loadings = Matrix(sigma.rows(), static_cast<Eigen::Index>(kept.size()));
  fs.weights = Vector(static_cast<Eigen::Index>(kept.size()));
  for (size_t j = 0; j < kept.size(); ++j) {
    fs.loadings.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(kept[j]);
    fs.weights(static_cast<Eigen::Index>(j)) = lambda(kept[j]) - rho;
  }
  normalize_column_signs(fs.loadings);
  fs.validate();
  return fs;
}

}  // namespace attribmkt
