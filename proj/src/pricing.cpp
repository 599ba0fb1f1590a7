#include "attribmkt/pricing.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace attribmkt {

namespace {

Matrix pick_square(const Matrix& m, const std::vector<int>& idx) {
  Matrix out(idx.size(), idx.size());
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

Vector pick(const Vector& v, const std::vector<int>& idx) {
  Vector out(idx.size());
  for (size_t i = 0; i < idx.size(); ++i) out(i) = v(idx[i]);
  return out;
}

std::vector<int> positive_indices(const Vector& q) {
  std::vector<int> idx;
  for (int n = 0; n < q.size(); ++n)
    if (q(n) > 0.0) idx.push_back(n);
  return idx;
}

PriceEquilibrium make_empty(int n, PricingRegime regime) {
  PriceEquilibrium eq;
  eq.prices = Vector::Zero(n);
  eq.quantities = Vector::Zero(n);
  eq.profits = Vector::Zero(n);
  eq.regime = regime;
  return eq;
}

}  // namespace

bool PriceEquilibrium::is_active(int n) const {
  return std::binary_search(active.begin(), active.end(), n);
}

double monopoly_total_profit(const FactorStructure& fs, const Vector& delta_vec, double phi) {
  require(phi < 0.0, "monopoly_total_profit: phi must be < 0");
  require(delta_vec.size() == fs.n_goods, "monopoly_total_profit: delta length != n_goods");
  return -0.25 / phi * delta_vec.dot(sigma_solve(fs, delta_vec));
}

PriceEquilibrium monopoly_equilibrium(const FactorStructure& fs, const Preferences& prefs,
                                      bool drop_unprofitable) {
  const Vector d = delta(fs, prefs);
  require((d.array() > 0.0).all(), "monopoly_equilibrium: delta must be strictly positive");
  const double phi = prefs.price_sensitivity;

  PriceEquilibrium eq = make_empty(fs.n_goods, PricingRegime::Monopoly);
  eq.prices = -d / (2.0 * phi);
  eq.quantities = 0.5 * sigma_solve(fs, d);
  eq.negative_quantity_flag = (eq.quantities.array() < 0.0).any();

  if (eq.negative_quantity_flag && drop_unprofitable) {
    // Withdraw goods the monopolist would not sell and recompute the closed
    // forms on the survivor block until all quantities are positive.
    const Matrix sigma = sigma_dense(fs);
    std::vector<int> act(fs.n_goods);
    std::iota(act.begin(), act.end(), 0);
    eq.prices.setZero();
    eq.quantities.setZero();
    while (!act.empty()) {
      const Matrix sub = pick_square(sigma, act);
      const Vector dsub = pick(d, act);
      const Vector qsub = 0.5 * sub.llt().solve(dsub);
      std::vector<int> next;
      for (size_t i = 0; i < act.size(); ++i)
        if (qsub(i) > 0.0) next.push_back(act[i]);
      if (next.size() == act.size()) {
        for (size_t i = 0; i < act.size(); ++i) {
          eq.prices(act[i]) = -dsub(i) / (2.0 * phi);
          eq.quantities(act[i]) = qsub(i);
        }
        break;
      }
      act = std::move(next);
    }
  }

  eq.profits = eq.prices.cwiseProduct(eq.quantities);
  eq.active = positive_indices(eq.quantities);
  return eq;
}

PriceEquilibrium single_product_equilibrium(const FactorStructure& fs, const Preferences& prefs) {
  const Vector d = delta(fs, prefs);
  require((d.array() > 0.0).all(), "single_product_equilibrium: delta must be strictly positive");
  const double phi = prefs.price_sensitivity;

  const Matrix w = sigma_inverse(fs);
  Matrix lhs = w;
  lhs.diagonal() += w.diagonal();
  const Vector p = -(1.0 / phi) * lhs.llt().solve(w * d);

  PriceEquilibrium eq = make_empty(fs.n_goods, PricingRegime::SingleProductClosedForm);
  eq.prices = p;
  eq.quantities = -phi * w.diagonal().cwiseProduct(p);
  eq.profits = eq.prices.cwiseProduct(eq.quantities);
  eq.negative_quantity_flag = (eq.quantities.array() < 0.0).any();
  eq.active = positive_indices(eq.quantities);
  return eq;
}

PriceEquilibrium iterative_bertrand(const FactorStructure& fs, const Preferences& prefs,
                                    const BertrandOptions& opts) {
  require(opts.damping > 0.0 && opts.damping <= 1.0, "iterative_bertrand: damping must be in (0,1]");
  const Vector d = delta(fs, prefs);
  const double phi = prefs.price_sensitivity;
  const Matrix sigma = sigma_dense(fs);
  const int n = fs.n_goods;

  PriceEquilibrium eq = make_empty(n, PricingRegime::SingleProductIterative);

  std::vector<int> act(n);
  std::iota(act.begin(), act.end(), 0);
  Vector p_full = Vector::Zero(n);

  std::set<std::vector<int>> visited;
  bool allow_reentry = true;
  const int max_set_rounds = 4 * n + 16;
  for (int round = 0; round < 2 * max_set_rounds; ++round) {
    if (allow_reentry && (!visited.insert(act).second || round >= max_set_rounds)) {
      // Revisited a set: a marginal entrant flips between being unviable in
      // equilibrium and profitable against the without-it prices. Finish
      // drop-only from here, which always terminates.
      allow_reentry = false;
      eq.entry_cycle = true;
    }
    Vector a;  // converged intercepts on the active set
    Vector p;
    Matrix w;
    if (!act.empty()) {
      const int m = static_cast<int>(act.size());
      w = pick_square(sigma, act).llt().solve(Matrix::Identity(m, m));
      const Vector c = w * pick(d, act);
      p = pick(p_full, act);

      bool converged = false;
      for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (int i = 0; i < m; ++i) {
          const double cross = w.row(i).dot(p) - w(i, i) * p(i);
          const double intercept = c(i) + phi * cross;
          double pn = -intercept / (2.0 * phi * w(i, i));
          if (opts.damping < 1.0) pn = (1.0 - opts.damping) * p(i) + opts.damping * pn;
          max_change = std::max(max_change, std::abs(pn - p(i)));
          p(i) = pn;
        }
        eq.sweeps += 1;
        if (max_change < opts.price_tol) {
          converged = true;
          break;
        }
      }
      a = c + phi * (w * p - w.diagonal().cwiseProduct(p));
      if (!converged) {
        eq.converged = false;
        eq.residual = (a + 2.0 * phi * w.diagonal().cwiseProduct(p)).cwiseAbs().maxCoeff();
        throw numerical_error("iterative_bertrand: price sweeps did not converge, residual " +
                              std::to_string(eq.residual));
      }
      for (int i = 0; i < m; ++i) p_full(act[i]) = p(i);

      std::vector<int> survivors;
      for (int i = 0; i < m; ++i)
        if (a(i) > 0.0) survivors.push_back(act[i]);
      if (survivors.size() != act.size()) {
        act = std::move(survivors);
        continue;
      }
    }

    // Re-entry check: an inactive firm facing a positive residual-demand
    // intercept against the current prices would sell at its best response.
    int reenter = -1;
    for (int j = 0; allow_reentry && j < n && reenter < 0; ++j) {
      if (std::binary_search(act.begin(), act.end(), j)) continue;
      std::vector<int> trial = act;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), j), j);
      const int mt = static_cast<int>(trial.size());
      const Matrix wt = pick_square(sigma, trial).llt().solve(Matrix::Identity(mt, mt));
      const Vector ct = wt * pick(d, trial);
      const int pos = static_cast<int>(std::lower_bound(trial.begin(), trial.end(), j) - trial.begin());
      double cross = 0.0;
      for (int i = 0; i < mt; ++i)
        if (i != pos) cross += wt(pos, i) * p_full(trial[i]);
      if (ct(pos) + phi * cross > 0.0) reenter = j;
    }
    if (reenter >= 0) {
      act.insert(std::lower_bound(act.begin(), act.end(), reenter), reenter);
      p_full(reenter) = 0.0;
      continue;
    }

    // Stable active set: report.
    eq.active = act;
    if (!act.empty()) {
      const int m = static_cast<int>(act.size());
      for (int i = 0; i < m; ++i) {
        eq.prices(act[i]) = p(i);
        eq.quantities(act[i]) = 0.5 * a(i);
      }
      eq.residual = (a + 2.0 * phi * w.diagonal().cwiseProduct(p)).cwiseAbs().maxCoeff();
    }
    eq.profits = eq.prices.cwiseProduct(eq.quantities);
    return eq;
  }
  throw numerical_error("iterative_bertrand: active set failed to stabilize");
}

double consumer_surplus(const FactorStructure& fs, const Preferences& prefs, const Vector& prices) {
  require(prices.size() == fs.n_goods, "consumer_surplus: price vector length != n_goods");
  const Vector z = delta(fs, prefs) + prefs.price_sensitivity * prices;
  return 0.5 * z.dot(sigma_solve(fs, z));
}

}  // namespace attribmkt
