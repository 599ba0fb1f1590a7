#pragma once

#include <vector>

#include "attribmkt/demand_core.hpp"

namespace attribmkt {

enum class PricingRegime { Monopoly, SingleProductClosedForm, SingleProductIterative };

/// A solved price stage. Inactive goods carry exactly zero price, quantity
/// and profit; `active` lists the surviving good indices in ascending order.
/// Profits are gross of design costs (price times quantity).
struct PriceEquilibrium {
  Vector prices;
  Vector quantities;
  Vector profits;
  std::vector<int> active;
  PricingRegime regime = PricingRegime::Monopoly;

  bool converged = true;
  int sweeps = 0;
  double residual = 0.0;          // max FOC violation over active goods
  bool negative_quantity_flag = false;
  // Set when the entry/exit process revisited an active set: a marginal firm
  // is unviable inside the equilibrium yet profitable against the prices that
  // prevail without it, so no pure active-set equilibrium exists. The
  // reported state is exit-stable (all active first-order conditions hold)
  // with the marginal firm out.
  bool entry_cycle = false;

  double total_profit() const { return profits.sum(); }
  bool is_active(int n) const;
};

struct BertrandOptions {
  int max_sweeps = 10000;
  double price_tol = 1e-10;   // max-abs price change between sweeps
  double damping = 1.0;       // in (0,1]; 1 is the plain best response
};

/// Multi-product monopolist closed forms:
///   p* = -delta / (2 phi),  q* = Sigma^-1 delta / 2,
///   total profit = -(1/4phi) delta' Sigma^-1 delta.
/// Requires delta > 0 componentwise. A good with q* < 0 sets
/// negative_quantity_flag; with drop_unprofitable the good is withdrawn and
/// the closed forms are recomputed on the survivors until all quantities are
/// positive.
PriceEquilibrium monopoly_equilibrium(const FactorStructure& fs, const Preferences& prefs,
                                      bool drop_unprofitable = false);

/// Gross monopoly profit -(1/4phi) delta' Sigma^-1 delta for a given utility
/// vector. Unlike monopoly_equilibrium this accepts deltas with zero entries
/// (such goods simply sell nothing).
double monopoly_total_profit(const FactorStructure& fs, const Vector& delta_vec, double phi);

/// Single-product-firm (Bertrand) closed form. With D = diag(Sigma^-1):
///   p* = -(1/phi) (D + Sigma^-1)^-1 Sigma^-1 delta,   q*_n = -phi D_nn p*_n,
/// which satisfies every firm's first-order condition q_n = -phi D_nn p_n.
/// Requires delta > 0; negative quantities are flagged for the iterative
/// solver rather than resolved here.
PriceEquilibrium single_product_equilibrium(const FactorStructure& fs, const Preferences& prefs);

/// Best-response price iteration with the shutdown rule. On the current
/// active set A (with W the inverse of Sigma restricted to A), firm n's
/// residual demand intercept is
///   a_n = (W delta_A)_n + phi * sum_{m != n} W_nm p_m
/// and its best response p_n = -a_n / (2 phi W_nn). Sweeps run in good-index
/// order until the max-abs price change drops below price_tol. Firms whose
/// converged intercept is non-positive are withdrawn and the equilibrium is
/// recomputed on the survivors; a withdrawn firm whose re-entry intercept
/// turns positive is re-admitted. Terminates when the active set is stable:
/// all active FOCs hold and every inactive firm's re-entry intercept is
/// non-positive.
PriceEquilibrium iterative_bertrand(const FactorStructure& fs, const Preferences& prefs,
                                    const BertrandOptions& opts = BertrandOptions());

/// Consumer surplus W = (1/2) (delta + phi p)' Sigma^-1 (delta + phi p).
double consumer_surplus(const FactorStructure& fs, const Preferences& prefs, const Vector& prices);

}  // namespace attribmkt
