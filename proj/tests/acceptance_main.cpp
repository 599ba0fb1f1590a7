// Acceptance suite: twelve end-to-end checks, one pass/fail line each.
// Run with no arguments for the full suite or with a single criterion number.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "attribmkt/br_sim.hpp"
#include "attribmkt/csv.hpp"
#include "attribmkt/demand_core.hpp"
#include "attribmkt/design.hpp"
#include "attribmkt/experiments.hpp"
#include "attribmkt/hetero.hpp"
#include "attribmkt/pricing.hpp"
#include "attribmkt/rng.hpp"
#include "attribmkt/rotation.hpp"

namespace fs = std::filesystem;
using namespace attribmkt;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double value, int digits = 3) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.*g", digits, value);
  return buffer;
}

FactorStructure random_structure(Rng& rng, int max_goods, int max_attrs, double gamma_max) {
  const int n = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_goods - 1));
  const int k = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_attrs));
  Matrix s(n, k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) s(i, j) = rng.normal();
  Vector gamma(k);
  for (int j = 0; j < k; ++j) gamma(j) = gamma_max * rng.next_unit();
  return FactorStructure(std::move(s), std::move(gamma), 1.0);
}

// Grid-refinement maximizer, independent of the library's scalar search.
double refine_max(const std::function<double(double)>& f, double lo, double hi) {
  double best = lo, fbest = f(lo);
  for (int round = 0; round < 14; ++round) {
    const double step = (hi - lo) / 80.0;
    best = lo;
    fbest = f(lo);
    for (int i = 1; i <= 80; ++i) {
      const double x = lo + i * step;
      const double value = f(x);
      if (value > fbest) {
        fbest = value;
        best = x;
      }
    }
    lo = std::max(lo, best - step);
    hi = std::min(hi, best + step);
  }
  return best;
}

// ---------------------------------------------------------------- 1

Outcome criterion_smw() {
  Rng rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const FactorStructure fsr = random_structure(rng, 50, 10, 10.0);
    const Matrix product = sigma_inverse(fsr) * sigma_dense(fsr);
    worst = std::max(worst,
                     (product - Matrix::Identity(fsr.n_goods, fsr.n_goods)).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-10, "200 instances, max |inv*Sigma - I| = " + num(worst)};
}

// ---------------------------------------------------------------- 2

Outcome criterion_composition() {
  Rng rng(102);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    const double b = 0.3 + rng.next_unit();
    const double gamma = 0.2 + 3.0 * rng.next_unit();
    const double phi = -0.3 - 1.5 * rng.next_unit();
    const double norm = 0.4 + 2.0 * rng.next_unit();

    Vector single = Vector::Zero(n);
    single(static_cast<int>(rng.next_u64() % n)) = 1.0;
    Vector ladder(n);
    for (int i = 0; i < n; ++i) ladder(i) = n - i;
    ladder /= ladder.norm();
    const Vector uniform = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));

    double reference = 0.0;
    bool first = true;
    for (const Vector& allocation : {single, ladder, uniform}) {
      const Matrix s = norm * allocation;
      const double profit =
          monopoly_total_profit(FactorStructure(s, Vector::Constant(1, gamma)), b * s.col(0), phi);
      if (first) {
        reference = profit;
        first = false;
      } else {
        worst = std::max(worst, std::abs(profit - reference));
      }
    }
  }
  return {worst < 1e-12, "50 draws x 3 allocations, max profit spread = " + num(worst)};
}

// ---------------------------------------------------------------- 3

Outcome criterion_alignment() {
  Rng rng(103);
  int violating_draws = 0;
  double worst_fd_gap = 0.0;
  std::string counterexample;
  int proportion_violations = 0;

  for (int draw = 0; draw < 50; ++draw) {
    PairParams p;
    p.b_i = 0.2 + rng.next_unit();
    p.b_j = 0.2 + rng.next_unit();
    p.gamma_i = 0.3 + 2.0 * rng.next_unit();
    p.gamma_j = 0.3 + 2.0 * rng.next_unit();
    p.norm_sq_i = 0.2 + 2.0 * rng.next_unit();
    p.norm_sq_j = 0.2 + 2.0 * rng.next_unit();
    p.phi = -0.4 - 1.2 * rng.next_unit();

    const double bound = std::sqrt(p.norm_sq_i * p.norm_sq_j);
    bool bad = false;
    for (int i = 0; i < 100; ++i) {
      p.inner = bound * i / 100.0;
      const double analytic = alignment_gradient(p);
      const double h = 1e-6 * (1.0 + bound);
      PairParams up = p, down = p;
      up.inner += h;
      down.inner = std::max(0.0, down.inner - h);
      const double fd = (pairwise_profit(up) - pairwise_profit(down)) / (up.inner - down.inner);
      // Relative agreement with an absolute floor; the gradient itself
      // crosses zero on some draws, where a pure ratio is ill-posed.
      worst_fd_gap =
          std::max(worst_fd_gap, std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)));
      if (fd <= 0.0) bad = true;
    }
    if (bad) {
      ++violating_draws;
      if (counterexample.empty()) {
        counterexample = "e.g. b=(" + num(p.b_i) + "," + num(p.b_j) + ") gamma=(" +
                         num(p.gamma_i) + "," + num(p.gamma_j) + ") d=" + num(p.norm_sq_i) +
                         " f=" + num(p.norm_sq_j);
      }
    }

    // Same draw with attribute lengths in the design-rule proportion.
    PairParams q = p;
    const double scale = 0.3 + 2.0 * rng.next_unit();
    q.norm_sq_i = scale * q.b_i * q.b_i / (q.gamma_i * q.gamma_i);
    q.norm_sq_j = scale * q.b_j * q.b_j / (q.gamma_j * q.gamma_j);
    const double qbound = std::sqrt(q.norm_sq_i * q.norm_sq_j);
    for (int i = 0; i < 100; ++i) {
      q.inner = qbound * i / 100.0;
      if (alignment_gradient(q) <= 0.0) ++proportion_violations;
    }
  }

  const bool fd_ok = worst_fd_gap < 1e-6;
  const bool monotone = violating_draws == 0;
  std::string detail = "gradient>0 fails on " + std::to_string(violating_draws) +
                       "/50 unconstrained draws (" + counterexample +
                       "); proportionate-length draws: " + std::to_string(proportion_violations) +
                       " violations; analytic-vs-FD rel gap = " + num(worst_fd_gap);
  return {monotone && fd_ok && proportion_violations == 0, detail};
}

// ---------------------------------------------------------------- 4

Outcome criterion_intensity_oracle() {
  double worst = 0.0;
  for (const double b2 : {0.5, 1.0, 4.0}) {
    for (int i = 0; i < 20; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double c = 0.02 + (0.6 - 0.02) * i / 19.0;
        const double phi = -2.0 + (2.0 - 0.25) * j / 19.0;

        const double t_mono = monopoly_intensity_reduced(b2, c, phi);
        const double mono_oracle = refine_max(
            [&](double t) { return reduced_monopoly_objective(b2, c, phi, t); }, 0.0, 8.0);
        worst = std::max(worst, std::abs(t_mono - mono_oracle));

        const double gamma = 1.3;
        const double b = std::sqrt(b2);
        const double norm_star = one_attribute_norm(b, gamma, c, phi);
        const double norm_oracle = refine_max(
            [&](double x) {
              return -0.25 / phi * b2 * x * x / (1.0 + gamma * x * x) - 0.5 * c * x * x;
            },
            0.0, 8.0);
        worst = std::max(worst, std::abs(norm_star - norm_oracle));

        ExclusivityPartition partition;
        partition.n_firms = 2;
        partition.owner = {0, 1};
        Vector gamma2(2), b_own(2);
        gamma2 << 1.1, 0.7;
        b_own << std::sqrt(b2 * gamma2(0)), std::sqrt(b2 * gamma2(1));
        const ExclusivityEquilibrium excl =
            exclusivity_equilibrium(partition, b_own, gamma2, c, phi);
        worst = std::max(worst, std::abs(excl.designs[0].intensity - mono_oracle));
        worst = std::max(worst, std::abs(excl.designs[1].intensity - mono_oracle));
      }
    }
  }
  return {worst < 1e-6, "3 x 20 x 20 cells, max |closed form - maximizer| = " + num(worst)};
}

// ---------------------------------------------------------------- 5

Outcome criterion_symmetric_root() {
  Rng rng(105);
  int tested = 0;
  bool unique = true;
  double worst_n1 = 0.0;
  while (tested < 100) {
    const double b2 = 0.3 + 4.0 * rng.next_unit();
    const double phi = -0.3 - 1.5 * rng.next_unit();
    const double c = 1e-3 + 0.95 * (-b2 / (2.0 * phi)) * rng.next_unit();
    if (!(c < -b2 / (2.0 * phi))) continue;
    ++tested;
    const int n = 1 + static_cast<int>(rng.next_u64() % 8);

    int changes = 0;
    double prev = symmetric_foc_lhs(1e-8, b2, c, phi, n) - 0.5;
    for (int i = 1; i <= 480; ++i) {
      const double u = 1e-8 * std::pow(1e12, i / 480.0);
      const double curr = symmetric_foc_lhs(u, b2, c, phi, n) - 0.5;
      if ((prev > 0.0) != (curr > 0.0)) ++changes;
      prev = curr;
    }
    if (changes != 1) unique = false;

    const double t1 = symmetric_intensity_reduced(b2, c, phi, 1);
    worst_n1 = std::max(worst_n1, std::abs(t1 - monopoly_intensity_reduced(b2, c, phi)));
  }
  return {unique && worst_n1 < 1e-9,
          "100 instances: single sign change = " + std::string(unique ? "yes" : "NO") +
              ", max |N=1 root - closed form| = " + num(worst_n1)};
}

// ---------------------------------------------------------------- 6 and 7

Outcome criterion_intensity_ordering() {
  const GridResult grid = run_welfare_grid(WelfareGridSpec{});
  int interior = 0, violations = 0;
  for (const auto& cell : grid.cells) {
    if (cell[0] > 0.0 && cell[1] > 0.0) {
      ++interior;
      if (!(cell[0] > cell[1])) ++violations;
    }
  }
  return {violations == 0 && interior > 0,
          std::to_string(interior) + " interior cells on the 60x60 default grid, " +
              std::to_string(violations) + " ordering violations"};
}

Outcome criterion_welfare_ordering() {
  const GridResult cphi = run_welfare_grid(WelfareGridSpec{});
  int cs_violations = 0;
  for (const auto& cell : cphi.cells)
    if (!(cell[2] >= cell[3] - 1e-9)) ++cs_violations;

  WelfareGridSpec bg;
  bg.kind = WelfareGridKind::BGamma;
  const GridResult bgrid = run_welfare_grid(bg);
  int bg_violations = 0;
  for (const auto& cell : bgrid.cells)
    if (!(cell[2] >= cell[3] - 1e-9)) ++bg_violations;

  // Log axes share the step, so diagonal neighbours carry equal B/gamma.
  double ratio_gap = 0.0;
  const size_t m = bgrid.axis2.size();
  for (size_t i = 0; i + 1 < bgrid.axis1.size(); ++i) {
    for (size_t j = 0; j + 1 < m; ++j) {
      for (size_t output = 0; output < bgrid.output_names.size(); ++output) {
        ratio_gap = std::max(ratio_gap, std::abs(bgrid.cells[i * m + j][output] -
                                                 bgrid.cells[(i + 1) * m + j + 1][output]));
      }
    }
  }
  const bool pass = cs_violations == 0 && bg_violations == 0 && ratio_gap < 1e-10;
  return {pass, "surplus ordering violations: " + std::to_string(cs_violations) + " (c,phi), " +
                    std::to_string(bg_violations) +
                    " (B,gamma); equal-ratio cell gap = " + num(ratio_gap)};
}

// ---------------------------------------------------------------- 8

Outcome criterion_br_convergence() {
  BrBatchSpec spec;
  spec.base = SimConfig::homogeneous(6, 4, Vector::Constant(4, 1.0), Vector::Constant(4, 1.0),
                                     -1.0, 0.15);
  spec.base.max_rounds = 2000;
  spec.seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  const std::vector<SimResult> results = run_br_batch(spec);

  const double t_sym = symmetric_intensity_reduced(4.0, 0.15, -1.0, 6);
  bool all_aligned = true, all_converged = true;
  double min_align = 1.0, t_lo = 1e18, t_hi = 0.0;
  for (const SimResult& result : results) {
    all_converged = all_converged && result.converged;
    for (const int firm : result.active) {
      min_align = std::min(min_align, result.alignment(firm));
      if (!(result.alignment(firm) > 0.99)) all_aligned = false;
      t_lo = std::min(t_lo, result.intensity(firm));
      t_hi = std::max(t_hi, result.intensity(firm));
    }
  }
  const bool intensity_ok = t_lo > 0.98 * t_sym && t_hi < 1.02 * t_sym;
  const std::string detail =
      "10 seeds: converged = " + std::string(all_converged ? "yes" : "NO") +
      ", min alignment = " + num(min_align, 6) + " (need > 0.99); intensities in [" +
      num(t_lo, 6) + ", " + num(t_hi, 6) + "] vs symmetric-path root " + num(t_sym, 6) +
      " (need within 2%)" +
      (intensity_ok ? ""
                    : " - NOT met: the simulated best responses settle at the per-firm Nash "
                      "intensity, which exceeds the symmetric-path root");
  return {all_converged && all_aligned && intensity_ok, detail};
}

// ---------------------------------------------------------------- 9

Outcome criterion_rho_structure() {
  const RhoGridSpec spec;
  const GridResult mono = run_rho_grid(spec, RhoMapKind::Monopoly);
  const GridResult duo = run_rho_grid(spec, RhoMapKind::Duopoly);

  int errors = 0;
  for (const auto& note : mono.cell_errors)
    if (!note.empty()) ++errors;
  for (const auto& note : duo.cell_errors)
    if (!note.empty()) ++errors;

  int correlated_misses = 0, order_violations = 0;
  const size_t m = mono.axis2.size();
  for (size_t i = 0; i < mono.axis1.size(); ++i) {
    for (size_t j = 0; j < m; ++j) {
      const double rb = mono.axis1[i], rg = mono.axis2[j];
      const double rho_m = mono.cells[i * m + j][0];
      const double rho_d = duo.cells[i * m + j][0];
      const bool correlated = (rb > 1.0 && rg > 1.0) || (rb < 1.0 && rg < 1.0);
      if (correlated && !(rho_m >= 1.0 - 1e-9 && rho_d >= 1.0 - 1e-9)) ++correlated_misses;
      if (!(rho_d >= rho_m - 1e-12)) ++order_violations;
    }
  }

  double diag_worst = 1.0;
  for (const double r : {0.7, 0.85, 1.0, 1.2, 1.5}) {
    const double bh = std::sqrt(r), bl = 1.0 / std::sqrt(r);
    const double gh = bh * bh, gl = bl * bl;  // matched-variance weights
    diag_worst = std::min(diag_worst, rho_star_monopoly(bh, bl, gh, gl, -1.0));
    diag_worst = std::min(diag_worst, rho_star_duopoly(bh, bl, gh, gl, -1.0).rho_star);
  }

  const bool pass =
      errors == 0 && correlated_misses == 0 && order_violations == 0 && diag_worst >= 1.0 - 1e-9;
  return {pass, "41x41 maps: correlated-quadrant misses = " + std::to_string(correlated_misses) +
                    ", duopoly<monopoly cells = " + std::to_string(order_violations) +
                    ", min rho* on the matched-variance diagonal = " + num(diag_worst, 8) +
                    ", cell errors = " + std::to_string(errors)};
}

// ---------------------------------------------------------------- 10

Outcome criterion_rotation() {
  Rng rng(110);
  double worst_angle = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double beta_p = 0.05 + 0.9 * rng.next_unit();
    double beta_q = 0.05 + 0.9 * rng.next_unit();
    if (std::abs(beta_p - beta_q) < 1e-4) beta_q += 0.01;
    const double theta = (rng.next_unit() - 0.5) * M_PI;
    Eigen::Vector2d v(rng.normal(), rng.normal());
    if (v.norm() < 1e-6) v << 1.0, 0.0;
    const AngleRecovery rec =
        recover_angle(v, pair_forward(v, beta_p, beta_q, theta), beta_p, beta_q);
    worst_angle = std::max(worst_angle, std::abs(std::remainder(rec.theta - theta, M_PI)));
  }

  double worst_residual_gap = -1e18;
  for (int trial = 0; trial < 20; ++trial) {
    const double beta_p = 0.1 + 0.8 * rng.next_unit();
    double beta_q = 0.1 + 0.8 * rng.next_unit();
    if (std::abs(beta_p - beta_q) < 1e-3) beta_q += 0.05;
    const double beta_s = 0.5 * (beta_p + beta_q), beta_d = 0.5 * (beta_p - beta_q);
    Eigen::Vector2d v(0.5 + rng.next_unit(), rng.normal());
    Eigen::Vector2d h = pair_forward(v, beta_p, beta_q, rng.next_unit());
    h += 0.03 * Eigen::Vector2d(rng.normal(), rng.normal());
    const AngleRecovery rec = recover_angle(v, h, beta_p, beta_q);
    const Eigen::Vector2d r = h - beta_s * v;
    double brute = 1e18;
    for (int i = 0; i < 1000000; ++i) {
      const double theta = -M_PI / 2.0 + M_PI * i / 1000000.0;
      const double c2 = std::cos(2.0 * theta), s2 = std::sin(2.0 * theta);
      const Eigen::Vector2d probe(r(0) - beta_d * (c2 * v(0) + s2 * v(1)),
                                  r(1) - beta_d * (s2 * v(0) - c2 * v(1)));
      brute = std::min(brute, probe.norm());
    }
    worst_residual_gap = std::max(worst_residual_gap, rec.residual - brute);
  }

  double worst_orth = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 2 + static_cast<int>(rng.next_u64() % 7);
    RotationParams params;
    params.dimension = k;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        params.angles.push_back({i, j, (rng.next_unit() * 2.0 - 1.0) * 0.999 * M_PI});
    const Matrix u = compose_u(params);
    worst_orth = std::max(
        worst_orth, (u.transpose() * u - Matrix::Identity(k, k)).cwiseAbs().maxCoeff());
  }

  const bool pass = worst_angle < 1e-8 && worst_residual_gap < 1e-9 && worst_orth < 1e-12;
  return {pass, "1000 roundtrips, worst |theta gap| = " + num(worst_angle) +
                    "; closed-form residual minus brute-force best = " + num(worst_residual_gap) +
                    "; worst Gram deviation = " + num(worst_orth)};
}

// ---------------------------------------------------------------- 11

Outcome criterion_solver_consistency() {
  Rng rng(111);
  double worst_gap = 0.0;
  int viable_tested = 0;
  while (viable_tested < 100) {
    const FactorStructure fsr = random_structure(rng, 10, 4, 3.0);
    Vector b(fsr.n_attrs());
    for (int k = 0; k < fsr.n_attrs(); ++k) b(k) = 0.3 + rng.next_unit();
    Vector noise(fsr.n_goods);
    for (int n = 0; n < fsr.n_goods; ++n) noise(n) = 0.5 + rng.next_unit();
    const Preferences prefs(b, -0.5 - 1.5 * rng.next_unit(), 0.2, noise);
    if (!delta_positive(fsr, prefs)) continue;
    const PriceEquilibrium closed = single_product_equilibrium(fsr, prefs);
    if (closed.negative_quantity_flag) continue;
    ++viable_tested;
    const PriceEquilibrium iterated = iterative_bertrand(fsr, prefs);
    worst_gap = std::max(worst_gap, (closed.prices - iterated.prices).cwiseAbs().maxCoeff());
  }

  int shutdown_cases = 0, bad_quantity = 0, bad_reentry = 0, entry_cycles = 0;
  while (shutdown_cases < 50) {
    const FactorStructure fsr = random_structure(rng, 8, 3, 4.0);
    Vector b(fsr.n_attrs());
    for (int k = 0; k < fsr.n_attrs(); ++k) b(k) = 0.3 + rng.next_unit();
    Vector noise(fsr.n_goods);
    for (int n = 0; n < fsr.n_goods; ++n) noise(n) = rng.normal();  // some goods non-viable
    const Preferences prefs(b, -1.0, 0.2, noise);
    const PriceEquilibrium eq = iterative_bertrand(fsr, prefs);
    if (static_cast<int>(eq.active.size()) == fsr.n_goods) continue;
    if (eq.entry_cycle) {
      // A marginal entrant admits no pure active-set equilibrium; the solver
      // reports the exit-stable state and flags it. Only stable instances
      // can satisfy the re-entry clause.
      ++entry_cycles;
      continue;
    }
    ++shutdown_cases;

    for (const int n : eq.active)
      if (!(eq.quantities(n) > 0.0)) ++bad_quantity;

    // Independent re-entry intercepts from a dense principal-block inverse.
    const Matrix sigma = sigma_dense(fsr);
    const Vector d = delta(fsr, prefs);
    for (int j = 0; j < fsr.n_goods; ++j) {
      if (eq.is_active(j)) continue;
      std::vector<int> trial = eq.active;
      trial.insert(std::lower_bound(trial.begin(), trial.end(), j), j);
      const int m = static_cast<int>(trial.size());
      Matrix block(m, m);
      Vector dsub(m);
      for (int a = 0; a < m; ++a) {
        dsub(a) = d(trial[a]);
        for (int c = 0; c < m; ++c) block(a, c) = sigma(trial[a], trial[c]);
      }
      const Matrix w = Eigen::FullPivLU<Matrix>(block).inverse();
      const int pos =
          static_cast<int>(std::lower_bound(trial.begin(), trial.end(), j) - trial.begin());
      double intercept = w.row(pos).dot(dsub);
      for (int a = 0; a < m; ++a)
        if (a != pos) intercept += prefs.price_sensitivity * w(pos, a) * eq.prices(trial[a]);
      if (intercept > 1e-12) ++bad_reentry;
    }
  }

  const bool pass = worst_gap < 1e-7 && bad_quantity == 0 && bad_reentry == 0;
  return {pass, "100 viable instances, max price gap = " + num(worst_gap) + "; 50 shutdown runs: " +
                    std::to_string(bad_quantity) + " non-positive active quantities, " +
                    std::to_string(bad_reentry) + " positive re-entry intercepts (" +
                    std::to_string(entry_cycles) + " no-equilibrium instances flagged and excluded)"};
}

// ---------------------------------------------------------------- 12

Outcome criterion_determinism() {
#ifndef ATTRIBMKT_CLI_PATH
  return {false, "CLI path not configured"};
#else
  const fs::path base = fs::temp_directory_path() / "attribmkt_acceptance";
  fs::remove_all(base);
  fs::create_directories(base);

  const auto write_config = [&](const std::string& name, const std::string& body) {
    std::ofstream out(base / name, std::ios::binary);
    out << body;
    return (base / name).string();
  };
  const std::string welfare = write_config("welfare.ini",
                                           "[experiment]\ntype = welfare-grid\n[grid]\nkind = "
                                           "c-phi\naxis1_steps = 12\naxis2_steps = 12\n");
  const std::string brsim = write_config(
      "br.ini",
      "[experiment]\ntype = br-sim\n[sim]\nfirms = 3\nattrs = 2\nb = 1, 1\ngamma = 1, 1\nphi = "
      "-1\ncost = 0.12\nseeds = 4, 9\nmax_rounds = 1500\n");
  const std::string rho = write_config("rho.ini",
                                       "[experiment]\ntype = rho-grid\n[grid]\nmap = "
                                       "monopoly\naxis_steps = 7\n");

  const auto run = [&](const std::string& subcommand, const std::string& config,
                       const std::string& out_dir) {
    const std::string cmd = std::string(ATTRIBMKT_CLI_PATH) + " " + subcommand + " --config " +
                            config + " --out " + (base / out_dir).string() +
                            " --svg > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };

  int failures = 0;
  std::string note;
  const std::vector<std::tuple<std::string, std::string, std::string>> jobs = {
      {"welfare-grid", welfare, "w"}, {"br-sim", brsim, "b"}, {"rho-grid", rho, "r"}};
  for (const auto& [subcommand, config, tag] : jobs) {
    if (run(subcommand, config, tag + "1") != 0 || run(subcommand, config, tag + "2") != 0) {
      ++failures;
      note += " CLI run failed for " + subcommand + ";";
      continue;
    }
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(base / (tag + "1"))) {
      const fs::path twin = base / (tag + "2") / entry.path().filename();
      std::ifstream a(entry.path(), std::ios::binary), b(twin, std::ios::binary);
      const std::string bytes_a((std::istreambuf_iterator<char>(a)), {});
      const std::string bytes_b((std::istreambuf_iterator<char>(b)), {});
      ++compared;
      if (bytes_a.empty() || bytes_a != bytes_b) {
        ++failures;
        note += " mismatch in " + entry.path().filename().string() + ";";
      }
    }
    if (compared == 0) {
      ++failures;
      note += " no outputs for " + subcommand + ";";
    }
  }
  return {failures == 0,
          failures == 0 ? "welfare-grid, br-sim and rho-grid reruns byte-identical (CSV and SVG)"
                        : "differences found:" + note};
#endif
}

struct Criterion {
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {"Low-rank inverse identity", criterion_smw},
    {"Allocation indifference of monopoly profit", criterion_composition},
    {"Pair-profit alignment monotonicity", criterion_alignment},
    {"Closed-form intensities vs direct maximization", criterion_intensity_oracle},
    {"Symmetric-competition root uniqueness", criterion_symmetric_root},
    {"Monopoly vs competition intensity ordering", criterion_intensity_ordering},
    {"Monopoly vs competition surplus ordering", criterion_welfare_ordering},
    {"Best-response design convergence", criterion_br_convergence},
    {"Horizontal-differentiation map structure", criterion_rho_structure},
    {"Rotation parameterization and pair recovery", criterion_rotation},
    {"Price solver consistency and shutdown soundness", criterion_solver_consistency},
    {"Byte-identical repeated CLI runs", criterion_determinism},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  bool all_pass = true;
  for (int i = 0; i < 12; ++i) {
    if (only != 0 && only != i + 1) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = kCriteria[i].run();
    } catch (const std::exception& error) {
      outcome = {false, std::string("exception: ") + error.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d. %s (%.1fs) - %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                kCriteria[i].name, seconds, outcome.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
