#pragma once

#include <cstdint>
#include <vector>

#include "attribmkt/pricing.hpp"

namespace attribmkt {

enum class DesignInit { RandomGaussian, Symmetric, Custom };

/// Configuration for the numerical best-response design dynamic. Rows of the
/// design matrix are per-firm attribute loadings; the pricing stage runs the
/// Bertrand solver with the shutdown rule on every objective evaluation.
struct SimConfig {
  int n_firms = 0;
  int n_attrs = 0;
  Vector b;               // length K
  Vector gamma;           // length K, > 0
  double phi = -1.0;      // < 0
  Matrix cost;            // N x K, all entries > 0

  double fd_step = 1e-5;
  double ascent_rate = 1e-1;
  int ascent_steps_per_firm = 5;
  int max_rounds = 500;
  double design_tol = 1e-7;
  std::uint64_t seed = 0;
  DesignInit init = DesignInit::RandomGaussian;
  Matrix custom_init;     // used when init == Custom

  /// Homogeneous scalar cost across firms and attributes.
  static SimConfig homogeneous(int n_firms, int n_attrs, Vector b, Vector gamma, double phi,
                               double c);

  void validate() const;
};

struct SimRound {
  Matrix designs;            // N x K snapshot after the round
  Vector net_profits;        // per firm
  std::vector<bool> active;  // per firm
};

struct SimResult {
  Matrix final_design;         // N x K, exited firms have zero rows
  std::vector<SimRound> trajectory;
  std::vector<int> active;     // surviving firm indices, ascending
  Vector alignment;            // per-firm cosine (0 for zero rows)
  Vector intensity;            // per-firm hat-norm of the design row
  bool converged = false;
  int rounds = 0;
  double last_delta = 0.0;
};

/// Firm n's net objective at the design matrix S: its equilibrium profit
/// under iterative_bertrand on Sigma(S) = I + sum_k gamma_k s_k s_k' with
/// delta = S b, minus its design cost (1/2) sum_k C_nk S_nk^2.
double firm_objective(const Matrix& designs, int firm, const SimConfig& config);

/// Deterministic sweep dynamic: rounds iterate firms in index order, each
/// firm takes ascent_steps_per_firm central-difference gradient-ascent steps
/// on its own row with backtracking (the step is halved until the objective
/// does not decrease). Firms whose equilibrium quantity reaches zero at the
/// end of a round exit irreversibly with their row frozen at zero.
/// Terminates when the max design change over a round drops below design_tol.
SimResult run_best_response(const SimConfig& config);

struct AlignmentEntry {
  double cosine = 0.0;     // between sqrt(gamma)-scaled row and Gamma^{-3/2} b
  double intensity = 0.0;  // hat norm of the row
};

/// Per-firm alignment with the optimal orientation. Zero rows report
/// cosine 0 by convention.
std::vector<AlignmentEntry> alignment_report(const Matrix& designs, const Vector& b,
                                             const Vector& gamma);

struct HeteroOrientationEntry {
  double angle = 0.0;        // radians between the hat row and C_n^-1 b-hat
  bool asymmetric_flag = false;  // dominant single attribute at low intensity
  bool active = true;
};

/// Deviation of each surviving firm's final design from the cost-adjusted
/// orientation rule d_n* parallel to C_n^-1 b-hat, plus a flag for
/// low-intensity single-attribute outcomes (one coordinate above 0.95 of the
/// row norm with intensity under half the homogeneous-cost symmetric value).
std::vector<HeteroOrientationEntry> heterogeneous_orientation_check(const SimResult& result,
                                                                    const SimConfig& config);

}  // namespace attribmkt
