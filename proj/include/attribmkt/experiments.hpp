#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "attribmkt/br_sim.hpp"
#include "attribmkt/hetero.hpp"
#include "attribmkt/types.hpp"

namespace attribmkt {

/// Rectangular sweep over two scalar parameters with named scalar outputs
/// per cell, stored axis1-major. Failed cells carry NaN outputs plus an
/// error note; the grid is still emitted.
struct GridResult {
  std::string axis1_name, axis2_name;
  std::vector<double> axis1, axis2;
  std::vector<std::string> output_names;
  std::vector<std::vector<double>> cells;   // [i1 * axis2.size() + i2][output]
  std::vector<std::string> cell_errors;     // "" when the cell succeeded

  size_t n_cells() const { return axis1.size() * axis2.size(); }
  double value(size_t i1, size_t i2, size_t output) const;
  Matrix output_matrix(size_t output) const;  // axis1 rows x axis2 columns
  void to_csv(const std::filesystem::path& path) const;
};

/// One welfare-comparison cell of the reduced one-direction model
/// (delta = t sqrt(B) y, Sigma = I + t^2 y y', y uniform): closed-form
/// monopoly intensity, the symmetric-competition FOC root, and consumer
/// surplus under each regime's equilibrium prices.
struct WelfareCell {
  double t_monopoly = 0.0;
  double t_competition = 0.0;
  double cs_monopoly = 0.0;
  double cs_competition = 0.0;
};
WelfareCell welfare_cell(double effective_b2, double c, double phi, int n_goods);

enum class WelfareGridKind { CostPhi, BGamma };

struct WelfareGridSpec {
  WelfareGridKind kind = WelfareGridKind::CostPhi;
  int n_goods = 3;
  // CostPhi: B fixed, axes are c and phi.
  double b2 = 1.0;
  double c_min = 0.02, c_max = 0.6;
  double phi_min = -2.0, phi_max = -0.25;
  // BGamma: c and phi fixed, axes are B and gamma; only B/gamma enters.
  double c_fixed = 0.5;
  double phi_fixed = -1.0;
  double b2_min = 0.25, b2_max = 4.0;
  double gamma_min = 0.25, gamma_max = 4.0;
  int axis1_steps = 60, axis2_steps = 60;
};
GridResult run_welfare_grid(const WelfareGridSpec& spec);

enum class RhoMapKind { Monopoly, Duopoly };

struct RhoGridSpec {
  double ratio_min = 0.4, ratio_max = 2.5;  // both axes, log-spaced
  int axis_steps = 41;
  double mu = 0.5;
  double phi = -1.0;
};
/// Levels are normalized to geometric mean one: a ratio r maps to
/// (sqrt(r), 1/sqrt(r)).
GridResult run_rho_grid(const RhoGridSpec& spec, RhoMapKind kind);
RhoGrid to_rho_grid(const GridResult& grid);

struct BrBatchSpec {
  SimConfig base;
  std::vector<std::uint64_t> seeds;
};
std::vector<SimResult> run_br_batch(const BrBatchSpec& spec);

/// File emission for a finished simulation run.
void write_trajectory_csv(const std::filesystem::path& path, const SimResult& result);
void write_alignment_csv(const std::filesystem::path& path, const SimResult& result);
void write_design_heatmap_svg(const std::filesystem::path& path, const SimResult& result,
                              const SimConfig& config);

}  // namespace attribmkt
