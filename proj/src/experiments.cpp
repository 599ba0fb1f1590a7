#include "attribmkt/experiments.hpp"

#include <cmath>
#include <limits>

#include "attribmkt/csv.hpp"
#include "attribmkt/design.hpp"
#include "attribmkt/svg.hpp"
#include "attribmkt/thread_pool.hpp"

namespace attribmkt {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  require(n >= 2 && hi > lo, "grid: need at least two increasing axis values");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1.0);
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  require(n >= 2 && hi > lo && lo > 0.0, "grid: log axis needs 0 < lo < hi");
  std::vector<double> out(n);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(llo + (lhi - llo) * i / (n - 1.0));
  return out;
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

double GridResult::value(size_t i1, size_t i2, size_t output) const {
  return cells[i1 * axis2.size() + i2][output];
}

Matrix GridResult::output_matrix(size_t output) const {
  Matrix out(axis1.size(), axis2.size());
  for (size_t i = 0; i < axis1.size(); ++i)
    for (size_t j = 0; j < axis2.size(); ++j) out(i, j) = value(i, j, output);
  return out;
}

void GridResult::to_csv(const std::filesystem::path& path) const {
  std::vector<std::string> header = {axis1_name, axis2_name};
  header.insert(header.end(), output_names.begin(), output_names.end());
  CsvTable table(std::move(header));
  for (size_t i = 0; i < axis1.size(); ++i) {
    for (size_t j = 0; j < axis2.size(); ++j) {
      std::vector<std::string> row = {format_full(axis1[i]), format_full(axis2[j])};
      for (const double v : cells[i * axis2.size() + j]) row.push_back(format_full(v));
      table.add_row(std::move(row));
    }
  }
  table.write(path);
}

WelfareCell welfare_cell(double effective_b2, double c, double phi, int n_goods) {
  require(n_goods >= 1, "welfare_cell: need at least one good");
  require(c > 0.0 && phi < 0.0 && effective_b2 > 0.0, "welfare_cell: bad parameters");

  WelfareCell cell;
  cell.t_monopoly = monopoly_intensity_reduced(effective_b2, c, phi);
  cell.t_competition = symmetric_intensity_reduced(effective_b2, c, phi, n_goods);

  const auto surplus = [&](double t, bool monopoly) {
    if (t <= 0.0) return 0.0;  // no investment: delta = 0, Sigma = I, zero surplus
    const Vector y = Vector::Constant(n_goods, 1.0 / std::sqrt(static_cast<double>(n_goods)));
    const FactorStructure fs(t * y, Vector::Constant(1, 1.0), 1.0);
    const Preferences prefs(Vector::Constant(1, std::sqrt(effective_b2)), phi, c);
    const PriceEquilibrium eq =
        monopoly ? monopoly_equilibrium(fs, prefs) : single_product_equilibrium(fs, prefs);
    return consumer_surplus(fs, prefs, eq.prices);
  };
  cell.cs_monopoly = surplus(cell.t_monopoly, true);
  cell.cs_competition = surplus(cell.t_competition, false);
  return cell;
}

GridResult run_welfare_grid(const WelfareGridSpec& spec) {
  GridResult grid;
  grid.output_names = {"t_monopoly", "t_competition", "cs_monopoly", "cs_competition", "delta_cs"};
  const bool cost_phi = spec.kind == WelfareGridKind::CostPhi;
  if (cost_phi) {
    grid.axis1_name = "c";
    grid.axis2_name = "phi";
    grid.axis1 = linspace(spec.c_min, spec.c_max, spec.axis1_steps);
    grid.axis2 = linspace(spec.phi_min, spec.phi_max, spec.axis2_steps);
    require(spec.phi_min < 0.0 && spec.phi_max < 0.0, "welfare grid: phi axis must stay negative");
  } else {
    // Log axes with a common step so equal B/gamma cells repeat exactly
    // along diagonals.
    grid.axis1_name = "B";
    grid.axis2_name = "gamma";
    grid.axis1 = logspace(spec.b2_min, spec.b2_max, spec.axis1_steps);
    grid.axis2 = logspace(spec.gamma_min, spec.gamma_max, spec.axis2_steps);
    require(spec.gamma_min > 0.0, "welfare grid: gamma axis must be positive");
  }

  grid.cells.assign(grid.n_cells(), {});
  grid.cell_errors.assign(grid.n_cells(), "");
  parallel_for(grid.n_cells(), [&](size_t index) {
    const size_t i = index / grid.axis2.size();
    const size_t j = index % grid.axis2.size();
    try {
      const WelfareCell cell =
          cost_phi ? welfare_cell(spec.b2, grid.axis1[i], grid.axis2[j], spec.n_goods)
                   : welfare_cell(grid.axis1[i] / grid.axis2[j], spec.c_fixed, spec.phi_fixed,
                                  spec.n_goods);
      grid.cells[index] = {cell.t_monopoly, cell.t_competition, cell.cs_monopoly,
                           cell.cs_competition, cell.cs_monopoly - cell.cs_competition};
    } catch (const std::exception& error) {
      grid.cells[index] = {kNan, kNan, kNan, kNan, kNan};
      grid.cell_errors[index] = error.what();
    }
  });
  return grid;
}

GridResult run_rho_grid(const RhoGridSpec& spec, RhoMapKind kind) {
  GridResult grid;
  grid.axis1_name = "b_ratio";
  grid.axis2_name = "gamma_ratio";
  grid.axis1 = logspace(spec.ratio_min, spec.ratio_max, spec.axis_steps);
  grid.axis2 = logspace(spec.ratio_min, spec.ratio_max, spec.axis_steps);
  grid.output_names = {"rho_star"};
  grid.cells.assign(grid.n_cells(), {});
  grid.cell_errors.assign(grid.n_cells(), "");

  parallel_for(grid.n_cells(), [&](size_t index) {
    const size_t i = index / grid.axis2.size();
    const size_t j = index % grid.axis2.size();
    const double rb = grid.axis1[i];
    const double rg = grid.axis2[j];
    const double b_high = std::sqrt(rb), b_low = 1.0 / std::sqrt(rb);
    const double g_high = std::sqrt(rg), g_low = 1.0 / std::sqrt(rg);
    try {
      double rho;
      if (kind == RhoMapKind::Monopoly) {
        rho = rho_star_monopoly(b_high, b_low, g_high, g_low, spec.phi, spec.mu);
      } else {
        rho = rho_star_duopoly(b_high, b_low, g_high, g_low, spec.phi, spec.mu).rho_star;
      }
      grid.cells[index] = {rho};
    } catch (const std::exception& error) {
      grid.cells[index] = {kNan};
      grid.cell_errors[index] = error.what();
    }
  });
  return grid;
}

RhoGrid to_rho_grid(const GridResult& grid) {
  RhoGrid out;
  out.b_ratios = grid.axis1;
  out.g_ratios = grid.axis2;
  out.cells = grid.output_matrix(0);
  out.validate();
  return out;
}

std::vector<SimResult> run_br_batch(const BrBatchSpec& spec) {
  require(!spec.seeds.empty(), "br batch: need at least one seed");
  std::vector<SimResult> results(spec.seeds.size());
  parallel_for(spec.seeds.size(), [&](size_t index) {
    SimConfig config = spec.base;
    config.seed = spec.seeds[index];
    results[index] = run_best_response(config);
  });
  return results;
}

void write_trajectory_csv(const std::filesystem::path& path, const SimResult& result) {
  CsvTable table({"round", "firm", "attr", "value", "profit", "active"});
  for (size_t round = 0; round < result.trajectory.size(); ++round) {
    const SimRound& snapshot = result.trajectory[round];
    for (Eigen::Index firm = 0; firm < snapshot.designs.rows(); ++firm) {
      for (Eigen::Index attr = 0; attr < snapshot.designs.cols(); ++attr) {
        table.add_row({std::to_string(round + 1), std::to_string(firm), std::to_string(attr),
                       format_full(snapshot.designs(firm, attr)),
                       format_full(snapshot.net_profits(firm)),
                       snapshot.active[firm] ? "1" : "0"});
      }
    }
  }
  table.write(path);
}

void write_alignment_csv(const std::filesystem::path& path, const SimResult& result) {
  CsvTable table({"firm", "cosine", "intensity", "active"});
  for (Eigen::Index firm = 0; firm < result.alignment.size(); ++firm) {
    const bool active =
        std::binary_search(result.active.begin(), result.active.end(), static_cast<int>(firm));
    table.add_row({std::to_string(firm), format_full(result.alignment(firm)),
                   format_full(result.intensity(firm)), active ? "1" : "0"});
  }
  table.write(path);
}

void write_design_heatmap_svg(const std::filesystem::path& path, const SimResult& result,
                              const SimConfig& config) {
  Matrix hat = result.final_design;
  for (Eigen::Index k = 0; k < hat.cols(); ++k) hat.col(k) *= std::sqrt(config.gamma(k));
  HeatmapSpec spec;
  spec.title = "Final designs (hat loadings)";
  spec.axis1_label = "firm";
  spec.axis2_label = "attribute";
  spec.axis1.resize(hat.rows());
  for (Eigen::Index n = 0; n < hat.rows(); ++n) spec.axis1[n] = static_cast<double>(n);
  spec.axis2.resize(hat.cols());
  for (Eigen::Index k = 0; k < hat.cols(); ++k) spec.axis2[k] = static_cast<double>(k);
  write_svg_heatmap(path, hat, spec);
}

}  // namespace attribmkt
