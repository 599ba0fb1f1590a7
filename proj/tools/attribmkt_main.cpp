// attribmkt: batch front door for the attribute-competition toolkit.
// One subcommand per experiment; every run echoes its canonical config into
// the output directory so results stay reproducible.
#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "attribmkt/config.hpp"
#include "attribmkt/csv.hpp"
#include "attribmkt/demand_core.hpp"
#include "attribmkt/design.hpp"
#include "attribmkt/experiments.hpp"
#include "attribmkt/rng.hpp"
#include "attribmkt/rotation.hpp"
#include "attribmkt/svg.hpp"

namespace fs = std::filesystem;
using namespace attribmkt;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool svg = false;
};

Vector to_vector(const std::vector<double>& values) {
  Vector out(values.size());
  for (size_t i = 0; i < values.size(); ++i) out(i) = values[i];
  return out;
}

Matrix to_matrix(const std::vector<double>& values, int rows, int cols, const std::string& what) {
  require(static_cast<int>(values.size()) == rows * cols,
          what + ": expected " + std::to_string(rows * cols) + " row-major entries");
  Matrix out(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r, c) = values[r * cols + c];
  return out;
}

fs::path prepare_output(const CommonArgs& args, const IniConfig& config,
                        const std::string& experiment) {
  fs::path dir = args.out_dir.empty() ? fs::path("out-" + experiment) : fs::path(args.out_dir);
  fs::create_directories(dir);
  std::ofstream echo(dir / "config_echo.ini", std::ios::binary);
  echo << config.serialize();
  return dir;
}

void check_experiment_type(const IniConfig& config, const std::string& expected) {
  const std::string declared = config.get_string("experiment", "type", expected);
  if (declared != expected)
    throw validation_error("config declares experiment type '" + declared + "' but subcommand is '" +
                           expected + "'");
}

// ---- price-eq ----

int run_price_eq(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "price-eq");
  const int goods = static_cast<int>(config.get_int("market", "goods"));
  const int attrs = static_cast<int>(config.get_int("market", "attrs"));
  const double rho = config.get_double("market", "rho", 1.0);
  // attrs = 0 means Sigma = rho*I with utilities carried entirely by noise.
  const Matrix loadings =
      attrs > 0 ? to_matrix(config.get_doubles("market", "loadings"), goods, attrs,
                            "market.loadings")
                : Matrix::Zero(goods, 0);
  const Vector gamma = attrs > 0 ? to_vector(config.get_doubles("market", "gamma")) : Vector();
  const Vector b = attrs > 0 ? to_vector(config.get_doubles("market", "b")) : Vector();
  const double phi = config.get_double("market", "phi");
  const double c = config.get_double("market", "c", 1.0);
  Vector noise;
  if (config.has("market", "noise")) noise = to_vector(config.get_doubles("market", "noise"));

  BertrandOptions opts;
  opts.max_sweeps = static_cast<int>(config.get_int("solver", "max_sweeps", opts.max_sweeps));
  opts.price_tol = config.get_double("solver", "tol", opts.price_tol);
  opts.damping = config.get_double("solver", "damping", opts.damping);
  const std::string regime = config.get_string("solver", "regime", "all");
  config.reject_unknown_keys();

  const FactorStructure market(loadings, gamma, rho);
  const Preferences prefs(b, phi, c, noise);
  const fs::path dir = prepare_output(args, config, "price-eq");

  CsvTable table({"regime", "good", "price", "quantity", "profit", "active"});
  const auto emit = [&](const std::string& name, const PriceEquilibrium& eq) {
    for (int n = 0; n < goods; ++n) {
      table.add_row({name, std::to_string(n), format_full(eq.prices(n)),
                     format_full(eq.quantities(n)), format_full(eq.profits(n)),
                     eq.is_active(n) ? "1" : "0"});
    }
  };
  if (regime == "all" || regime == "monopoly")
    emit("monopoly", monopoly_equilibrium(market, prefs));
  if (regime == "all" || regime == "closed-form")
    emit("closed_form", single_product_equilibrium(market, prefs));
  if (regime == "all" || regime == "iterative")
    emit("iterative", iterative_bertrand(market, prefs, opts));
  if (table.n_rows() == 0)
    throw validation_error("price-eq: regime must be all, monopoly, closed-form or iterative");
  table.write(dir / "price_eq.csv");
  std::cout << "wrote " << (dir / "price_eq.csv").string() << "\n";
  return 0;
}

// ---- design-monopoly ----

int run_design_monopoly(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "design-monopoly");
  const Vector b = to_vector(config.get_doubles("design", "b"));
  const Vector gamma = to_vector(config.get_doubles("design", "gamma"));
  const double c = config.get_double("design", "c");
  const double phi = config.get_double("design", "phi");
  config.reject_unknown_keys();

  const DesignSolution design = monopoly_design(b, gamma, c, phi);
  const fs::path dir = prepare_output(args, config, "design-monopoly");

  CsvTable per_attr({"attr", "orientation", "loading"});
  for (Eigen::Index k = 0; k < b.size(); ++k)
    per_attr.add_row({std::to_string(k), format_full(design.orientation(k)),
                      format_full(design.loadings(k))});
  per_attr.write(dir / "orientation.csv");

  CsvTable summary({"intensity", "net_profit"});
  summary.add_row({format_full(design.intensity), format_full(design.net_profit)});
  summary.write(dir / "summary.csv");
  std::cout << "wrote " << (dir / "orientation.csv").string() << "\n";
  return 0;
}

// ---- design-competition ----

int run_design_competition(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "design-competition");
  const Vector b = to_vector(config.get_doubles("design", "b"));
  const Vector gamma = to_vector(config.get_doubles("design", "gamma"));
  const double c = config.get_double("design", "c");
  const double phi = config.get_double("design", "phi");
  const int firms = static_cast<int>(config.get_int("design", "firms"));
  config.reject_unknown_keys();

  const double b2 = (b.array().square() / gamma.array()).sum();
  const SymmetricOutcome outcome = symmetric_competition_outcome(b2, c, phi, firms);
  const Vector d = orientation_rule(b, gamma);

  const fs::path dir = prepare_output(args, config, "design-competition");
  CsvTable per_attr({"attr", "orientation", "loading"});
  for (Eigen::Index k = 0; k < b.size(); ++k)
    per_attr.add_row({std::to_string(k), format_full(d(k)),
                      format_full(outcome.intensity * d(k) / std::sqrt(gamma(k)))});
  per_attr.write(dir / "orientation.csv");

  CsvTable summary({"intensity", "price", "quantity", "gross_profit", "net_profit",
                    "monopoly_intensity"});
  summary.add_row({format_full(outcome.intensity), format_full(outcome.price),
                   format_full(outcome.quantity), format_full(outcome.gross_profit),
                   format_full(outcome.net_profit),
                   format_full(monopoly_intensity_reduced(b2, c, phi))});
  summary.write(dir / "summary.csv");
  std::cout << "wrote " << (dir / "summary.csv").string() << "\n";
  return 0;
}

// ---- br-sim ----

int run_br_sim(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "br-sim");
  SimConfig base;
  base.n_firms = static_cast<int>(config.get_int("sim", "firms"));
  base.n_attrs = static_cast<int>(config.get_int("sim", "attrs"));
  base.b = to_vector(config.get_doubles("sim", "b"));
  base.gamma = to_vector(config.get_doubles("sim", "gamma"));
  base.phi = config.get_double("sim", "phi");
  if (config.has("sim", "cost_matrix")) {
    base.cost = to_matrix(config.get_doubles("sim", "cost_matrix"), base.n_firms, base.n_attrs,
                          "sim.cost_matrix");
  } else if (config.has("sim", "cost_vector")) {
    const Vector per_attr = to_vector(config.get_doubles("sim", "cost_vector"));
    require(per_attr.size() == base.n_attrs, "sim.cost_vector: length != attrs");
    base.cost = Matrix(base.n_firms, base.n_attrs);
    base.cost.rowwise() = per_attr.transpose();
  } else {
    base.cost = Matrix::Constant(base.n_firms, base.n_attrs, config.get_double("sim", "cost"));
  }
  base.fd_step = config.get_double("sim", "fd_step", base.fd_step);
  base.ascent_rate = config.get_double("sim", "ascent_rate", base.ascent_rate);
  base.ascent_steps_per_firm =
      static_cast<int>(config.get_int("sim", "ascent_steps", base.ascent_steps_per_firm));
  base.max_rounds = static_cast<int>(config.get_int("sim", "max_rounds", base.max_rounds));
  base.design_tol = config.get_double("sim", "design_tol", base.design_tol);
  const std::string init = config.get_string("sim", "init", "random");
  if (init == "random") {
    base.init = DesignInit::RandomGaussian;
  } else if (init == "symmetric") {
    base.init = DesignInit::Symmetric;
  } else {
    throw validation_error("sim.init must be random or symmetric");
  }
  BrBatchSpec spec;
  spec.base = base;
  spec.seeds = config.get_u64s("sim", "seeds", {1});
  if (args.seed) spec.seeds = {*args.seed};
  config.reject_unknown_keys();
  spec.base.validate();

  const fs::path dir = prepare_output(args, config, "br-sim");
  const std::vector<SimResult> results = run_br_batch(spec);
  for (size_t i = 0; i < results.size(); ++i) {
    const std::string tag = "seed" + std::to_string(spec.seeds[i]);
    write_trajectory_csv(dir / ("trajectory_" + tag + ".csv"), results[i]);
    write_alignment_csv(dir / ("alignment_" + tag + ".csv"), results[i]);
    if (args.svg) {
      SimConfig config_i = spec.base;
      config_i.seed = spec.seeds[i];
      write_design_heatmap_svg(dir / ("designs_" + tag + ".svg"), results[i], config_i);
    }
    if (!results[i].converged)
      throw numerical_error("br-sim: seed " + std::to_string(spec.seeds[i]) +
                            " did not converge, last delta " +
                            format_full(results[i].last_delta));
  }
  std::cout << "wrote " << results.size() << " result set(s) under " << dir.string() << "\n";
  return 0;
}

// ---- welfare-grid ----

int run_welfare(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "welfare-grid");
  WelfareGridSpec spec;
  const std::string kind = config.get_string("grid", "kind", "c-phi");
  if (kind == "c-phi") {
    spec.kind = WelfareGridKind::CostPhi;
  } else if (kind == "b-gamma") {
    spec.kind = WelfareGridKind::BGamma;
  } else {
    throw validation_error("grid.kind must be c-phi or b-gamma");
  }
  spec.n_goods = static_cast<int>(config.get_int("grid", "firms", spec.n_goods));
  spec.b2 = config.get_double("grid", "B", spec.b2);
  spec.c_min = config.get_double("grid", "c_min", spec.c_min);
  spec.c_max = config.get_double("grid", "c_max", spec.c_max);
  spec.phi_min = config.get_double("grid", "phi_min", spec.phi_min);
  spec.phi_max = config.get_double("grid", "phi_max", spec.phi_max);
  spec.c_fixed = config.get_double("grid", "c", spec.c_fixed);
  spec.phi_fixed = config.get_double("grid", "phi", spec.phi_fixed);
  spec.b2_min = config.get_double("grid", "B_min", spec.b2_min);
  spec.b2_max = config.get_double("grid", "B_max", spec.b2_max);
  spec.gamma_min = config.get_double("grid", "gamma_min", spec.gamma_min);
  spec.gamma_max = config.get_double("grid", "gamma_max", spec.gamma_max);
  spec.axis1_steps = static_cast<int>(config.get_int("grid", "axis1_steps", spec.axis1_steps));
  spec.axis2_steps = static_cast<int>(config.get_int("grid", "axis2_steps", spec.axis2_steps));
  config.reject_unknown_keys();

  const fs::path dir = prepare_output(args, config, "welfare-grid");
  const GridResult grid = run_welfare_grid(spec);
  grid.to_csv(dir / "welfare_grid.csv");
  if (args.svg) {
    HeatmapSpec heat;
    heat.axis1_label = grid.axis1_name;
    heat.axis2_label = grid.axis2_name;
    heat.axis1 = grid.axis1;
    heat.axis2 = grid.axis2;
    heat.title = "Consumer surplus gap (monopoly - competition)";
    write_svg_heatmap(dir / "delta_cs.svg", grid.output_matrix(4), heat);
    heat.title = "Monopoly design intensity";
    write_svg_heatmap(dir / "t_monopoly.svg", grid.output_matrix(0), heat);
    heat.title = "Competition design intensity";
    write_svg_heatmap(dir / "t_competition.svg", grid.output_matrix(1), heat);
  }
  std::cout << "wrote " << (dir / "welfare_grid.csv").string() << "\n";
  return 0;
}

// ---- rho-grid ----

int run_rho(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "rho-grid");
  RhoGridSpec spec;
  spec.ratio_min = config.get_double("grid", "ratio_min", spec.ratio_min);
  spec.ratio_max = config.get_double("grid", "ratio_max", spec.ratio_max);
  spec.axis_steps = static_cast<int>(config.get_int("grid", "axis_steps", spec.axis_steps));
  spec.mu = config.get_double("grid", "mu", spec.mu);
  spec.phi = config.get_double("grid", "phi", spec.phi);
  const std::string map = config.get_string("grid", "map", "both");
  config.reject_unknown_keys();
  if (map != "both" && map != "monopoly" && map != "duopoly")
    throw validation_error("grid.map must be both, monopoly or duopoly");

  const fs::path dir = prepare_output(args, config, "rho-grid");
  const auto emit = [&](RhoMapKind kind, const std::string& name) {
    const GridResult grid = run_rho_grid(spec, kind);
    grid.to_csv(dir / ("rho_" + name + ".csv"));
    to_rho_grid(grid);  // enforces the [0,1] invariant
    if (args.svg) {
      HeatmapSpec heat;
      heat.axis1_label = grid.axis1_name;
      heat.axis2_label = grid.axis2_name;
      heat.axis1 = grid.axis1;
      heat.axis2 = grid.axis2;
      heat.title = "rho* (" + name + ")";
      write_svg_heatmap(dir / ("rho_" + name + ".svg"), grid.output_matrix(0), heat);
    }
  };
  if (map == "both" || map == "monopoly") emit(RhoMapKind::Monopoly, "monopoly");
  if (map == "both" || map == "duopoly") emit(RhoMapKind::Duopoly, "duopoly");
  std::cout << "wrote rho grid(s) under " << dir.string() << "\n";
  return 0;
}

// ---- rotation-demo ----

int run_rotation_demo(const CommonArgs& args) {
  IniConfig config = IniConfig::load(args.config_path);
  check_experiment_type(config, "rotation-demo");
  const int dimension = static_cast<int>(config.get_int("rotation", "attrs", 4));
  const int fixtures = static_cast<int>(config.get_int("rotation", "fixtures", 12));
  std::uint64_t seed = static_cast<std::uint64_t>(config.get_int("rotation", "seed", 1));
  if (args.seed) seed = *args.seed;
  config.reject_unknown_keys();
  require(dimension >= 2, "rotation-demo: need at least two attributes");

  Rng rng(seed);
  const fs::path dir = prepare_output(args, config, "rotation-demo");
  CsvTable table({"pair_i", "pair_j", "beta_p", "beta_q", "theta_true", "theta_hat", "residual"});
  for (int fixture = 0; fixture < fixtures; ++fixture) {
    const int i = static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(dimension - 1));
    const int j = i + 1 +
                  static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(dimension - 1 - i));
    const double beta_p = 0.1 + 0.8 * rng.next_unit();
    double beta_q = 0.1 + 0.8 * rng.next_unit();
    if (std::abs(beta_p - beta_q) < 1e-3) beta_q += 0.05;
    const double theta = (rng.next_unit() - 0.5) * M_PI * 0.98;  // within the identified range
    Eigen::Vector2d v(rng.normal(), rng.normal());
    if (v.norm() < 1e-3) v << 1.0, 0.5;
    const Eigen::Vector2d h = pair_forward(v, beta_p, beta_q, theta);
    const AngleRecovery rec = recover_angle(v, h, beta_p, beta_q);
    table.add_row({std::to_string(i), std::to_string(j), format_full(beta_p), format_full(beta_q),
                   format_full(theta), format_full(rec.theta), format_full(rec.residual)});
  }
  table.write(dir / "rotation_demo.csv");
  std::cout << "wrote " << (dir / "rotation_demo.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Attribute-based product competition toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", args.config_path, "Experiment configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_dir, "Output directory");
    cmd->add_option("--seed", args.seed, "Override the experiment seed");
    cmd->add_flag("--svg", args.svg, "Emit SVG heatmaps alongside CSVs");
  };

  int (*handler)(const CommonArgs&) = nullptr;
  const auto bind = [&](const std::string& name, const std::string& help,
                        int (*fn)(const CommonArgs&)) {
    CLI::App* cmd = app.add_subcommand(name, help);
    add_common(cmd);
    cmd->callback([&handler, fn] { handler = fn; });
  };
  bind("price-eq", "Monopoly / single-product price equilibria for a fixed market", run_price_eq);
  bind("design-monopoly", "Closed-form monopoly design (orientation and intensity)",
       run_design_monopoly);
  bind("design-competition", "Symmetric non-exclusive design equilibrium", run_design_competition);
  bind("br-sim", "Numerical best-response design dynamics", run_br_sim);
  bind("welfare-grid", "Monopoly vs competition welfare comparative statics", run_welfare);
  bind("rho-grid", "Two-consumer horizontal-differentiation maps", run_rho);
  bind("rotation-demo", "Givens rotation pair-recovery fixtures", run_rotation_demo);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    const int code = app.exit(error);
    return code == 0 ? 0 : 1;  // bad arguments count as validation errors
  }

  try {
    return handler ? handler(args) : 1;
  } catch (const validation_error& error) {
    std::cerr << "validation error: " << error.what() << "\n";
    return 1;
  } catch (const CLI::Error& error) {
    std::cerr << "argument error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "numerical error: " << error.what() << "\n";
    return 2;
  }
}
