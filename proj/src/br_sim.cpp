#include "attribmkt/br_sim.hpp"

#include <cmath>

#include "attribmkt/design.hpp"
#include "attribmkt/rng.hpp"

namespace attribmkt {

namespace {

constexpr double kImproveTol = 1e-12;
constexpr int kMaxBacktrack = 30;

PriceEquilibrium price_stage(const Matrix& designs, const SimConfig& config) {
  const FactorStructure fs(designs, config.gamma, 1.0);
  const Preferences prefs(config.b, config.phi, config.cost.mean());
  return iterative_bertrand(fs, prefs);
}

double design_cost(const Matrix& designs, int firm, const SimConfig& config) {
  return 0.5 * (config.cost.row(firm).array() * designs.row(firm).array().square()).sum();
}

Matrix initial_design(const SimConfig& config) {
  switch (config.init) {
    case DesignInit::Custom:
      require(config.custom_init.rows() == config.n_firms &&
                  config.custom_init.cols() == config.n_attrs,
              "br_sim: custom init has wrong dimensions");
      return config.custom_init;
    case DesignInit::Symmetric: {
      const Vector d = orientation_rule(config.b, config.gamma);
      const double c_ref = config.cost.mean();
      const double t =
          symmetric_intensity(config.b, config.gamma, c_ref, config.phi, config.n_firms);
      const Vector row = t * d.array() / config.gamma.array().sqrt();
      Matrix out(config.n_firms, config.n_attrs);
      out.rowwise() = row.transpose();
      return out;
    }
    case DesignInit::RandomGaussian:
    default: {
      Rng rng(config.seed);
      Matrix out(config.n_firms, config.n_attrs);
      for (int n = 0; n < config.n_firms; ++n)
        for (int k = 0; k < config.n_attrs; ++k) out(n, k) = rng.normal(0.0, 0.1);
      // Rows are sign-flipped so every good starts with nonnegative utility;
      // a mean-zero draw would otherwise shut half the firms down in round 1.
      for (int n = 0; n < config.n_firms; ++n)
        if (out.row(n).dot(config.b) < 0.0) out.row(n) = -out.row(n);
      return out;
    }
  }
}

}  // namespace

SimConfig SimConfig::homogeneous(int n_firms, int n_attrs, Vector b, Vector gamma, double phi,
                                 double c) {
  SimConfig config;
  config.n_firms = n_firms;
  config.n_attrs = n_attrs;
  config.b = std::move(b);
  config.gamma = std::move(gamma);
  config.phi = phi;
  config.cost = Matrix::Constant(n_firms, n_attrs, c);
  config.validate();
  return config;
}

void SimConfig::validate() const {
  require(n_firms >= 1 && n_attrs >= 1, "br_sim: need at least one firm and one attribute");
  require(b.size() == n_attrs && gamma.size() == n_attrs, "br_sim: b/gamma length != n_attrs");
  require((gamma.array() > 0.0).all(), "br_sim: gamma must be > 0");
  require(phi < 0.0, "br_sim: phi must be < 0");
  require(cost.rows() == n_firms && cost.cols() == n_attrs, "br_sim: cost matrix must be N x K");
  require((cost.array() > 0.0).all(), "br_sim: attribute costs must be > 0");
  require(fd_step > 0.0 && ascent_rate > 0.0 && design_tol > 0.0, "br_sim: steps must be > 0");
  require(ascent_steps_per_firm >= 1 && max_rounds >= 1, "br_sim: iteration counts must be >= 1");
}

double firm_objective(const Matrix& designs, int firm, const SimConfig& config) {
  require(designs.rows() == config.n_firms && designs.cols() == config.n_attrs,
          "firm_objective: design matrix must be N x K");
  require(firm >= 0 && firm < config.n_firms, "firm_objective: firm index out of range");
  const PriceEquilibrium eq = price_stage(designs, config);
  return eq.profits(firm) - design_cost(designs, firm, config);
}

SimResult run_best_response(const SimConfig& config) {
  config.validate();
  const int n = config.n_firms;
  const int k = config.n_attrs;

  Matrix designs = initial_design(config);
  std::vector<bool> exited(n, false);

  SimResult result;
  result.trajectory.reserve(16);

  for (int round = 0; round < config.max_rounds; ++round) {
    double round_delta = 0.0;

    for (int firm = 0; firm < n; ++firm) {
      if (exited[firm]) continue;
      for (int step = 0; step < config.ascent_steps_per_firm; ++step) {
        const double base = firm_objective(designs, firm, config);
        Vector grad(k);
        for (int j = 0; j < k; ++j) {
          const double saved = designs(firm, j);
          designs(firm, j) = saved + config.fd_step;
          const double up = firm_objective(designs, firm, config);
          designs(firm, j) = saved - config.fd_step;
          const double down = firm_objective(designs, firm, config);
          designs(firm, j) = saved;
          grad(j) = (up - down) / (2.0 * config.fd_step);
        }
        if (grad.norm() == 0.0) break;

        const Eigen::RowVectorXd row = designs.row(firm);
        double rate = config.ascent_rate;
        bool accepted = false;
        for (int halving = 0; halving <= kMaxBacktrack; ++halving) {
          designs.row(firm) = row + rate * grad.transpose();
          if (firm_objective(designs, firm, config) >= base - kImproveTol) {
            accepted = true;
            break;
          }
          rate *= 0.5;
        }
        if (!accepted) {
          designs.row(firm) = row;
          break;
        }
        const double moved = rate * grad.cwiseAbs().maxCoeff();
        round_delta = std::max(round_delta, moved);
        if (moved < 0.05 * config.design_tol) break;  // own optimum pinned down
      }
    }

    // Shutdown: firms with zero sales leave the market for good.
    const PriceEquilibrium eq = price_stage(designs, config);
    for (int firm = 0; firm < n; ++firm) {
      if (exited[firm] || eq.is_active(firm)) continue;
      exited[firm] = true;
      round_delta = std::max(round_delta, designs.row(firm).cwiseAbs().maxCoeff());
      designs.row(firm).setZero();
    }

    SimRound snapshot;
    snapshot.designs = designs;
    snapshot.net_profits = Vector(n);
    for (int firm = 0; firm < n; ++firm)
      snapshot.net_profits(firm) = eq.profits(firm) - design_cost(designs, firm, config);
    snapshot.active.assign(n, false);
    for (int firm = 0; firm < n; ++firm) snapshot.active[firm] = !exited[firm];
    result.trajectory.push_back(std::move(snapshot));

    result.rounds = round + 1;
    result.last_delta = round_delta;
    if (round_delta < config.design_tol) {
      result.converged = true;
      break;
    }
  }

  result.final_design = designs;
  for (int firm = 0; firm < n; ++firm)
    if (!exited[firm]) result.active.push_back(firm);

  const auto report = alignment_report(designs, config.b, config.gamma);
  result.alignment = Vector(n);
  result.intensity = Vector(n);
  for (int firm = 0; firm < n; ++firm) {
    result.alignment(firm) = report[firm].cosine;
    result.intensity(firm) = report[firm].intensity;
  }
  return result;
}

std::vector<AlignmentEntry> alignment_report(const Matrix& designs, const Vector& b,
                                             const Vector& gamma) {
  require(designs.cols() == b.size() && b.size() == gamma.size(),
          "alignment_report: dimension mismatch");
  const Vector target = b.array() * gamma.array().pow(-1.5);
  const double target_norm = target.norm();
  std::vector<AlignmentEntry> out(designs.rows());
  for (Eigen::Index firm = 0; firm < designs.rows(); ++firm) {
    const Vector hat_row = designs.row(firm).transpose().array() * gamma.array().sqrt();
    const double norm = hat_row.norm();
    out[firm].intensity = norm;
    if (norm > 0.0 && target_norm > 0.0) out[firm].cosine = hat_row.dot(target) / (norm * target_norm);
  }
  return out;
}

std::vector<HeteroOrientationEntry> heterogeneous_orientation_check(const SimResult& result,
                                                                    const SimConfig& config) {
  const Vector b_hat = config.b.array() / config.gamma.array().sqrt();
  const double c_ref = config.cost.mean();
  const double t_hom =
      symmetric_intensity(config.b, config.gamma, c_ref, config.phi, config.n_firms);

  std::vector<HeteroOrientationEntry> out(config.n_firms);
  for (int firm = 0; firm < config.n_firms; ++firm) {
    auto& entry = out[firm];
    entry.active = std::binary_search(result.active.begin(), result.active.end(), firm);
    const Vector row = result.final_design.row(firm);
    const Vector hat_row = row.array() * config.gamma.array().sqrt();
    const double norm = hat_row.norm();
    if (!entry.active || norm == 0.0) {
      entry.active = false;
      continue;
    }
    const Vector adjusted = b_hat.array() / config.cost.row(firm).transpose().array();
    const double cosine =
        std::min(1.0, std::abs(hat_row.dot(adjusted)) / (norm * adjusted.norm()));
    entry.angle = std::acos(cosine);

    const double row_norm = row.norm();
    const double dominant = row.cwiseAbs().maxCoeff();
    entry.asymmetric_flag = row_norm > 0.0 && dominant > 0.95 * row_norm && norm < 0.5 * t_hom;
  }
  return out;
}

}  // namespace attribmkt
