#include "mmtop/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numbers>

namespace mmtop {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

}  // namespace

void OptimizerConfig::validate() const {
  if (!(kappa_max > 0.0 && kappa_max <= 1.0)) throw std::invalid_argument("kappa_max must lie in (0, 1]");
  if (!(eps_theta_deg > 0.0)) throw std::invalid_argument("eps_theta_deg must be positive");
  if (max_iter < 0) throw std::invalid_argument("max_iter must be >= 0");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be >= 0");
  if (filter_depth < 0) throw std::invalid_argument("filter_depth must be >= 0");
}

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "Converged";
    case RunStatus::MaxIter: return "MaxIter";
    case RunStatus::NoDescent: return "NoDescent";
  }
  return "Unknown";
}

double compute_angle(const Mesh& mesh, const VectorLevelSet& psi, const Eigen::MatrixXd& g) {
  const double g_norm = l2_norm(mesh, g);
  if (!(g_norm > 0.0)) throw StationaryFieldError("generalized topological derivative vanishes");
  const double psi_norm = l2_norm(mesh, psi.values());
  if (!(psi_norm > 0.0)) throw DegenerateFieldError("level set function vanishes");
  // 2 atan2(|a - b|, |a + b|) keeps full precision near 0 and 180 degrees.
  const Eigen::MatrixXd a = psi.values() / psi_norm;
  const Eigen::MatrixXd b = g / g_norm;
  return 2.0 * std::atan2(l2_norm(mesh, a - b), l2_norm(mesh, a + b)) * kDeg;
}

VectorLevelSet sphere_step(const Mesh& mesh, const VectorLevelSet& psi, const Eigen::MatrixXd& g, double kappa,
                           double theta_deg) {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::invalid_argument("step fraction kappa must lie in [0, 1]");
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) throw std::invalid_argument("angle must lie in [0, 180]");
  if (theta_deg == 0.0) return psi;
  const double theta = theta_deg / kDeg;
  const double s = std::sin(theta);
  if (s < 1e-14) throw AntipodalError("psi and G are antipodal; spherical step undefined");
  const double g_norm = l2_norm(mesh, g);
  if (!(g_norm > 0.0)) throw StationaryFieldError("generalized topological derivative vanishes");

  Eigen::MatrixXd next = (std::sin((1.0 - kappa) * theta) / s) * psi.values() +
                         (std::sin(kappa * theta) / (s * g_norm)) * g;
  return normalize(mesh, VectorLevelSet(psi.materials(), std::move(next)));
}

VectorLevelSet initial_design(const Mesh& mesh, const SectorStructure& sectors, MaterialIndex material) {
  return normalize(mesh, VectorLevelSet::constant(mesh, sectors.materials(), sectors.sector_center(material)));
}

RunResult run(Problem& problem, const VectorLevelSet& psi0, const OptimizerConfig& config,
              const IterateObserver& observer) {
  config.validate();
  const Mesh& mesh = problem.mesh();
  const SectorStructure& sectors = problem.sectors();

  RunResult result;
  result.psi = normalize(mesh, psi0);
  result.design = classify_elements(mesh, result.psi, sectors, config.filter_depth);
  result.evaluation = problem.evaluate(result.design);

  for (int k = 0;; ++k) {
    const Eigen::MatrixXd g = assemble_g_field(sectors, result.evaluation.td, mesh);
    const double theta = compute_angle(mesh, result.psi, g);

    IterationRecord rec;
    rec.iter = k;
    rec.objective = result.evaluation.objective;
    rec.compliance = result.evaluation.compliance;
    rec.theta_deg = theta;
    rec.volumes = result.design.volumes(mesh);
    rec.sphere_error = std::abs(l2_norm(mesh, result.psi.values()) - 1.0);
    result.max_sphere_error = std::max(result.max_sphere_error, rec.sphere_error);
    result.history.push_back(rec);
    if (observer) observer(IterateView{result.history.back(), result.psi, result.design, result.evaluation, g});

    if (theta < config.eps_theta_deg) {
      result.status = RunStatus::Converged;
      break;
    }
    if (k >= config.max_iter) {
      result.status = RunStatus::MaxIter;
      break;
    }

    bool accepted = false;
    bool neutral = false;
    double kappa = config.kappa_max;
    VectorLevelSet trial_psi;
    MaterialMap trial_design;
    Evaluation trial_eval;
    for (int h = 0; h <= config.max_halvings; ++h, kappa *= 0.5) {
      trial_psi = sphere_step(mesh, result.psi, g, kappa, theta);
      trial_design = classify_elements(mesh, trial_psi, sectors, config.filter_depth);
      if (trial_design.fractions == result.design.fractions) {
        // Level set moved without changing the design; J is unchanged.
        trial_eval = result.evaluation;
        neutral = true;
        accepted = true;
        break;
      }
      trial_eval = problem.evaluate(trial_design);
      if (!config.line_search || trial_eval.objective < result.evaluation.objective) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      result.status = RunStatus::NoDescent;
      break;
    }

    // Every element that changed material must have had a negative TD for
    // that switch at the previous iterate.
    for (int t = 0; t < result.design.num_elements(); ++t) {
      const MaterialIndex from = result.design.labels[t];
      const MaterialIndex to = trial_design.labels[t];
      if (from == to) continue;
      ++result.descent.switches;
      const double td = result.evaluation.td.derivative(t, to);
      if (!(td < 0.0)) {
        ++result.descent.violations;
        result.descent.log.push_back({k, t, from, to, td});
      }
    }

    result.history.back().kappa = kappa;
    result.history.back().design_changed = !neutral;
    result.psi = std::move(trial_psi);
    result.design = std::move(trial_design);
    result.evaluation = std::move(trial_eval);
  }
  return result;
}

}  // namespace mmtop
