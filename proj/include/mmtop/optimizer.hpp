#pragma once

#include "mmtop/field.hpp"
#include "mmtop/generalized_td.hpp"
#include "mmtop/mesh.hpp"
#include "mmtop/sector_geometry.hpp"

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmtop {

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// G vanishes identically, so the angle to psi is undefined.
class StationaryFieldError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// psi and G point in opposite directions; the great circle is not unique.
class AntipodalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Objective value and topological derivatives of one design.
struct Evaluation {
  double objective = 0.0;
  double compliance = 0.0;  // zero for problems without a state equation
  TDField td;
};

/// A multi-material shape function on a fixed mesh.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual const Mesh& mesh() const = 0;
  virtual const SectorStructure& sectors() const = 0;
  virtual Evaluation evaluate(const MaterialMap& design) = 0;
};

struct OptimizerConfig {
  double eps_theta_deg = 0.5;
  double kappa_max = 1.0;  // upper bound on the step fraction
  int max_iter = 500;
  int max_halvings = 15;
  int filter_depth = 3;
  bool line_search = true;  // false: always accept kappa_max

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

struct IterationRecord {
  int iter = 0;
  double objective = 0.0;
  double compliance = 0.0;
  double theta_deg = 0.0;
  double kappa = 0.0;  // step accepted from this iterate (0 for the last one)
  bool design_changed = false;  // whether that step changed the material map
  Eigen::VectorXd volumes;
  double sphere_error = 0.0;  // | ||psi_k|| - 1 |
};

enum class RunStatus { Converged, MaxIter, NoDescent };

std::string to_string(RunStatus status);

/// An element whose material changed i -> j while T^{i->j} of the previous
/// iterate was not negative.
struct SwitchViolation {
  int iter;
  int element;
  MaterialIndex from, to;
  double td;
};

struct DescentMonitor {
  long switches = 0;
  long violations = 0;
  std::vector<SwitchViolation> log;
  double violation_ratio() const { return switches == 0 ? 0.0 : static_cast<double>(violations) / switches; }
};

struct RunResult {
  VectorLevelSet psi;
  MaterialMap design;
  Evaluation evaluation;
  std::vector<IterationRecord> history;
  RunStatus status = RunStatus::MaxIter;
  DescentMonitor descent;
  double max_sphere_error = 0.0;
  int iterations() const { return static_cast<int>(history.size()) - 1; }
};

/// Snapshot handed to observers once per iterate, before the step.
struct IterateView {
  const IterationRecord& record;
  const VectorLevelSet& psi;
  const MaterialMap& design;
  const Evaluation& evaluation;
  const Eigen::MatrixXd& g;
};

using IterateObserver = std::function<void(const IterateView&)>;

/// Angle in degrees between psi and G in the lumped L2 sense.
double compute_angle(const Mesh& mesh, const VectorLevelSet& psi, const Eigen::MatrixXd& g);

/// Spherical interpolation from psi towards G/||G|| by the fraction kappa of
/// the angle theta_deg; the result is renormalized.
VectorLevelSet sphere_step(const Mesh& mesh, const VectorLevelSet& psi, const Eigen::MatrixXd& g, double kappa,
                           double theta_deg);

/// Constant, L2-normalized field at the cone centroid of sector `material`.
VectorLevelSet initial_design(const Mesh& mesh, const SectorStructure& sectors, MaterialIndex material);

/// Fixed-point iteration psi -> G_psi on the unit sphere with step halving.
/// A step is accepted when it strictly decreases J or leaves the material
/// map untouched; NoDescent is reported when every halving increases J.
RunResult run(Problem& problem, const VectorLevelSet& psi0, const OptimizerConfig& config,
              const IterateObserver& observer = {});

}  // namespace mmtop
