#pragma once

#include "mmtop/field.hpp"
#include "mmtop/mesh.hpp"
#include "mmtop/optimizer.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mmtop {

struct LameParameters {
  double lambda = 0.0;
  double mu = 0.0;
};

/// Plane-stress Lame pair: mu = E / (2(1+nu)), lambda = E nu / ((1+nu)(1-nu)).
LameParameters lame(double young, double poisson);

/// Isotropic phase. `young` and `poisson` feed the polarization tensor;
/// `stiffness` is the tensor used in the state equation (normally
/// lame(young, poisson), but the void phase uses a scaled mixture).
struct ElasticMaterial {
  double young = 1.0;
  double poisson = 0.0;
  double penalty = 0.0;  // volume weight in the objective
  LameParameters stiffness;
};

ElasticMaterial make_material(double young, double poisson, double penalty);

/// Strong, weak and void phases. The void stiffness is 1e-4 (A_1 + A_2);
/// its (E, nu) are kept as given for the topological derivative.
struct MaterialParameters {
  double E1 = 1.0, E2 = 0.5, E3 = 1e-4;
  double nu1 = 0.3333, nu2 = 0.3333, nu3 = 0.3333e-4;
  double l1 = 2.0, l2 = 0.5;
};
std::vector<ElasticMaterial> three_materials(const MaterialParameters& p = {});

/// A e = 2 mu e + lambda tr(e) I.
Eigen::Matrix2d apply_tensor(const LameParameters& a, const Eigen::Matrix2d& e);

/// Fraction-weighted mixture of the phase tensors.
LameParameters interpolate_element_tensor(std::span<const ElasticMaterial> materials,
                                          const Eigen::Ref<const Eigen::RowVectorXd>& fractions);

struct PolarizationCoefficients {
  double alpha, beta, gamma, tau1, tau2, tau3;
};

PolarizationCoefficients polarization_coefficients(const ElasticMaterial& from, const ElasticMaterial& to);

/// Polarization tensor of a circular inclusion of `to` inside `from`,
/// P e = identity_coeff e + trace_coeff tr(e) I.
struct PolarizationTensor {
  double identity_coeff = 0.0;
  double trace_coeff = 0.0;
  Eigen::Matrix2d apply(const Eigen::Matrix2d& e) const {
    return identity_coeff * e + trace_coeff * e.trace() * Eigen::Matrix2d::Identity();
  }
};

/// Throws NumericalError if beta gamma + tau1 or alpha gamma + tau2 vanishes.
PolarizationTensor polarization(const ElasticMaterial& from, const ElasticMaterial& to);

struct DirichletCondition {
  std::string tag;
  bool fix_x = true;
  bool fix_y = true;
};

/// Traction g on boundary segments carrying `tag`. With a window, only the
/// part of each segment inside the window is loaded.
struct TractionLoad {
  std::string tag;
  Eigen::Vector2d g;
  std::optional<Box> window;
};

/// Zero displacement components at a single vertex.
struct PinnedVertex {
  int vertex = 0;
  bool fix_x = true;
  bool fix_y = true;
};

struct BoundaryConditions {
  std::vector<DirichletCondition> dirichlet;
  std::vector<PinnedVertex> pins;
  std::vector<TractionLoad> loads;
};

struct ElasticState {
  Eigen::MatrixXd displacement;          // num_vertices x 2
  std::vector<Eigen::Matrix2d> strains;  // per element
  double compliance = 0.0;               // sum_T |T| A eps : eps
  double load_work = 0.0;                // f . u
  double residual = 0.0;                 // ||K u - f|| / ||f||
};

/// The system is singular (rigid motions not suppressed).
class RigidModeError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// P1 plane-stress solver for a fixed mesh and boundary data. The sparsity
/// pattern and symbolic factorization are reused across solves.
class ElasticitySolver {
 public:
  ElasticitySolver(const Mesh& mesh, BoundaryConditions bc);
  ~ElasticitySolver();
  ElasticitySolver(const ElasticitySolver&) = delete;
  ElasticitySolver& operator=(const ElasticitySolver&) = delete;

  /// One Lame pair per element.
  ElasticState solve(std::span<const LameParameters> element_tensors);

  const Eigen::VectorXd& load_vector() const { return load_; }
  int num_free_dofs() const { return static_cast<int>(free_dofs_.size()); }

  /// Element stiffness in local dof order (u0x, u0y, u1x, u1y, u2x, u2y).
  Eigen::Matrix<double, 6, 6> element_stiffness(int t, const LameParameters& a) const;

  /// Assembled stiffness restricted to free dofs.
  Eigen::SparseMatrix<double> reduced_stiffness(std::span<const LameParameters> element_tensors) const;

 private:
  struct Factorization;

  const Mesh& mesh_;
  BoundaryConditions bc_;
  std::vector<Eigen::Matrix<double, 3, 6>> b_;  // strain-displacement, engineering shear
  std::vector<int> dof_map_;                    // global dof -> free index or -1
  std::vector<int> free_dofs_;
  Eigen::VectorXd load_;  // full length 2 * num_vertices
  std::unique_ptr<Factorization> factorization_;
};

/// One-shot solve with the material tensors interpolated from a design.
ElasticState solve(const Mesh& mesh, const MaterialMap& design, std::span<const ElasticMaterial> materials,
                   const BoundaryConditions& bc);

/// (P^{i->j} A_i eps) : eps - l_i + l_j with eps the element strain.
double td_elasticity(const ElasticState& state, std::span<const ElasticMaterial> materials, MaterialIndex i,
                     MaterialIndex j, int element);

/// Compliance plus volume penalties sum_i l_i |Omega_i|.
double elasticity_objective(const Mesh& mesh, const MaterialMap& design, const ElasticState& state,
                            std::span<const ElasticMaterial> materials);

class ElasticityProblem final : public Problem {
 public:
  ElasticityProblem(Mesh mesh, std::vector<ElasticMaterial> materials, BoundaryConditions bc);

  const Mesh& mesh() const override { return mesh_; }
  const SectorStructure& sectors() const override { return sectors_; }
  const std::vector<ElasticMaterial>& materials() const { return materials_; }
  Evaluation evaluate(const MaterialMap& design) override;

  /// State of the most recent evaluation.
  const ElasticState& last_state() const { return state_; }

 private:
  Mesh mesh_;
  std::vector<ElasticMaterial> materials_;
  SectorStructure sectors_;
  ElasticitySolver solver_;
  ElasticState state_;
};

}  // namespace mmtop
