#pragma once

#include "mmtop/mesh.hpp"
#include "mmtop/sector_geometry.hpp"

#include <Eigen/Dense>

#include <stdexcept>
#include <vector>

namespace mmtop {

class DegenerateFieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Nodal P1 field psi : vertices -> R^(M-1); one row per vertex.
class VectorLevelSet {
 public:
  VectorLevelSet() = default;
  VectorLevelSet(int materials, Eigen::MatrixXd values);

  /// psi(v) = value at every vertex.
  static VectorLevelSet constant(const Mesh& mesh, int materials, const Eigen::VectorXd& value);

  int materials() const { return materials_; }
  int num_vertices() const { return static_cast<int>(values_.rows()); }
  const Eigen::MatrixXd& values() const { return values_; }
  Eigen::MatrixXd& values() { return values_; }
  auto at(int v) const { return values_.row(v).transpose(); }

 private:
  int materials_ = 0;
  Eigen::MatrixXd values_;
};

/// Per-element material labels (1..M) and volume fractions |T n Omega_i|/|T|.
struct MaterialMap {
  int materials = 0;
  std::vector<MaterialIndex> labels;
  Eigen::MatrixXd fractions;  // num_triangles x M

  int num_elements() const { return static_cast<int>(labels.size()); }

  /// Every element fully assigned to the given labels.
  static MaterialMap from_labels(int materials, std::vector<MaterialIndex> labels);

  /// |Omega_i| = sum_T |T| fraction_i(T), for i = 1..M (entry i-1).
  Eigen::VectorXd volumes(const Mesh& mesh) const;
};

/// Lumped-mass L2 inner product sum_v m_v a(v).b(v).
double l2_inner(const Mesh& mesh, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
double l2_inner(const Mesh& mesh, const VectorLevelSet& a, const VectorLevelSet& b);
double l2_norm(const Mesh& mesh, const Eigen::MatrixXd& a);

/// Scales psi to unit L2 norm. Throws DegenerateFieldError for a zero field.
VectorLevelSet normalize(const Mesh& mesh, const VectorLevelSet& psi);

/// Barycentric sub-centroids of the 4^depth congruent subtriangles.
std::vector<Eigen::Vector3d> subdivision_samples(int depth);

/// Volume fractions by sector classification of psi at the sub-centroids of
/// a 4^depth uniform subdivision; depth 0 is pure centroid classification.
MaterialMap classify_elements(const Mesh& mesh, const VectorLevelSet& psi, const SectorStructure& sectors,
                              int depth);

/// Per-vertex arithmetic mean of per-element rows. Vertices without incident
/// elements receive zero (with a warning on stderr).
Eigen::MatrixXd filter_to_nodes(const Mesh& mesh, const Eigen::MatrixXd& element_values);

}  // namespace mmtop
