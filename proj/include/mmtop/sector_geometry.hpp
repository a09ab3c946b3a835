#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace mmtop {

/// Material indices are 1-based throughout the public API (1..M).
using MaterialIndex = int;

class InvalidSectorConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Partition of R^(M-1) into M open convex cones S_1..S_M, one per material.
///
/// Sector S_l is the open positive conic hull of the anchor points
/// {P_i : i != l}. Two sectors S_i and S_j share the facet spanned by the
/// remaining M-2 anchors; n(i, j) is the unit normal to that facet pointing
/// out of S_i and into S_j, so S_l = {y : y . n(j, l) > 0 for all j != l}.
///
/// Immutable after construction.
class SectorStructure {
 public:
  /// Default anchors: P_i = e_i for i < M and P_M = (-1, ..., -1).
  explicit SectorStructure(int materials);

  /// Custom anchors (columns of `anchors`, M columns in R^(M-1)). Throws
  /// InvalidSectorConfiguration if any normal matrix is singular.
  explicit SectorStructure(const Eigen::MatrixXd& anchors);

  int materials() const { return materials_; }
  int dimension() const { return materials_ - 1; }

  /// Anchor point P_l, l in 1..M.
  Eigen::VectorXd anchor(MaterialIndex l) const;

  /// n^{i->j}. Throws std::invalid_argument for i == j or out-of-range indices.
  const Eigen::VectorXd& normal(MaterialIndex i, MaterialIndex j) const;

  /// N^(l): rows are n^{i->l} for i != l in ascending i.
  const Eigen::MatrixXd& normal_matrix(MaterialIndex l) const;
  const Eigen::MatrixXd& normal_matrix_inverse(MaterialIndex l) const;

  /// 2-norm condition number of N^(l).
  double condition_number(MaterialIndex l) const;

  /// Strict membership in the open sector S_l.
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p, MaterialIndex l) const;

  /// min_{j != l} p . n^{j->l}; positive iff p lies in S_l.
  double margin(const Eigen::Ref<const Eigen::VectorXd>& p, MaterialIndex l) const;

  /// Total classification: the sector with the largest margin, smallest index
  /// on ties. Interior points get their unique sector; the origin maps to 1.
  MaterialIndex classify(const Eigen::Ref<const Eigen::VectorXd>& p) const;

  /// Unit vector along the positive-cone centroid of S_l, sum_{i != l} P_i.
  Eigen::VectorXd sector_center(MaterialIndex l) const;

 private:
  void build();
  void check_index(MaterialIndex l) const;
  int pair_slot(MaterialIndex i, MaterialIndex j) const;

  int materials_;
  Eigen::MatrixXd anchors_;
  // normals_[(i-1)*M + (j-1)], diagonal entries empty.
  std::vector<Eigen::VectorXd> normals_;
  std::vector<Eigen::MatrixXd> normal_matrices_;
  std::vector<Eigen::MatrixXd> normal_inverses_;
  std::vector<double> condition_numbers_;
};

/// Position of T^{i->j} inside the vector of topological derivatives of
/// source material i, which skips the entry j == i.
inline int td_slot(MaterialIndex i, MaterialIndex j) { return j < i ? j - 1 : j - 2; }

/// Inverse of td_slot: target material stored at position k for source i.
inline MaterialIndex td_target(MaterialIndex i, int k) { return k + 1 < i ? k + 1 : k + 2; }

/// Table of all normals n^{i->j}, i < j, one per line, 12 significant digits.
std::string format_normal_table(const SectorStructure& sectors);

}  // namespace mmtop
