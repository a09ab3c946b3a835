#pragma once

#include "mmtop/field.hpp"
#include "mmtop/sector_geometry.hpp"

#include <Eigen/Dense>

#include <vector>

namespace mmtop {

/// Per-element topological derivatives. Row t holds T^(i) for the element's
/// source material i = source[t], ordered (T^{i->1}, ..., T^{i->i-1},
/// T^{i->i+1}, ..., T^{i->M}); see td_slot().
struct TDField {
  int materials = 0;
  std::vector<MaterialIndex> source;
  Eigen::MatrixXd values;  // num_elements x (M-1)

  int num_elements() const { return static_cast<int>(source.size()); }

  /// T^{i->j} of element t, where i = source[t].
  double derivative(int t, MaterialIndex j) const { return values(t, td_slot(source[t], j)); }
};

/// G = (N^(i))^-1 T for source material i. G . n^{j->i} = T^{i->j}.
Eigen::VectorXd map_to_g(const SectorStructure& sectors, MaterialIndex i, const Eigen::VectorXd& td);

/// Per-element G (one row per element) without nodal filtering.
Eigen::MatrixXd element_g(const SectorStructure& sectors, const TDField& td);

/// Per-element G averaged to mesh vertices.
Eigen::MatrixXd assemble_g_field(const SectorStructure& sectors, const TDField& td, const Mesh& mesh);

struct OptimalityReport {
  bool optimal = true;
  double worst = 0.0;        // most negative (or smallest) component seen
  int element = -1;          // element holding it
  MaterialIndex target = 0;  // material j of the offending T^{i->j}
  int checked = 0;           // elements inspected
};

/// Local optimality: every component of every element's TD vector is
/// strictly positive.
OptimalityReport check_local_optimality(const TDField& td);

/// As above, skipping elements that are not fully one material.
OptimalityReport check_local_optimality(const TDField& td, const MaterialMap& design);

}  // namespace mmtop
