#include "mmtop/generalized_td.hpp"

#include <limits>

namespace mmtop {

Eigen::VectorXd map_to_g(const SectorStructure& sectors, MaterialIndex i, const Eigen::VectorXd& td) {
  if (td.size() != sectors.dimension()) throw std::invalid_argument("TD vector must lie in R^(M-1)");
  return sectors.normal_matrix_inverse(i) * td;
}

Eigen::MatrixXd element_g(const SectorStructure& sectors, const TDField& td) {
  if (td.materials != sectors.materials() || td.values.cols() != sectors.dimension() ||
      td.values.rows() != td.num_elements()) {
    throw std::invalid_argument("TD field does not match the sector structure");
  }
  Eigen::MatrixXd g(td.num_elements(), sectors.dimension());
  for (int t = 0; t < td.num_elements(); ++t) {
    g.row(t) = (sectors.normal_matrix_inverse(td.source[t]) * td.values.row(t).transpose()).transpose();
  }
  return g;
}

Eigen::MatrixXd assemble_g_field(const SectorStructure& sectors, const TDField& td, const Mesh& mesh) {
  if (td.num_elements() != mesh.num_triangles()) throw std::invalid_argument("TD field does not match mesh");
  return filter_to_nodes(mesh, element_g(sectors, td));
}

namespace {

OptimalityReport scan(const TDField& td, const MaterialMap* design) {
  OptimalityReport report;
  report.worst = std::numeric_limits<double>::infinity();
  for (int t = 0; t < td.num_elements(); ++t) {
    if (design && design->fractions.row(t).maxCoeff() < 1.0) continue;
    ++report.checked;
    Eigen::Index k;
    const double v = td.values.row(t).minCoeff(&k);
    if (v < report.worst) {
      report.worst = v;
      report.element = t;
      report.target = td_target(td.source[t], static_cast<int>(k));
    }
  }
  report.optimal = report.checked == 0 || report.worst > 0.0;
  return report;
}

}  // namespace

OptimalityReport check_local_optimality(const TDField& td) { return scan(td, nullptr); }

OptimalityReport check_local_optimality(const TDField& td, const MaterialMap& design) {
  if (design.num_elements() != td.num_elements()) throw std::invalid_argument("design does not match TD field");
  return scan(td, &design);
}

}  // namespace mmtop
