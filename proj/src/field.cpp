#include "mmtop/field.hpp"

#include "mmtop/parallel.hpp"

#include <cmath>
#include <iostream>

namespace mmtop {

VectorLevelSet::VectorLevelSet(int materials, Eigen::MatrixXd values)
    : materials_(materials), values_(std::move(values)) {
  if (materials < 2) throw std::invalid_argument("level set needs M >= 2");
  if (values_.cols() != materials - 1) throw std::invalid_argument("level set values must have M-1 columns");
}

VectorLevelSet VectorLevelSet::constant(const Mesh& mesh, int materials, const Eigen::VectorXd& value) {
  if (value.size() != materials - 1) throw std::invalid_argument("constant value must lie in R^(M-1)");
  Eigen::MatrixXd values = value.transpose().replicate(mesh.num_vertices(), 1);
  return VectorLevelSet(materials, std::move(values));
}

MaterialMap MaterialMap::from_labels(int materials, std::vector<MaterialIndex> labels) {
  MaterialMap map;
  map.materials = materials;
  map.fractions = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), materials);
  for (size_t t = 0; t < labels.size(); ++t) {
    if (labels[t] < 1 || labels[t] > materials) throw std::invalid_argument("label out of range");
    map.fractions(static_cast<Eigen::Index>(t), labels[t] - 1) = 1.0;
  }
  map.labels = std::move(labels);
  return map;
}

Eigen::VectorXd MaterialMap::volumes(const Mesh& mesh) const {
  Eigen::VectorXd vol = Eigen::VectorXd::Zero(materials);
  for (int t = 0; t < num_elements(); ++t) vol += mesh.area(t) * fractions.row(t).transpose();
  return vol;
}

double l2_inner(const Mesh& mesh, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != mesh.num_vertices() || b.rows() != mesh.num_vertices() || a.cols() != b.cols()) {
    throw std::invalid_argument("l2_inner: fields do not match the mesh");
  }
  const auto& mass = mesh.lumped_mass();
  double sum = 0.0;
  for (int v = 0; v < mesh.num_vertices(); ++v) sum += mass[v] * a.row(v).dot(b.row(v));
  return sum;
}

double l2_inner(const Mesh& mesh, const VectorLevelSet& a, const VectorLevelSet& b) {
  if (a.materials() != b.materials()) throw std::invalid_argument("l2_inner: material counts differ");
  return l2_inner(mesh, a.values(), b.values());
}

double l2_norm(const Mesh& mesh, const Eigen::MatrixXd& a) { return std::sqrt(l2_inner(mesh, a, a)); }

VectorLevelSet normalize(const Mesh& mesh, const VectorLevelSet& psi) {
  const double norm = l2_norm(mesh, psi.values());
  if (!(norm > 0.0) || !std::isfinite(norm)) throw DegenerateFieldError("cannot normalize a zero level-set field");
  return VectorLevelSet(psi.materials(), psi.values() / norm);
}

std::vector<Eigen::Vector3d> subdivision_samples(int depth) {
  if (depth < 0) throw std::invalid_argument("subdivision depth must be >= 0");
  const int n = 1 << depth;
  std::vector<Eigen::Vector3d> samples;
  samples.reserve(static_cast<size_t>(n) * n);
  // Upright subtriangles (n(n+1)/2) then inverted ones (n(n-1)/2).
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n; ++j) {
      const double b1 = (i + 1.0 / 3.0) / n, b2 = (j + 1.0 / 3.0) / n;
      samples.emplace_back(1.0 - b1 - b2, b1, b2);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; i + j < n - 1; ++j) {
      const double b1 = (i + 2.0 / 3.0) / n, b2 = (j + 2.0 / 3.0) / n;
      samples.emplace_back(1.0 - b1 - b2, b1, b2);
    }
  }
  return samples;
}

MaterialMap classify_elements(const Mesh& mesh, const VectorLevelSet& psi, const SectorStructure& sectors,
                              int depth) {
  if (psi.num_vertices() != mesh.num_vertices()) throw std::invalid_argument("level set does not match mesh");
  if (psi.materials() != sectors.materials()) throw std::invalid_argument("level set and sectors disagree on M");
  const int m = sectors.materials();
  const auto samples = subdivision_samples(depth);
  const double weight = 1.0 / static_cast<double>(samples.size());

  MaterialMap map;
  map.materials = m;
  map.labels.assign(static_cast<size_t>(mesh.num_triangles()), 1);
  map.fractions = Eigen::MatrixXd::Zero(mesh.num_triangles(), m);

  const Eigen::MatrixXd& values = psi.values();
  parallel_for(mesh.num_triangles(), [&](int t) {
    const auto& tri = mesh.triangle(t);
    Eigen::VectorXd p(m - 1);
    for (const auto& s : samples) {
      p = s[0] * values.row(tri[0]).transpose() + s[1] * values.row(tri[1]).transpose() +
          s[2] * values.row(tri[2]).transpose();
      map.fractions(t, sectors.classify(p) - 1) += weight;
    }
    Eigen::Index best;
    map.fractions.row(t).maxCoeff(&best);
    map.labels[t] = static_cast<MaterialIndex>(best) + 1;
  });
  return map;
}

Eigen::MatrixXd filter_to_nodes(const Mesh& mesh, const Eigen::MatrixXd& element_values) {
  if (element_values.rows() != mesh.num_triangles()) {
    throw std::invalid_argument("filter_to_nodes: one row per element required");
  }
  Eigen::MatrixXd nodal = Eigen::MatrixXd::Zero(mesh.num_vertices(), element_values.cols());
  const auto& incident = mesh.vertex_triangles();
  int isolated = 0;
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    if (incident[v].empty()) {
      ++isolated;
      continue;
    }
    for (int t : incident[v]) nodal.row(v) += element_values.row(t);
    nodal.row(v) /= static_cast<double>(incident[v].size());
  }
  if (isolated > 0) {
    std::cerr << "warning: filter_to_nodes: " << isolated << " isolated vertices set to zero\n";
  }
  return nodal;
}

}  // namespace mmtop
