#include "mmtop/academic.hpp"

namespace mmtop {

AcademicSpec AcademicSpec::eight_materials() {
  const Point2 mid(0.5, 0.5);
  AcademicSpec spec;
  spec.entries = {
      {0.0, std::nullopt, 0.0},
      {1.0, mid, 0.45},
      {5.0 / 4.0, mid, 0.5},
      {95.0 / 12.0, mid, 1.0},
      {2.0, Point2(0.5, 0.7875), 0.275},
      {2.0, Point2(0.7875, 0.5), 0.275},
      {2.0, Point2(0.5, 0.2125), 0.275},
      {2.0, Point2(0.2125, 0.5), 0.275},
  };
  return spec;
}

double f_eval(const AcademicSpec& spec, MaterialIndex l, const Point2& x) {
  if (l < 1 || l > spec.materials()) throw std::invalid_argument("material index out of range");
  const auto& e = spec.entries[l - 1];
  if (!e.center) return -e.offset;
  return e.weight * (x - *e.center).norm() - e.offset;
}

double td_academic(const AcademicSpec& spec, MaterialIndex i, MaterialIndex j, const Point2& z) {
  if (i == j) throw std::invalid_argument("topological derivative needs i != j");
  return f_eval(spec, j, z) - f_eval(spec, i, z);
}

double academic_objective(const AcademicSpec& spec, const Mesh& mesh, const MaterialMap& design) {
  if (design.num_elements() != mesh.num_triangles() || design.materials != spec.materials()) {
    throw std::invalid_argument("design does not match mesh or spec");
  }
  double sum = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Point2 c = mesh.centroid(t);
    double local = 0.0;
    for (int l = 1; l <= spec.materials(); ++l) {
      const double frac = design.fractions(t, l - 1);
      if (frac != 0.0) local += frac * f_eval(spec, l, c);
    }
    sum += mesh.area(t) * local;
  }
  return sum;
}

MaterialIndex exact_label(const AcademicSpec& spec, const Point2& x) {
  MaterialIndex best = 1;
  double best_value = f_eval(spec, 1, x);
  for (int l = 2; l <= spec.materials(); ++l) {
    const double v = f_eval(spec, l, x);
    if (v < best_value) {
      best_value = v;
      best = l;
    }
  }
  return best;
}

AcademicProblem::AcademicProblem(AcademicSpec spec, Mesh mesh)
    : spec_(std::move(spec)), mesh_(std::move(mesh)), sectors_(spec_.materials()) {
  const int m = spec_.materials();
  for (const auto& e : spec_.entries) {
    if (!e.center && e.weight != 0.0) throw std::invalid_argument("material without center must have zero weight");
  }
  f_at_centroids_.resize(mesh_.num_triangles(), m);
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    const Point2 c = mesh_.centroid(t);
    for (int l = 1; l <= m; ++l) f_at_centroids_(t, l - 1) = f_eval(spec_, l, c);
  }
}

Evaluation AcademicProblem::evaluate(const MaterialMap& design) {
  const int m = spec_.materials();
  if (design.num_elements() != mesh_.num_triangles() || design.materials != m) {
    throw std::invalid_argument("design does not match problem");
  }
  Evaluation eval;
  eval.td.materials = m;
  eval.td.source = design.labels;
  eval.td.values.resize(mesh_.num_triangles(), m - 1);
  double objective = 0.0;
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    objective += mesh_.area(t) * design.fractions.row(t).dot(f_at_centroids_.row(t));
    const MaterialIndex i = design.labels[t];
    for (int j = 1; j <= m; ++j) {
      if (j != i) eval.td.values(t, td_slot(i, j)) = f_at_centroids_(t, j - 1) - f_at_centroids_(t, i - 1);
    }
  }
  eval.objective = objective;
  return eval;
}

std::vector<MaterialIndex> AcademicProblem::exact_labels() const {
  std::vector<MaterialIndex> labels(static_cast<size_t>(mesh_.num_triangles()));
  for (int t = 0; t < mesh_.num_triangles(); ++t) labels[t] = exact_label(spec_, mesh_.centroid(t));
  return labels;
}

OptimizerConfig academic_config() {
  OptimizerConfig config;
  config.kappa_max = 0.5;
  config.line_search = false;
  config.filter_depth = 0;
  config.eps_theta_deg = 1e-3;
  config.max_iter = 200;
  return config;
}

}  // namespace mmtop
