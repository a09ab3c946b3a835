#pragma once

#include "mmtop/optimizer.hpp"

#include <optional>
#include <vector>

namespace mmtop {

/// f_l(x) = w_l |x - c_l| - d_l for a PDE-free multi-material benchmark on
/// D = (0,1)^2. A material without a center has f_l = -d_l (w_l must be 0).
struct AcademicSpec {
  struct Entry {
    double weight;
    std::optional<Point2> center;
    double offset;
  };
  std::vector<Entry> entries;

  int materials() const { return static_cast<int>(entries.size()); }

  /// Eight materials: outer phase, three nested disks around (1/2, 1/2) and
  /// four lenses cut out of the ring.
  static AcademicSpec eight_materials();
};

double f_eval(const AcademicSpec& spec, MaterialIndex l, const Point2& x);

/// T^{i->j}(z) = f_j(z) - f_i(z).
double td_academic(const AcademicSpec& spec, MaterialIndex i, MaterialIndex j, const Point2& z);

/// sum_T |T| sum_l fraction_l(T) f_l(centroid(T)).
double academic_objective(const AcademicSpec& spec, const Mesh& mesh, const MaterialMap& design);

/// argmin_l f_l(x), smallest index on ties.
MaterialIndex exact_label(const AcademicSpec& spec, const Point2& x);

class AcademicProblem final : public Problem {
 public:
  AcademicProblem(AcademicSpec spec, Mesh mesh);

  const Mesh& mesh() const override { return mesh_; }
  const SectorStructure& sectors() const override { return sectors_; }
  const AcademicSpec& spec() const { return spec_; }
  Evaluation evaluate(const MaterialMap& design) override;

  /// Labels of the analytic optimum at element centroids.
  std::vector<MaterialIndex> exact_labels() const;

 private:
  AcademicSpec spec_;
  Mesh mesh_;
  SectorStructure sectors_;
  Eigen::MatrixXd f_at_centroids_;  // num_triangles x M
};

/// Optimizer settings for this benchmark: centroid classification, constant
/// step 1/2 and no line search.
OptimizerConfig academic_config();

}  // namespace mmtop
