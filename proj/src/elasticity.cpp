#include "mmtop/elasticity.hpp"

#include "mmtop/parallel.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>

namespace mmtop {

LameParameters lame(double young, double poisson) {
  if (!(young > 0.0)) throw std::invalid_argument("Young's modulus must be positive");
  if (!(poisson >= 0.0 && poisson < 0.5)) throw std::invalid_argument("Poisson ratio must lie in [0, 0.5)");
  return {young * poisson / ((1.0 + poisson) * (1.0 - poisson)), young / (2.0 * (1.0 + poisson))};
}

ElasticMaterial make_material(double young, double poisson, double penalty) {
  return {young, poisson, penalty, lame(young, poisson)};
}

std::vector<ElasticMaterial> three_materials(const MaterialParameters& p) {
  std::vector<ElasticMaterial> m{make_material(p.E1, p.nu1, p.l1), make_material(p.E2, p.nu2, p.l2),
                                 make_material(p.E3, p.nu3, 0.0)};
  m[2].stiffness = {1e-4 * (m[0].stiffness.lambda + m[1].stiffness.lambda),
                    1e-4 * (m[0].stiffness.mu + m[1].stiffness.mu)};
  return m;
}

Eigen::Matrix2d apply_tensor(const LameParameters& a, const Eigen::Matrix2d& e) {
  return 2.0 * a.mu * e + a.lambda * e.trace() * Eigen::Matrix2d::Identity();
}

LameParameters interpolate_element_tensor(std::span<const ElasticMaterial> materials,
                                          const Eigen::Ref<const Eigen::RowVectorXd>& fractions) {
  if (fractions.size() != static_cast<Eigen::Index>(materials.size())) {
    throw std::invalid_argument("one fraction per material required");
  }
  LameParameters mix;
  for (size_t i = 0; i < materials.size(); ++i) {
    mix.lambda += fractions(static_cast<Eigen::Index>(i)) * materials[i].stiffness.lambda;
    mix.mu += fractions(static_cast<Eigen::Index>(i)) * materials[i].stiffness.mu;
  }
  return mix;
}

PolarizationCoefficients polarization_coefficients(const ElasticMaterial& from, const ElasticMaterial& to) {
  const double ni = from.poisson, nj = to.poisson;
  return {(1.0 + ni) / (1.0 - ni),
          (3.0 - ni) / (1.0 + ni),
          to.young / from.young,
          (1.0 + nj) / (1.0 + ni),
          (1.0 - nj) / (1.0 - ni),
          (nj * (3.0 * ni - 4.0) + 1.0) / (ni * (3.0 * ni - 4.0) + 1.0)};
}

PolarizationTensor polarization(const ElasticMaterial& from, const ElasticMaterial& to) {
  const auto [alpha, beta, gamma, tau1, tau2, tau3] = polarization_coefficients(from, to);
  const double d1 = beta * gamma + tau1;
  const double d2 = alpha * gamma + tau2;
  if (std::abs(d1) <= 1e-14 * (std::abs(beta * gamma) + std::abs(tau1)) ||
      std::abs(d2) <= 1e-14 * (std::abs(alpha * gamma) + std::abs(tau2))) {
    throw NumericalError("degenerate material pair in polarization tensor");
  }
  PolarizationTensor p;
  p.identity_coeff = (1.0 + beta) * (tau1 - gamma) / d1;
  p.trace_coeff = 0.5 * (alpha - beta) * (gamma * (gamma - 2.0 * tau3) + tau1 * tau2) / (d2 * d1);
  return p;
}

struct ElasticitySolver::Factorization {
  Eigen::SparseMatrix<double> matrix;
  std::vector<std::array<int, 36>> slots;  // element entry -> index into matrix values, -1 if constrained
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analyzed = false;
};

ElasticitySolver::ElasticitySolver(const Mesh& mesh, BoundaryConditions bc)
    : mesh_(mesh), bc_(std::move(bc)), factorization_(std::make_unique<Factorization>()) {
  const int nv = mesh.num_vertices();
  const int ne = mesh.num_triangles();

  b_.resize(ne);
  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangle(t);
    const double two_area = 2.0 * mesh.area(t);
    Eigen::Matrix<double, 3, 6> b = Eigen::Matrix<double, 3, 6>::Zero();
    for (int a = 0; a < 3; ++a) {
      const Point2& p1 = mesh.vertex(tri[(a + 1) % 3]);
      const Point2& p2 = mesh.vertex(tri[(a + 2) % 3]);
      const double dx = (p1.y() - p2.y()) / two_area;  // d phi_a / dx
      const double dy = (p2.x() - p1.x()) / two_area;  // d phi_a / dy
      b(0, 2 * a) = dx;
      b(1, 2 * a + 1) = dy;
      b(2, 2 * a) = dy;
      b(2, 2 * a + 1) = dx;
    }
    b_[t] = b;
  }

  std::vector<char> fixed(static_cast<size_t>(2 * nv), 0);
  for (const auto& d : bc_.dirichlet) {
    bool found = false;
    for (const auto& s : mesh.boundary()) {
      if (s.tag != d.tag) continue;
      found = true;
      for (int v : {s.v0, s.v1}) {
        if (d.fix_x) fixed[2 * v] = 1;
        if (d.fix_y) fixed[2 * v + 1] = 1;
      }
    }
    if (!found) throw std::invalid_argument("no boundary segments tagged '" + d.tag + "'");
  }
  for (const auto& pin : bc_.pins) {
    if (pin.vertex < 0 || pin.vertex >= nv) throw std::invalid_argument("pinned vertex out of range");
    if (pin.fix_x) fixed[2 * pin.vertex] = 1;
    if (pin.fix_y) fixed[2 * pin.vertex + 1] = 1;
  }
  dof_map_.assign(static_cast<size_t>(2 * nv), -1);
  for (int dof = 0; dof < 2 * nv; ++dof) {
    if (!fixed[dof]) {
      dof_map_[dof] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(dof);
    }
  }

  // Consistent P1 load: the traction is constant, so the endpoint shares of
  // the loaded sub-interval [t0, t1] are the integrals of 1-s and s.
  load_ = Eigen::VectorXd::Zero(2 * nv);
  for (const auto& load : bc_.loads) {
    bool found = false;
    for (const auto& s : mesh.boundary()) {
      if (s.tag != load.tag) continue;
      double t0 = 0.0, t1 = 1.0;
      if (load.window && !mesh.clip_segment(s, *load.window, t0, t1)) continue;
      found = true;
      const double len = (mesh.vertex(s.v1) - mesh.vertex(s.v0)).norm();
      const double w0 = len * ((t1 - t0) - 0.5 * (t1 * t1 - t0 * t0));
      const double w1 = len * 0.5 * (t1 * t1 - t0 * t0);
      load_.segment<2>(2 * s.v0) += w0 * load.g;
      load_.segment<2>(2 * s.v1) += w1 * load.g;
    }
    if (!found) throw std::invalid_argument("traction load on tag '" + load.tag + "' hits no boundary segment");
  }

  // Sparsity pattern of the reduced matrix.
  const int nf = num_free_dofs();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<size_t>(ne) * 36);
  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 6; ++a) {
      const int ra = dof_map_[2 * tri[a / 2] + a % 2];
      if (ra < 0) continue;
      for (int c = 0; c < 6; ++c) {
        const int rc = dof_map_[2 * tri[c / 2] + c % 2];
        if (rc >= 0) triplets.emplace_back(ra, rc, 1.0);
      }
    }
  }
  auto& f = *factorization_;
  f.matrix.resize(nf, nf);
  f.matrix.setFromTriplets(triplets.begin(), triplets.end());
  f.matrix.makeCompressed();
  f.slots.resize(ne);
  for (int t = 0; t < ne; ++t) {
    const auto& tri = mesh.triangle(t);
    for (int a = 0; a < 6; ++a) {
      const int ra = dof_map_[2 * tri[a / 2] + a % 2];
      for (int c = 0; c < 6; ++c) {
        const int rc = dof_map_[2 * tri[c / 2] + c % 2];
        int slot = -1;
        if (ra >= 0 && rc >= 0) slot = static_cast<int>(&f.matrix.coeffRef(ra, rc) - f.matrix.valuePtr());
        f.slots[t][6 * a + c] = slot;
      }
    }
  }
}

ElasticitySolver::~ElasticitySolver() = default;

Eigen::Matrix<double, 6, 6> ElasticitySolver::element_stiffness(int t, const LameParameters& a) const {
  Eigen::Matrix3d d;
  d << a.lambda + 2.0 * a.mu, a.lambda, 0.0, a.lambda, a.lambda + 2.0 * a.mu, 0.0, 0.0, 0.0, a.mu;
  return mesh_.area(t) * b_[t].transpose() * d * b_[t];
}

Eigen::SparseMatrix<double> ElasticitySolver::reduced_stiffness(std::span<const LameParameters> element_tensors) const {
  if (static_cast<int>(element_tensors.size()) != mesh_.num_triangles()) {
    throw std::invalid_argument("one material tensor per element required");
  }
  Eigen::SparseMatrix<double> k = factorization_->matrix;
  std::fill(k.valuePtr(), k.valuePtr() + k.nonZeros(), 0.0);
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    const auto ke = element_stiffness(t, element_tensors[t]);
    const auto& slots = factorization_->slots[t];
    for (int e = 0; e < 36; ++e) {
      if (slots[e] >= 0) k.valuePtr()[slots[e]] += ke(e / 6, e % 6);
    }
  }
  return k;
}

ElasticState ElasticitySolver::solve(std::span<const LameParameters> element_tensors) {
  auto& f = *factorization_;
  f.matrix = reduced_stiffness(element_tensors);

  const int nf = num_free_dofs();
  Eigen::VectorXd rhs(nf);
  for (int r = 0; r < nf; ++r) rhs(r) = load_(free_dofs_[r]);

  if (!f.analyzed) {
    f.ldlt.analyzePattern(f.matrix);
    f.analyzed = true;
  }
  f.ldlt.factorize(f.matrix);
  if (f.ldlt.info() != Eigen::Success) throw RigidModeError("stiffness factorization failed");
  const auto& diag = f.ldlt.vectorD();
  if (nf > 0) {
    const double dmax = diag.cwiseAbs().maxCoeff();
    if (!(diag.minCoeff() > 1e-12 * dmax)) {
      throw RigidModeError("stiffness matrix is singular; boundary conditions leave rigid motions free");
    }
  }
  Eigen::VectorXd x = f.ldlt.solve(rhs);

  ElasticState state;
  const double rhs_norm = rhs.norm();
  state.residual = rhs_norm > 0 ? (f.matrix * x - rhs).norm() / rhs_norm : 0.0;
  if (!(state.residual <= 1e-10)) {
    throw NumericalError("linear solve residual " + std::to_string(state.residual) + " above 1e-10");
  }

  Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * mesh_.num_vertices());
  for (int r = 0; r < nf; ++r) u(free_dofs_[r]) = x(r);
  state.displacement = Eigen::Map<Eigen::MatrixXd>(u.data(), 2, mesh_.num_vertices()).transpose();
  state.load_work = load_.dot(u);

  state.strains.resize(mesh_.num_triangles());
  double compliance = 0.0;
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    const auto& tri = mesh_.triangle(t);
    Eigen::Matrix<double, 6, 1> ue;
    for (int a = 0; a < 3; ++a) ue.segment<2>(2 * a) = u.segment<2>(2 * tri[a]);
    const Eigen::Vector3d e = b_[t] * ue;
    Eigen::Matrix2d eps;
    eps << e(0), 0.5 * e(2), 0.5 * e(2), e(1);
    state.strains[t] = eps;
    compliance += mesh_.area(t) * (apply_tensor(element_tensors[t], eps).cwiseProduct(eps)).sum();
  }
  state.compliance = compliance;
  return state;
}

namespace {

std::vector<LameParameters> element_tensors(const MaterialMap& design, std::span<const ElasticMaterial> materials) {
  if (design.materials != static_cast<int>(materials.size())) throw std::invalid_argument("design and materials disagree on M");
  std::vector<LameParameters> tensors(static_cast<size_t>(design.num_elements()));
  for (int t = 0; t < design.num_elements(); ++t) {
    tensors[t] = interpolate_element_tensor(materials, design.fractions.row(t));
  }
  return tensors;
}

}  // namespace

ElasticState solve(const Mesh& mesh, const MaterialMap& design, std::span<const ElasticMaterial> materials,
                   const BoundaryConditions& bc) {
  if (design.num_elements() != mesh.num_triangles()) throw std::invalid_argument("design does not match mesh");
  ElasticitySolver solver(mesh, bc);
  const auto tensors = element_tensors(design, materials);
  return solver.solve(tensors);
}

double td_elasticity(const ElasticState& state, std::span<const ElasticMaterial> materials, MaterialIndex i,
                     MaterialIndex j, int element) {
  const int m = static_cast<int>(materials.size());
  if (i < 1 || i > m || j < 1 || j > m || i == j) throw std::invalid_argument("invalid material pair");
  const ElasticMaterial& from = materials[i - 1];
  const ElasticMaterial& to = materials[j - 1];
  const Eigen::Matrix2d& eps = state.strains.at(static_cast<size_t>(element));
  const Eigen::Matrix2d stress = apply_tensor(from.stiffness, eps);
  return polarization(from, to).apply(stress).cwiseProduct(eps).sum() - from.penalty + to.penalty;
}

double elasticity_objective(const Mesh& mesh, const MaterialMap& design, const ElasticState& state,
                            std::span<const ElasticMaterial> materials) {
  const Eigen::VectorXd vol = design.volumes(mesh);
  double penalty = 0.0;
  for (size_t i = 0; i < materials.size(); ++i) penalty += materials[i].penalty * vol(static_cast<Eigen::Index>(i));
  return state.compliance + penalty;
}

ElasticityProblem::ElasticityProblem(Mesh mesh, std::vector<ElasticMaterial> materials, BoundaryConditions bc)
    : mesh_(std::move(mesh)),
      materials_(std::move(materials)),
      sectors_(static_cast<int>(materials_.size())),
      solver_(mesh_, std::move(bc)) {}

Evaluation ElasticityProblem::evaluate(const MaterialMap& design) {
  const int m = static_cast<int>(materials_.size());
  if (design.num_elements() != mesh_.num_triangles() || design.materials != m) {
    throw std::invalid_argument("design does not match problem");
  }
  const auto tensors = element_tensors(design, materials_);
  state_ = solver_.solve(tensors);

  // Polarization tensors depend only on the material pair.
  std::vector<PolarizationTensor> pol(static_cast<size_t>(m * m));
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      if (i != j) pol[(i - 1) * m + (j - 1)] = polarization(materials_[i - 1], materials_[j - 1]);

  Evaluation eval;
  eval.compliance = state_.compliance;
  eval.objective = elasticity_objective(mesh_, design, state_, materials_);
  eval.td.materials = m;
  eval.td.source = design.labels;
  eval.td.values.resize(mesh_.num_triangles(), m - 1);
  parallel_for(mesh_.num_triangles(), [&](int t) {
    const MaterialIndex i = design.labels[t];
    const ElasticMaterial& from = materials_[i - 1];
    const Eigen::Matrix2d& eps = state_.strains[t];
    const Eigen::Matrix2d stress = apply_tensor(from.stiffness, eps);
    for (int j = 1; j <= m; ++j) {
      if (j == i) continue;
      const double energy = pol[(i - 1) * m + (j - 1)].apply(stress).cwiseProduct(eps).sum();
      eval.td.values(t, td_slot(i, j)) = energy - from.penalty + materials_[j - 1].penalty;
    }
  });
  return eval;
}

}  // namespace mmtop
