#include "mmtop/sector_geometry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace mmtop {

namespace {

Eigen::MatrixXd default_anchors(int materials) {
  if (materials < 2) throw std::invalid_argument("sector structure needs at least 2 materials");
  const int dim = materials - 1;
  Eigen::MatrixXd anchors = Eigen::MatrixXd::Zero(dim, materials);
  anchors.leftCols(dim).setIdentity();
  anchors.col(dim).setConstant(-1.0);
  return anchors;
}

// Unit vector orthogonal to every column of `span` (dim x (dim-1)).
Eigen::VectorXd hyperplane_normal(const Eigen::MatrixXd& span) {
  const auto dim = span.rows();
  if (span.cols() == 0) return Eigen::VectorXd::Ones(dim);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(span.transpose(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) {
    throw InvalidSectorConfiguration("anchor points spanning a facet are linearly dependent");
  }
  return svd.matrixV().col(dim - 1).normalized();
}

}  // namespace

SectorStructure::SectorStructure(int materials)
    : materials_(materials), anchors_(default_anchors(materials)) {
  build();
}

SectorStructure::SectorStructure(const Eigen::MatrixXd& anchors)
    : materials_(static_cast<int>(anchors.cols())), anchors_(anchors) {
  if (materials_ < 2 || anchors.rows() != materials_ - 1) {
    throw std::invalid_argument("anchor matrix must be (M-1) x M with M >= 2");
  }
  if (!anchors.allFinite()) throw std::invalid_argument("anchor points must be finite");
  // The cones only tile R^(M-1) when the origin is a strictly positive
  // combination of all anchors.
  if (materials_ > 2) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(anchors);
    lu.setThreshold(1e-12);
    if (lu.rank() != materials_ - 1) {
      throw InvalidSectorConfiguration("anchor points do not span R^(M-1)");
    }
    const Eigen::VectorXd weights = lu.kernel().col(0);
    const bool positive = (weights.array() > 0).all() || (weights.array() < 0).all();
    if (!positive) {
      throw InvalidSectorConfiguration("origin is not interior to the anchor hull; sectors would overlap");
    }
  } else if (!(anchors(0, 0) * anchors(0, 1) < 0)) {
    throw InvalidSectorConfiguration("for M = 2 the anchors must lie on opposite sides of 0");
  }
  build();
}

void SectorStructure::build() {
  const int m = materials_;
  const int dim = m - 1;
  normals_.assign(static_cast<size_t>(m * m), Eigen::VectorXd());

  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      Eigen::MatrixXd span(dim, m - 2);
      int c = 0;
      for (int k = 1; k <= m; ++k) {
        if (k != i && k != j) span.col(c++) = anchors_.col(k - 1);
      }
      Eigen::VectorXd n = hyperplane_normal(span);
      // P_i generates S_j off the shared facet, so n^{i->j} . P_i > 0.
      const double side = n.dot(anchors_.col(i - 1));
      if (std::abs(side) <= 1e-12 * anchors_.col(i - 1).norm()) {
        throw InvalidSectorConfiguration("anchor lies on a separating hyperplane");
      }
      if (side < 0) n = -n;
      normals_[pair_slot(i, j)] = n;
      normals_[pair_slot(j, i)] = -n;
    }
  }

  normal_matrices_.clear();
  normal_inverses_.clear();
  condition_numbers_.clear();
  for (int l = 1; l <= m; ++l) {
    Eigen::MatrixXd mat(dim, dim);
    int row = 0;
    for (int i = 1; i <= m; ++i) {
      if (i != l) mat.row(row++) = normals_[pair_slot(i, l)].transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(mat);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 1e-12 * sv(0))) {
      throw InvalidSectorConfiguration("normal matrix N^(" + std::to_string(l) + ") is singular");
    }
    condition_numbers_.push_back(sv(0) / smin);
    normal_inverses_.push_back(mat.fullPivLu().inverse());
    normal_matrices_.push_back(std::move(mat));
  }
}

void SectorStructure::check_index(MaterialIndex l) const {
  if (l < 1 || l > materials_) {
    throw std::invalid_argument("material index " + std::to_string(l) + " out of range 1.." +
                                std::to_string(materials_));
  }
}

int SectorStructure::pair_slot(MaterialIndex i, MaterialIndex j) const {
  return (i - 1) * materials_ + (j - 1);
}

Eigen::VectorXd SectorStructure::anchor(MaterialIndex l) const {
  check_index(l);
  return anchors_.col(l - 1);
}

const Eigen::VectorXd& SectorStructure::normal(MaterialIndex i, MaterialIndex j) const {
  check_index(i);
  check_index(j);
  if (i == j) throw std::invalid_argument("normal n^{i->j} requires i != j");
  return normals_[pair_slot(i, j)];
}

const Eigen::MatrixXd& SectorStructure::normal_matrix(MaterialIndex l) const {
  check_index(l);
  return normal_matrices_[l - 1];
}

const Eigen::MatrixXd& SectorStructure::normal_matrix_inverse(MaterialIndex l) const {
  check_index(l);
  return normal_inverses_[l - 1];
}

double SectorStructure::condition_number(MaterialIndex l) const {
  check_index(l);
  return condition_numbers_[l - 1];
}

double SectorStructure::margin(const Eigen::Ref<const Eigen::VectorXd>& p, MaterialIndex l) const {
  // N^(l) p lists p . n^{j->l} for all j != l.
  return (normal_matrices_[l - 1] * p).minCoeff();
}

bool SectorStructure::contains(const Eigen::Ref<const Eigen::VectorXd>& p, MaterialIndex l) const {
  check_index(l);
  return margin(p, l) > 0.0;
}

MaterialIndex SectorStructure::classify(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  MaterialIndex best = 1;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (int l = 1; l <= materials_; ++l) {
    const double m = margin(p, l);
    if (m > best_margin) {
      best_margin = m;
      best = l;
    }
  }
  return best;
}

Eigen::VectorXd SectorStructure::sector_center(MaterialIndex l) const {
  check_index(l);
  Eigen::VectorXd sum = anchors_.rowwise().sum() - anchors_.col(l - 1);
  return sum.normalized();
}

std::string format_normal_table(const SectorStructure& sectors) {
  std::ostringstream out;
  const int m = sectors.materials();
  char buf[64];
  out << "M = " << m << "\n";
  out << "   i    j   n^{i->j}\n";
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      std::snprintf(buf, sizeof buf, "%4d %4d  ", i, j);
      out << buf;
      const auto& n = sectors.normal(i, j);
      for (Eigen::Index k = 0; k < n.size(); ++k) {
        // Print exact zeros without sign noise.
        const double v = std::abs(n(k)) < 5e-16 ? 0.0 : n(k);
        std::snprintf(buf, sizeof buf, " %+.12g", v);
        // Pad so columns line up.
        std::string cell(buf);
        if (cell.size() < 20) cell.append(20 - cell.size(), ' ');
        out << cell;
      }
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace mmtop
