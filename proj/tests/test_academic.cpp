#include "mmtop/academic.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace mmtop;

namespace {

// Midpoint rule on an n x n grid of the unit square for f_l.
double grid_integral(const AcademicSpec& spec, MaterialIndex l, int n) {
  double sum = 0.0;
  const double h = 1.0 / n;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) sum += f_eval(spec, l, Point2((i + 0.5) * h, (j + 0.5) * h));
  }
  return sum * h * h;
}

}  // namespace

TEST_CASE("material functions") {
  const AcademicSpec spec = AcademicSpec::eight_materials();
  REQUIRE(spec.materials() == 8);
  const Point2 c(0.5, 0.5);
  CHECK(f_eval(spec, 1, c) == 0.0);
  CHECK(f_eval(spec, 2, c) == doctest::Approx(-0.45));
  CHECK(f_eval(spec, 3, Point2(0.5, 0.575)) == doctest::Approx(1.25 * 0.075 - 0.5));
  CHECK(f_eval(spec, 4, c) == doctest::Approx(-1.0));
  CHECK(f_eval(spec, 5, Point2(0.5, 0.7875)) == doctest::Approx(-0.275));
  CHECK(f_eval(spec, 6, Point2(0.7875, 0.5)) == doctest::Approx(-0.275));
  CHECK(f_eval(spec, 7, Point2(0.5, 0.2125)) == doctest::Approx(-0.275));
  CHECK(f_eval(spec, 8, Point2(0.2125, 0.5)) == doctest::Approx(-0.275));
  CHECK(f_eval(spec, 8, Point2(0.2125, 0.6)) == doctest::Approx(2.0 * 0.1 - 0.275));
}

TEST_CASE("topological derivative of the academic problem") {
  const AcademicSpec spec = AcademicSpec::eight_materials();
  const Point2 z(0.3, 0.62);
  for (MaterialIndex i = 1; i <= 8; ++i) {
    for (MaterialIndex j = 1; j <= 8; ++j) {
      if (i == j) {
        CHECK_THROWS(td_academic(spec, i, j, z));
      } else {
        CHECK(td_academic(spec, i, j, z) == doctest::Approx(f_eval(spec, j, z) - f_eval(spec, i, z)));
        CHECK(td_academic(spec, i, j, z) == doctest::Approx(-td_academic(spec, j, i, z)));
      }
    }
  }
}

TEST_CASE("analytic labels") {
  const AcademicSpec spec = AcademicSpec::eight_materials();
  CHECK(exact_label(spec, Point2(0.5, 0.5)) == 4);
  CHECK(exact_label(spec, Point2(0.02, 0.02)) == 1);
  CHECK(exact_label(spec, Point2(0.6, 0.6)) == 3);
  CHECK(exact_label(spec, Point2(0.5, 0.79)) == 5);
  CHECK(exact_label(spec, Point2(0.79, 0.5)) == 6);
  CHECK(exact_label(spec, Point2(0.5, 0.21)) == 7);
  CHECK(exact_label(spec, Point2(0.21, 0.5)) == 8);
  // Ring between the disks of materials 3 and 2.
  CHECK(exact_label(spec, Point2(0.5 + 0.3 * std::cos(0.7), 0.5 + 0.3 * std::sin(0.7))) == 2);
}

TEST_CASE("objective against a fine quadrature") {
  const AcademicSpec spec = AcademicSpec::eight_materials();
  const Mesh m = make_crossed_mesh({{0, 0, 1, 1, 64, 64}});
  for (MaterialIndex l : {1, 2, 4, 6}) {
    const MaterialMap d = MaterialMap::from_labels(8, std::vector<MaterialIndex>(m.num_triangles(), l));
    CHECK(academic_objective(spec, m, d) == doctest::Approx(grid_integral(spec, l, 1000)).epsilon(1e-4));
  }
}

TEST_CASE("objective weights cut elements by fraction") {
  const AcademicSpec spec = AcademicSpec::eight_materials();
  const Mesh m = make_crossed_mesh({{0, 0, 1, 1, 2, 2}});
  MaterialMap d = MaterialMap::from_labels(8, std::vector<MaterialIndex>(m.num_triangles(), 1));
  d.fractions.row(0).setZero();
  d.fractions(0, 1) = 0.25;
  d.fractions(0, 3) = 0.75;
  const Point2 c = m.centroid(0);
  double expected = 0.0;
  for (int t = 1; t < m.num_triangles(); ++t) expected += m.area(t) * f_eval(spec, 1, m.centroid(t));
  expected += m.area(0) * (0.25 * f_eval(spec, 2, c) + 0.75 * f_eval(spec, 4, c));
  CHECK(academic_objective(spec, m, d) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("flipped disk quotient matches the derivative") {
  const AcademicSpec spec = AcademicSpec::eight_materials();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  std::uniform_int_distribution<int> mat(1, 8);
  const double eps = 1e-3;
  const int n = 400;
  const double h = 2.0 * eps / n;
  for (int trial = 0; trial < 10; ++trial) {
    const Point2 z(u(rng), u(rng));
    const MaterialIndex i = mat(rng);
    MaterialIndex j = mat(rng);
    if (j == i) j = i % 8 + 1;
    double delta = 0.0;
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        const Point2 x(z.x() - eps + (a + 0.5) * h, z.y() - eps + (b + 0.5) * h);
        if ((x - z).norm() < eps) delta += (f_eval(spec, j, x) - f_eval(spec, i, x)) * h * h;
      }
    }
    const double quotient = delta / (std::numbers::pi * eps * eps);
    const double td = td_academic(spec, i, j, z);
    CHECK(std::abs(quotient - td) <= 0.05 * std::abs(td));
  }
}

TEST_CASE("problem evaluation") {
  AcademicProblem p(AcademicSpec::eight_materials(), make_crossed_mesh({{0, 0, 1, 1, 8, 8}}));
  CHECK(p.sectors().materials() == 8);
  const auto exact = p.exact_labels();
  const MaterialMap d = MaterialMap::from_labels(8, exact);
  const Evaluation e = p.evaluate(d);
  CHECK(e.compliance == 0.0);
  CHECK(e.objective == doctest::Approx(academic_objective(p.spec(), p.mesh(), d)));
  for (int t = 0; t < p.mesh().num_triangles(); ++t) {
    CHECK(e.td.source[t] == exact[t]);
    // The analytic labels are optimal at centroids: every derivative >= 0.
    for (int k = 0; k < 7; ++k) CHECK(e.td.values(t, k) >= 0.0);
  }
}

TEST_CASE("settings of the academic run") {
  const OptimizerConfig c = academic_config();
  CHECK(c.kappa_max == 0.5);
  CHECK_FALSE(c.line_search);
  CHECK(c.filter_depth == 0);
}
