#include "mmtop/benchmarks.hpp"

#include <cmath>
#include <limits>

namespace mmtop {

namespace {

void require_resolution(int nx, int ny) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("mesh resolution must be at least 2 x 2");
}

int nearest_vertex(const Mesh& mesh, const Point2& p) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const double d = (mesh.vertex(v) - p).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = v;
    }
  }
  return best;
}

int cells(double length, double h) {
  const double n = length / h;
  const long r = std::lround(n);
  if (r < 1 || std::abs(n - r) > 1e-9) throw std::invalid_argument("resolution does not fit the benchmark geometry");
  return static_cast<int>(r);
}

}  // namespace

Benchmark make_cantilever(int nx, int ny) {
  require_resolution(nx, ny);
  Benchmark b;
  b.name = "cantilever";
  b.bounding_box = {-1.0, 0.0, 1.0, 1.0};
  b.mesh = make_crossed_mesh({{-1.0, 0.0, 1.0, 1.0, nx, ny}});
  const Box support{-1.0, 0.0, -1.0, 1.0};
  const Box load{1.0, 0.45, 1.0, 0.55};
  b.mesh.tag_boundary(support, "dirichlet");
  b.mesh.tag_boundary(load, "neumann");
  b.bc.dirichlet.push_back({"dirichlet", true, true});
  b.bc.loads.push_back({"neumann", Eigen::Vector2d(0.0, -1.0), load});
  b.kappa_max = 0.12;
  return b;
}

Benchmark make_bridge(int nx, int ny) {
  require_resolution(nx, ny);
  Benchmark b;
  b.name = "bridge";
  b.bounding_box = {-1.0, 0.0, 1.0, 1.5};
  b.mesh = make_crossed_mesh({{-1.0, 0.0, 1.0, 1.5, nx, ny}});
  const Box load{-0.05, 0.0, 0.05, 0.0};
  b.mesh.tag_boundary({-1.0, 0.0, -0.9, 0.0}, "support");
  b.mesh.tag_boundary({0.9, 0.0, 1.0, 0.0}, "support");
  b.mesh.tag_boundary(load, "neumann");
  b.bc.dirichlet.push_back({"support", false, true});
  b.bc.pins.push_back({nearest_vertex(b.mesh, Point2(0.0, 0.0)), true, false});
  b.bc.loads.push_back({"neumann", Eigen::Vector2d(0.0, -1.0), load});
  b.kappa_max = 0.2;
  return b;
}

Benchmark make_mast(int nx, int ny) {
  require_resolution(nx, ny);
  const double hx = 2.0 / nx, hy = 2.0 / ny;
  Benchmark b;
  b.name = "mast";
  b.bounding_box = {-1.0, 0.0, 1.0, 2.0};
  b.mesh = make_crossed_mesh({{-0.5, 0.0, 0.5, 1.5, cells(1.0, hx), cells(1.5, hy)},
                              {-1.0, 1.5, 1.0, 2.0, nx, cells(0.5, hy)}});
  const Box left{-1.0, 2.0, -0.9, 2.0};
  const Box right{0.9, 2.0, 1.0, 2.0};
  b.mesh.tag_boundary({-0.5, 0.0, 0.5, 0.0}, "dirichlet");
  b.mesh.tag_boundary(left, "neumann");
  b.mesh.tag_boundary(right, "neumann");
  b.bc.dirichlet.push_back({"dirichlet", true, true});
  b.bc.loads.push_back({"neumann", Eigen::Vector2d(0.0, -1.0), left});
  b.bc.loads.push_back({"neumann", Eigen::Vector2d(0.0, -1.0), right});
  b.kappa_max = 0.1;
  return b;
}

Benchmark make_benchmark(const std::string& name, int nx, int ny) {
  if (name == "cantilever") return make_cantilever(nx, ny);
  if (name == "bridge") return make_bridge(nx, ny);
  if (name == "mast") return make_mast(nx, ny);
  throw std::invalid_argument("unknown benchmark '" + name + "'");
}

}  // namespace mmtop
