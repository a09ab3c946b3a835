#include "mmtop/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace mmtop {

namespace {

constexpr double kGeomTol = 1e-9;

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

Mesh::Mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles,
           std::vector<BoundarySegment> boundary)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)), boundary_(std::move(boundary)) {
  const int nv = num_vertices();
  areas_.resize(triangles_.size());
  lumped_mass_.assign(vertices_.size(), 0.0);
  vertex_triangles_.assign(vertices_.size(), {});

  std::map<std::pair<int, int>, int> edge_count;
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshError("triangle " + std::to_string(t) + " references missing vertex");
    }
    const Point2 e1 = vertices_[tri[1]] - vertices_[tri[0]];
    const Point2 e2 = vertices_[tri[2]] - vertices_[tri[0]];
    const double a = 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
    if (!(a > 0)) throw MeshError("triangle " + std::to_string(t) + " has non-positive area (not counter-clockwise?)");
    areas_[t] = a;
    total_area_ += a;
    for (int k = 0; k < 3; ++k) {
      lumped_mass_[tri[k]] += a / 3.0;
      vertex_triangles_[tri[k]].push_back(t);
      if (++edge_count[edge_key(tri[k], tri[(k + 1) % 3])] > 2) {
        throw MeshError("edge shared by more than two triangles");
      }
    }
  }
  for (const auto& s : boundary_) {
    if (s.v0 < 0 || s.v0 >= nv || s.v1 < 0 || s.v1 >= nv) throw MeshError("boundary segment references missing vertex");
    auto it = edge_count.find(edge_key(s.v0, s.v1));
    if (it == edge_count.end()) throw MeshError("boundary segment is not a mesh edge");
    if (s.tag.empty() || s.tag.find_first_of(" \t\r\n") != std::string::npos) {
      throw MeshError("boundary tag must be a non-empty word");
    }
  }
}

Point2 Mesh::centroid(int t) const {
  const auto& tri = triangles_[t];
  return (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
}

bool Mesh::clip_segment(const BoundarySegment& s, const Box& region, double& t0, double& t1) const {
  const Point2 a = vertices_[s.v0];
  const Point2 d = vertices_[s.v1] - a;
  t0 = 0.0;
  t1 = 1.0;
  const double lo[2] = {region.x0, region.y0};
  const double hi[2] = {region.x1, region.y1};
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < kGeomTol) {
      if (a[k] < lo[k] - kGeomTol || a[k] > hi[k] + kGeomTol) return false;
      continue;
    }
    double ta = (lo[k] - a[k]) / d[k];
    double tb = (hi[k] - a[k]) / d[k];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  return t1 - t0 > kGeomTol;
}

int Mesh::tag_boundary(const Box& region, const std::string& tag) {
  if (tag.empty() || tag.find_first_of(" \t\r\n") != std::string::npos) {
    throw std::invalid_argument("boundary tag must be a non-empty word");
  }
  int count = 0;
  for (auto& s : boundary_) {
    double t0, t1;
    if (clip_segment(s, region, t0, t1)) {
      s.tag = tag;
      ++count;
    }
  }
  return count;
}

Mesh make_crossed_mesh(const std::vector<RectangleSpec>& rectangles) {
  if (rectangles.empty()) throw std::invalid_argument("mesh needs at least one rectangle");
  std::vector<Point2> vertices;
  std::vector<std::array<int, 3>> triangles;
  std::map<std::pair<long long, long long>, int> index;

  auto vertex_at = [&](double x, double y) {
    const std::pair<long long, long long> key{std::llround(x * 1e8), std::llround(y * 1e8)};
    auto [it, inserted] = index.emplace(key, static_cast<int>(vertices.size()));
    if (inserted) vertices.emplace_back(x, y);
    return it->second;
  };

  for (const auto& r : rectangles) {
    if (r.nx < 1 || r.ny < 1 || !(r.x1 > r.x0) || !(r.y1 > r.y0)) {
      throw std::invalid_argument("degenerate rectangle in mesh specification");
    }
    const double hx = (r.x1 - r.x0) / r.nx;
    const double hy = (r.y1 - r.y0) / r.ny;
    auto corner = [&](int i, int j) {
      const double x = i == r.nx ? r.x1 : r.x0 + i * hx;
      const double y = j == r.ny ? r.y1 : r.y0 + j * hy;
      return vertex_at(x, y);
    };
    for (int j = 0; j < r.ny; ++j) {
      for (int i = 0; i < r.nx; ++i) {
        const int a = corner(i, j), b = corner(i + 1, j), c = corner(i + 1, j + 1), d = corner(i, j + 1);
        const int e = vertex_at(r.x0 + (i + 0.5) * hx, r.y0 + (j + 0.5) * hy);
        triangles.push_back({a, b, e});
        triangles.push_back({b, c, e});
        triangles.push_back({c, d, e});
        triangles.push_back({d, a, e});
      }
    }
  }

  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) ++edge_count[edge_key(tri[k], tri[(k + 1) % 3])];
  }
  std::vector<BoundarySegment> boundary;
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k], b = tri[(k + 1) % 3];
      if (edge_count[edge_key(a, b)] != 1) continue;
      // Outward probe: a boundary edge of the union must not border another
      // rectangle, otherwise the rectangles meet with hanging nodes.
      const Point2 mid = 0.5 * (vertices[a] + vertices[b]);
      const Point2 t = vertices[b] - vertices[a];
      const Point2 probe = mid + 1e-6 * Point2(t.y(), -t.x()).normalized();
      for (const auto& r : rectangles) {
        if (probe.x() > r.x0 && probe.x() < r.x1 && probe.y() > r.y0 && probe.y() < r.y1) {
          throw MeshError("rectangles do not meet conformingly");
        }
      }
      boundary.push_back({a, b, "free"});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

void write_mesh(std::ostream& out, const Mesh& mesh) {
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << ' ' << mesh.boundary().size() << '\n';
  char buf[96];
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& s : mesh.boundary()) out << s.v0 << ' ' << s.v1 << ' ' << s.tag << '\n';
}

Mesh read_mesh(std::istream& in) {
  long nv = -1, nt = -1, nb = -1;
  if (!(in >> nv >> nt >> nb) || nv < 0 || nt < 0 || nb < 0) throw MeshError("bad mesh header");
  std::vector<Point2> vertices(static_cast<size_t>(nv));
  for (auto& p : vertices) {
    if (!(in >> p.x() >> p.y())) throw MeshError("truncated vertex list");
  }
  std::vector<std::array<int, 3>> triangles(static_cast<size_t>(nt));
  for (auto& t : triangles) {
    if (!(in >> t[0] >> t[1] >> t[2])) throw MeshError("truncated triangle list");
  }
  std::vector<BoundarySegment> boundary(static_cast<size_t>(nb));
  for (auto& s : boundary) {
    if (!(in >> s.v0 >> s.v1 >> s.tag)) throw MeshError("truncated boundary list");
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(boundary));
}

void write_mesh_file(const std::string& path, const Mesh& mesh) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_mesh(out, mesh);
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_mesh(in);
}

}  // namespace mmtop
