#pragma once

#include <Eigen/Core>

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmtop {

using Point2 = Eigen::Vector2d;

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BoundarySegment {
  int v0 = 0;
  int v1 = 0;
  std::string tag;
};

/// Axis-aligned closed box. Degenerate boxes (zero width or height) describe
/// boundary line pieces such as {1} x (0.45, 0.55).
struct Box {
  double x0, y0, x1, y1;
  bool contains(const Point2& p, double tol = 1e-12) const {
    return p.x() >= x0 - tol && p.x() <= x1 + tol && p.y() >= y0 - tol && p.y() <= y1 + tol;
  }
};

/// 2-D P1 triangulation. Triangles are counter-clockwise.
class Mesh {
 public:
  Mesh() = default;
  Mesh(std::vector<Point2> vertices, std::vector<std::array<int, 3>> triangles,
       std::vector<BoundarySegment> boundary);

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  const std::vector<Point2>& vertices() const { return vertices_; }
  const Point2& vertex(int v) const { return vertices_[v]; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::array<int, 3>& triangle(int t) const { return triangles_[t]; }
  const std::vector<BoundarySegment>& boundary() const { return boundary_; }

  double area(int t) const { return areas_[t]; }
  const std::vector<double>& areas() const { return areas_; }
  double total_area() const { return total_area_; }
  Point2 centroid(int t) const;

  /// Lumped mass m_v = sum over triangles containing v of |T| / 3.
  const std::vector<double>& lumped_mass() const { return lumped_mass_; }

  /// Triangles incident to each vertex.
  const std::vector<std::vector<int>>& vertex_triangles() const { return vertex_triangles_; }

  /// Retag every boundary segment whose overlap with `region` has positive
  /// length. Returns the number of segments tagged.
  int tag_boundary(const Box& region, const std::string& tag);

  /// Length of the part of segment `s` lying inside `region`, and the
  /// parameter interval [t0, t1] of that part along v0 -> v1.
  bool clip_segment(const BoundarySegment& s, const Box& region, double& t0, double& t1) const;

  bool same_topology(const Mesh& other) const {
    return vertices_.size() == other.vertices_.size() && triangles_ == other.triangles_;
  }

 private:
  std::vector<Point2> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<BoundarySegment> boundary_;
  std::vector<double> areas_;
  std::vector<double> lumped_mass_;
  std::vector<std::vector<int>> vertex_triangles_;
  double total_area_ = 0.0;
};

struct RectangleSpec {
  double x0, y0, x1, y1;
  int nx, ny;
};

/// Crossed-diagonal triangulation of a union of rectangles: every grid cell
/// gets a center vertex and four triangles. Rectangles must meet conformingly
/// (matching vertex positions along shared edges). All boundary edges are
/// tagged "free".
Mesh make_crossed_mesh(const std::vector<RectangleSpec>& rectangles);

/// ASCII format: "NV NT NB", NV lines "x y", NT lines "v1 v2 v3",
/// NB lines "v1 v2 tag". Coordinates are written with 17 significant digits
/// so a write/read cycle reproduces them bit for bit.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);
void write_mesh_file(const std::string& path, const Mesh& mesh);
Mesh read_mesh_file(const std::string& path);

}  // namespace mmtop
