#include "mmtop/export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace mmtop {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void write_scalar_columns(std::ostream& out, const std::string& prefix, const Eigen::MatrixXd& m) {
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    out << "SCALARS " << prefix << '_' << (c + 1) << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) out << m(r, c) << '\n';
  }
}

struct Bounds {
  double x0, y0, x1, y1;
};

Bounds mesh_bounds(const Mesh& mesh) {
  Bounds b{INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (const auto& p : mesh.vertices()) {
    b.x0 = std::min(b.x0, p.x());
    b.y0 = std::min(b.y0, p.y());
    b.x1 = std::max(b.x1, p.x());
    b.y1 = std::max(b.y1, p.y());
  }
  return b;
}

}  // namespace

void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields) {
  out.precision(12);
  out << "# vtk DataFile Version 3.0\nmmtop design\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << mesh.num_vertices() << " double\n";
  for (const auto& p : mesh.vertices()) out << p.x() << ' ' << p.y() << " 0\n";
  out << "CELLS " << mesh.num_triangles() << ' ' << 4 * mesh.num_triangles() << '\n';
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  out << "CELL_TYPES " << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) out << "5\n";

  if (fields.psi || fields.g || fields.displacement) {
    out << "POINT_DATA " << mesh.num_vertices() << '\n';
    if (fields.displacement) {
      out << "VECTORS displacement double\n";
      for (Eigen::Index v = 0; v < fields.displacement->rows(); ++v) {
        out << (*fields.displacement)(v, 0) << ' ' << (*fields.displacement)(v, 1) << " 0\n";
      }
    }
    if (fields.psi) write_scalar_columns(out, "psi", fields.psi->values());
    if (fields.g) write_scalar_columns(out, "G", *fields.g);
  }
  if (fields.design || fields.td) {
    out << "CELL_DATA " << mesh.num_triangles() << '\n';
    if (fields.design) {
      out << "SCALARS material int 1\nLOOKUP_TABLE default\n";
      for (MaterialIndex l : fields.design->labels) out << l << '\n';
      write_scalar_columns(out, "fraction", fields.design->fractions);
    }
    if (fields.td) write_scalar_columns(out, "td", fields.td->values);
  }
}

void write_vtk_file(const std::string& path, const Mesh& mesh, const VtkFields& fields) {
  auto out = open_output(path);
  write_vtk(out, mesh, fields);
}

Rgb material_color(MaterialIndex l) {
  static constexpr Rgb palette[] = {
      {0, 0, 0},       {128, 128, 128}, {255, 255, 255}, {228, 26, 28},  {55, 126, 184}, {77, 175, 74},
      {152, 78, 163},  {255, 127, 0},   {166, 86, 40},   {247, 129, 191}, {255, 255, 51}, {0, 206, 209},
  };
  constexpr int n = static_cast<int>(std::size(palette));
  if (l >= 1 && l <= n) return palette[l - 1];
  // Deterministic fallback for large M.
  const auto h = static_cast<unsigned>(l) * 2654435761u;
  return {static_cast<std::uint8_t>(h >> 24), static_cast<std::uint8_t>(h >> 16), static_cast<std::uint8_t>(h >> 8)};
}

Point2 pixel_center(const Mesh& mesh, const Image& image, int x, int y) {
  const Bounds b = mesh_bounds(mesh);
  const double px = (b.x1 - b.x0) / image.width;
  return {b.x0 + (x + 0.5) * px, b.y1 - (y + 0.5) * px};
}

Image render_design(const Mesh& mesh, const MaterialMap& design, int width) {
  if (width < 1) throw std::invalid_argument("image width must be positive");
  if (design.num_elements() != mesh.num_triangles()) throw std::invalid_argument("design does not match mesh");
  const Bounds b = mesh_bounds(mesh);
  const double px = (b.x1 - b.x0) / width;
  Image img;
  img.width = width;
  img.height = std::max(1, static_cast<int>(std::ceil((b.y1 - b.y0) / px - 1e-9)));
  img.pixels.assign(static_cast<size_t>(img.width) * img.height, kBackground);

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    const Point2 &a = mesh.vertex(tri[0]), &bb = mesh.vertex(tri[1]), &c = mesh.vertex(tri[2]);
    const double xmin = std::min({a.x(), bb.x(), c.x()}), xmax = std::max({a.x(), bb.x(), c.x()});
    const double ymin = std::min({a.y(), bb.y(), c.y()}), ymax = std::max({a.y(), bb.y(), c.y()});
    const int ix0 = std::max(0, static_cast<int>(std::floor((xmin - b.x0) / px - 0.5)));
    const int ix1 = std::min(img.width - 1, static_cast<int>(std::ceil((xmax - b.x0) / px - 0.5)));
    const int iy0 = std::max(0, static_cast<int>(std::floor((b.y1 - ymax) / px - 0.5)));
    const int iy1 = std::min(img.height - 1, static_cast<int>(std::ceil((b.y1 - ymin) / px - 0.5)));
    const double area2 = 2.0 * mesh.area(t);
    const Rgb color = material_color(design.labels[t]);
    for (int iy = iy0; iy <= iy1; ++iy) {
      for (int ix = ix0; ix <= ix1; ++ix) {
        const Point2 p(b.x0 + (ix + 0.5) * px, b.y1 - (iy + 0.5) * px);
        auto cross = [&](const Point2& u, const Point2& v) {
          return (v.x() - u.x()) * (p.y() - u.y()) - (v.y() - u.y()) * (p.x() - u.x());
        };
        const double eps = -1e-12 * area2;
        if (cross(a, bb) >= eps && cross(bb, c) >= eps && cross(c, a) >= eps) {
          img.pixels[static_cast<size_t>(iy) * img.width + ix] = color;
        }
      }
    }
  }
  return img;
}

void write_ppm(std::ostream& out, const Image& image) {
  out << "P6\n" << image.width << ' ' << image.height << "\n255\n";
  for (const auto& px : image.pixels) out.write(reinterpret_cast<const char*>(px.data()), 3);
}

void write_ppm_file(const std::string& path, const Image& image) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_ppm(out, image);
}

void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history, int materials) {
  out << "iter,objective,compliance,theta_deg,kappa";
  for (int i = 1; i <= materials; ++i) out << ",vol_" << i;
  out << '\n';
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    out << buf;
  };
  for (const auto& r : history) {
    out << r.iter;
    put(r.objective);
    put(r.compliance);
    put(r.theta_deg);
    put(r.kappa);
    for (Eigen::Index i = 0; i < r.volumes.size(); ++i) put(r.volumes(i));
    out << '\n';
  }
}

void write_history_csv_file(const std::string& path, const std::vector<IterationRecord>& history, int materials) {
  auto out = open_output(path);
  write_history_csv(out, history, materials);
}

}  // namespace mmtop
