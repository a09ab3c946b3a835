#pragma once

#include "mmtop/field.hpp"
#include "mmtop/generalized_td.hpp"
#include "mmtop/mesh.hpp"
#include "mmtop/optimizer.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mmtop {

/// Extra data attached to a VTK export; absent members are skipped.
struct VtkFields {
  const VectorLevelSet* psi = nullptr;
  const Eigen::MatrixXd* g = nullptr;             // per vertex
  const Eigen::MatrixXd* displacement = nullptr;  // per vertex, 2 columns
  const MaterialMap* design = nullptr;
  const TDField* td = nullptr;
};

/// Legacy ASCII unstructured grid.
void write_vtk(std::ostream& out, const Mesh& mesh, const VtkFields& fields);
void write_vtk_file(const std::string& path, const Mesh& mesh, const VtkFields& fields);

using Rgb = std::array<std::uint8_t, 3>;

/// Fixed color for material l (1-based): strong black, weak gray, void
/// white, then distinct hues.
Rgb material_color(MaterialIndex l);
inline constexpr Rgb kBackground{255, 235, 205};

struct Image {
  int width = 0, height = 0;
  std::vector<Rgb> pixels;  // row-major, top row first
  const Rgb& at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

/// Rasterizes element labels; pixels outside the mesh get kBackground.
Image render_design(const Mesh& mesh, const MaterialMap& design, int width);
/// Domain coordinates of the center of pixel (x, y).
Point2 pixel_center(const Mesh& mesh, const Image& image, int x, int y);

void write_ppm(std::ostream& out, const Image& image);
void write_ppm_file(const std::string& path, const Image& image);

/// "iter,objective,compliance,theta_deg,kappa,vol_1,...,vol_M".
void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history, int materials);
void write_history_csv_file(const std::string& path, const std::vector<IterationRecord>& history, int materials);

}  // namespace mmtop
