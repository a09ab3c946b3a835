#pragma once

#include "mmtop/elasticity.hpp"
#include "mmtop/optimizer.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mmtop {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Settings of one optimization run, read from flat "key = value" text.
/// Lines starting with '#' are comments. Unset keys fall back to the
/// defaults of the selected problem.
struct RunConfig {
  std::string problem = "academic8";  // academic8 | cantilever | bridge | mast | custom
  int nx = 0, ny = 0;
  MaterialParameters materials;
  OptimizerConfig optimizer;
  std::string output_dir = "mmtop_out";
  int snapshot_stride = 10;
  int image_width = 600;
  MaterialIndex initial_material = 1;

  // problem = custom: mesh file with "dirichlet" / "dirichlet_y" / "neumann"
  // tagged boundary segments and a constant traction on "neumann".
  std::string mesh_file;
  double load_x = 0.0, load_y = -1.0;

  void validate() const;
};

/// Defaults for a named problem before any overrides.
RunConfig default_config(const std::string& problem);

RunConfig parse_run_config(std::istream& in);
RunConfig parse_run_config_file(const std::string& path);

}  // namespace mmtop
