#pragma once

#include "mmtop/elasticity.hpp"
#include "mmtop/mesh.hpp"

#include <string>

namespace mmtop {

/// Geometry, supports and loads of a compliance benchmark.
struct Benchmark {
  std::string name;
  Mesh mesh;
  BoundaryConditions bc;
  double kappa_max = 1.0;
  Box bounding_box{0, 0, 0, 0};
};

/// D = (-1,1) x (0,1), clamped at x = -1, downward unit traction on
/// {1} x (0.45, 0.55). nx x ny cells over D.
Benchmark make_cantilever(int nx, int ny);

/// D = (-1,1) x (0,1.5), vertical supports on (-1,-0.9) x {0} and
/// (0.9,1) x {0}, downward load on (-0.05,0.05) x {0}. The horizontal
/// displacement is pinned at the bottom-center vertex (the symmetry axis).
Benchmark make_bridge(int nx, int ny);

/// Column (-0.5,0.5) x (0,1.5) under a bar (-1,1) x (1.5,2), clamped on
/// (-0.5,0.5) x {0}, downward loads on (-1,-0.9) x {2} and (0.9,1) x {2}.
/// nx x ny cells over the bounding box (-1,1) x (0,2).
Benchmark make_mast(int nx, int ny);

/// Dispatch by name: "cantilever", "bridge" or "mast".
Benchmark make_benchmark(const std::string& name, int nx, int ny);

}  // namespace mmtop
