#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mmtop::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Prints every normal n^{i->j}, i < j, for 2 <= M <= 64.
int cmd_sectors(int materials, std::ostream& out, std::ostream& err);

struct MeshCommand {
  std::vector<std::string> rectangles;  // "x0,y0,x1,y1,nx,ny"
  std::string benchmark;                // alternative: tagged benchmark mesh
  int nx = 0, ny = 0;
  std::string output;
};

/// Writes a crossed-diagonal mesh in the ASCII mesh format.
int cmd_mesh(const MeshCommand& cmd, std::ostream& out, std::ostream& err);

/// Runs the configured optimization and writes history.csv, VTK snapshots
/// and the final design image into the output directory.
int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err);

}  // namespace mmtop::cli
