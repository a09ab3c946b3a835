#include "mmtop/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Multi-material level-set topology optimization"};
  app.require_subcommand(1);

  int materials = 3;
  auto* sectors = app.add_subcommand("sectors", "print the hyperplane normals of the sector partition");
  sectors->add_option("M", materials, "number of materials")->required();

  mmtop::cli::MeshCommand mesh_cmd;
  auto* mesh = app.add_subcommand("mesh", "generate a crossed-diagonal triangle mesh");
  mesh->add_option("rectangles", mesh_cmd.rectangles, "rectangles x0,y0,x1,y1,nx,ny");
  mesh->add_option("--benchmark", mesh_cmd.benchmark, "cantilever, bridge or mast");
  mesh->add_option("--nx", mesh_cmd.nx, "cells in x for --benchmark")->default_val(60);
  mesh->add_option("--ny", mesh_cmd.ny, "cells in y for --benchmark")->default_val(30);
  mesh->add_option("-o,--output", mesh_cmd.output, "output file (default stdout)");

  std::string config;
  auto* run = app.add_subcommand("run", "run an optimization from a key = value config file");
  run->add_option("config", config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mmtop::cli::kExitUsage;
  }

  if (*sectors) return mmtop::cli::cmd_sectors(materials, std::cout, std::cerr);
  if (*mesh) return mmtop::cli::cmd_mesh(mesh_cmd, std::cout, std::cerr);
  return mmtop::cli::cmd_run(config, std::cout, std::cerr);
}
