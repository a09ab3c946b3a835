#include "mmtop/cli.hpp"

#include "mmtop/academic.hpp"
#include "mmtop/benchmarks.hpp"
#include "mmtop/config.hpp"
#include "mmtop/elasticity.hpp"
#include "mmtop/export.hpp"
#include "mmtop/sector_geometry.hpp"

#include <cstdio>
#include <filesystem>
#include <memory>
#include <ostream>
#include <sstream>

namespace mmtop::cli {

int cmd_sectors(int materials, std::ostream& out, std::ostream& err) {
  if (materials < 2 || materials > 64) {
    err << "error: number of materials must lie in 2..64 (got " << materials << ")\n";
    return kExitUsage;
  }
  out << format_normal_table(SectorStructure(materials));
  return kExitOk;
}

namespace {

RectangleSpec parse_rectangle(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  std::vector<std::string> parts;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (parts.size() != 6) throw std::invalid_argument("rectangle must be x0,y0,x1,y1,nx,ny: " + text);
  try {
    return {std::stod(parts[0]), std::stod(parts[1]), std::stod(parts[2]), std::stod(parts[3]),
            std::stoi(parts[4]), std::stoi(parts[5])};
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rectangle: " + text);
  }
}

}  // namespace

int cmd_mesh(const MeshCommand& cmd, std::ostream& out, std::ostream& err) {
  try {
    Mesh mesh;
    if (!cmd.benchmark.empty()) {
      mesh = make_benchmark(cmd.benchmark, cmd.nx, cmd.ny).mesh;
    } else {
      if (cmd.rectangles.empty()) throw std::invalid_argument("no rectangles given");
      std::vector<RectangleSpec> rects;
      for (const auto& r : cmd.rectangles) rects.push_back(parse_rectangle(r));
      mesh = make_crossed_mesh(rects);
    }
    if (cmd.output.empty() || cmd.output == "-") {
      write_mesh(out, mesh);
    } else {
      write_mesh_file(cmd.output, mesh);
      out << "wrote " << cmd.output << ": " << mesh.num_vertices() << " vertices, " << mesh.num_triangles()
          << " triangles, " << mesh.boundary().size() << " boundary segments\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

namespace {

struct Setup {
  std::unique_ptr<Problem> problem;
  ElasticityProblem* elastic = nullptr;  // non-owning view when applicable
};

Setup make_problem(const RunConfig& c) {
  Setup s;
  if (c.problem == "academic8") {
    s.problem = std::make_unique<AcademicProblem>(AcademicSpec::eight_materials(),
                                                  make_crossed_mesh({{0.0, 0.0, 1.0, 1.0, c.nx, c.ny}}));
    return s;
  }
  Mesh mesh;
  BoundaryConditions bc;
  if (c.problem == "custom") {
    mesh = read_mesh_file(c.mesh_file);
    for (const char* tag : {"dirichlet", "dirichlet_y"}) {
      for (const auto& seg : mesh.boundary()) {
        if (seg.tag == tag) {
          bc.dirichlet.push_back({tag, std::string(tag) == "dirichlet", true});
          break;
        }
      }
    }
    bc.loads.push_back({"neumann", Eigen::Vector2d(c.load_x, c.load_y), std::nullopt});
  } else {
    Benchmark b = make_benchmark(c.problem, c.nx, c.ny);
    mesh = std::move(b.mesh);
    bc = std::move(b.bc);
  }
  auto problem = std::make_unique<ElasticityProblem>(std::move(mesh), three_materials(c.materials), std::move(bc));
  s.elastic = problem.get();
  s.problem = std::move(problem);
  return s;
}

std::string snapshot_name(const std::filesystem::path& dir, int iter) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "design_%04d.vtk", iter);
  return (dir / buf).string();
}

}  // namespace

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  RunConfig config;
  Setup setup;
  std::filesystem::path dir;
  try {
    config = parse_run_config_file(config_path);
    dir = config.output_dir;
    std::filesystem::create_directories(dir);
    setup = make_problem(config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  Problem& problem = *setup.problem;
  const Mesh& mesh = problem.mesh();
  try {
    const VectorLevelSet psi0 = initial_design(mesh, problem.sectors(), config.initial_material);
    auto observer = [&](const IterateView& view) {
      if (view.record.iter % config.snapshot_stride != 0) return;
      VtkFields fields{&view.psi, &view.g, nullptr, &view.design, &view.evaluation.td};
      if (setup.elastic) fields.displacement = &setup.elastic->last_state().displacement;
      write_vtk_file(snapshot_name(dir, view.record.iter), mesh, fields);
    };
    const RunResult result = run(problem, psi0, config.optimizer, observer);

    write_history_csv_file((dir / "history.csv").string(), result.history, problem.sectors().materials());
    const Eigen::MatrixXd g = assemble_g_field(problem.sectors(), result.evaluation.td, mesh);
    VtkFields fields{&result.psi, &g, nullptr, &result.design, &result.evaluation.td};
    if (setup.elastic) fields.displacement = &setup.elastic->last_state().displacement;
    write_vtk_file((dir / "design_final.vtk").string(), mesh, fields);
    write_ppm_file((dir / "design_final.ppm").string(), render_design(mesh, result.design, config.image_width));

    const auto& last = result.history.back();
    char buf[160];
    std::snprintf(buf, sizeof buf, "status=%s, iterations=%d, objective=%.10g, theta_deg=%.6g\n",
                  to_string(result.status).c_str(), result.iterations(), last.objective, last.theta_deg);
    out << buf;
    if (result.descent.violations > 0) {
      err << "note: " << result.descent.violations << " of " << result.descent.switches
          << " material switches had a non-negative topological derivative\n";
    }
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

}  // namespace mmtop::cli
