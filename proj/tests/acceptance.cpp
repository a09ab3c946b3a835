// Acceptance suite: one PASS/FAIL line per criterion.

#include "mmtop/academic.hpp"
#include "mmtop/benchmarks.hpp"
#include "mmtop/cli.hpp"
#include "mmtop/config.hpp"
#include "mmtop/elasticity.hpp"
#include "mmtop/export.hpp"
#include "mmtop/generalized_td.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

using namespace mmtop;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Runs shared by criteria 3, 7, 8 and 9.
struct AcademicRun {
  std::unique_ptr<AcademicProblem> problem;
  RunResult result;
  double seconds = 0.0;
};
struct CantileverRun {
  std::unique_ptr<ElasticityProblem> problem;
  RunResult result;
  double seconds = 0.0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

AcademicRun& academic_run() {
  static std::optional<AcademicRun> run_;
  if (!run_) {
    const auto t0 = std::chrono::steady_clock::now();
    run_.emplace();
    run_->problem = std::make_unique<AcademicProblem>(AcademicSpec::eight_materials(),
                                                      make_crossed_mesh({{0.0, 0.0, 1.0, 1.0, 128, 128}}));
    const auto& p = *run_->problem;
    run_->result = run(*run_->problem, initial_design(p.mesh(), p.sectors(), 8), academic_config());
    run_->seconds = seconds_since(t0);
  }
  return *run_;
}

CantileverRun& cantilever_run() {
  static std::optional<CantileverRun> run_;
  if (!run_) {
    const auto t0 = std::chrono::steady_clock::now();
    run_.emplace();
    Benchmark b = make_cantilever(60, 30);
    run_->problem = std::make_unique<ElasticityProblem>(std::move(b.mesh), three_materials(), std::move(b.bc));
    OptimizerConfig config = default_config("cantilever").optimizer;
    config.max_iter = 200;
    const auto& p = *run_->problem;
    run_->result = run(*run_->problem, initial_design(p.mesh(), p.sectors(), 1), config);
    run_->seconds = seconds_since(t0);
  }
  return *run_;
}

// 1 ------------------------------------------------------------------------

std::vector<Eigen::VectorXd> parse_table(const std::string& text) {
  std::vector<Eigen::VectorXd> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    int i, j;
    if (!(ls >> i >> j)) continue;
    std::vector<double> v;
    double x;
    while (ls >> x) v.push_back(x);
    rows.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  return rows;
}

Outcome sector_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  const double r = std::sqrt(2.0) / 2.0;
  const std::map<int, std::vector<std::vector<double>>> table{
      {3, {{r, -r}, {1, 0}, {0, 1}}},
      {4, {{r, -r, 0}, {r, 0, -r}, {1, 0, 0}, {0, r, -r}, {0, 1, 0}, {0, 0, 1}}}};
  double worst = 0.0;
  bool shape_ok = true;
  for (const auto& [m, expected] : table) {
    std::ostringstream out, err;
    if (cli::cmd_sectors(m, out, err) != 0) return {false, "cmd_sectors failed"};
    const auto rows = parse_table(out.str());
    if (rows.size() != expected.size()) shape_ok = false;
    for (size_t k = 0; k < std::min(rows.size(), expected.size()); ++k) {
      if (rows[k].size() != static_cast<Eigen::Index>(expected[k].size())) {
        shape_ok = false;
        continue;
      }
      for (size_t c = 0; c < expected[k].size(); ++c) worst = std::max(worst, std::abs(rows[k](c) - expected[k][c]));
    }
  }
  const double secs = seconds_since(t0);
  return {shape_ok && worst <= 1e-12 && secs < 1.0,
          fmt("max |entry - table| = %.2e (tol 1e-12), %.3f s (limit 1 s)", worst, secs)};
}

// 2 ------------------------------------------------------------------------

Outcome generalized_td_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> gauss(0.0, 3.0);
  double worst = 0.0;
  long checks = 0;
  for (int m = 2; m <= 10; ++m) {
    const SectorStructure s(m);
    for (MaterialIndex l = 1; l <= m; ++l) {
      for (int sample = 0; sample < 100; ++sample) {
        Eigen::VectorXd td(m - 1);
        for (int k = 0; k < m - 1; ++k) td(k) = gauss(rng);
        const Eigen::VectorXd g = map_to_g(s, l, td);
        for (MaterialIndex i = 1; i <= m; ++i) {
          if (i == l) continue;
          const double t = td(td_slot(l, i));
          const double rel = std::abs(g.dot(s.normal(i, l)) - t) / std::max(std::abs(t), td.cwiseAbs().maxCoeff());
          worst = std::max(worst, rel);
          ++checks;
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-10 && secs < 5.0,
          fmt("%ld projections, max relative error %.2e (tol 1e-10), %.3f s (limit 5 s)", checks, worst, secs)};
}

// 3 ------------------------------------------------------------------------

Outcome academic_end_to_end() {
  AcademicRun& a = academic_run();
  const RunResult& r = a.result;
  const auto exact = a.problem->exact_labels();
  int agree = 0;
  for (size_t t = 0; t < exact.size(); ++t) agree += r.design.labels[t] == exact[t];
  const double agreement = static_cast<double>(agree) / exact.size();
  std::vector<std::string> increases;
  for (size_t k = 4; k < r.history.size(); ++k) {
    if (r.history[k].theta_deg > r.history[k - 1].theta_deg) {
      increases.push_back(fmt("%d: %.4g -> %.4g", r.history[k].iter, r.history[k - 1].theta_deg,
                              r.history[k].theta_deg));
    }
  }
  const double final_theta = r.history.back().theta_deg;
  const bool pass = r.status == RunStatus::Converged && final_theta <= 1e-3 && agreement >= 0.99 &&
                    increases.empty() && a.seconds < 60.0;
  std::string detail = fmt("%s after %d iterations, final angle %.3e deg (tol 1e-3), label agreement %.4f "
                           "(min 0.99), angle increases after iteration 3: %zu",
                           to_string(r.status).c_str(), r.iterations(), final_theta, agreement, increases.size());
  for (const auto& s : increases) detail += " [" + s + "]";
  detail += fmt(", %.2f s (limit 60 s)", a.seconds);
  return {pass, detail};
}

// 4 ------------------------------------------------------------------------

Outcome perturbation_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const AcademicSpec spec = AcademicSpec::eight_materials();
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  std::uniform_int_distribution<int> mat(1, 8);
  const double eps = 1e-3;
  const int n = 1000;
  const double h = 2.0 * eps / n;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Point2 z(u(rng), u(rng));
    const MaterialIndex i = mat(rng);
    MaterialIndex j = mat(rng);
    while (j == i) j = mat(rng);
    // J(flipped) - J(unflipped) restricted to the box around the disk, where
    // the two designs differ.
    double delta = 0.0;
    for (int b = 0; b < n; ++b) {
      for (int a = 0; a < n; ++a) {
        const Point2 x(z.x() - eps + (a + 0.5) * h, z.y() - eps + (b + 0.5) * h);
        if ((x - z).squaredNorm() < eps * eps) delta += f_eval(spec, j, x) - f_eval(spec, i, x);
      }
    }
    delta *= h * h;
    const double quotient = delta / (std::numbers::pi * eps * eps);
    const double td = td_academic(spec, i, j, z);
    worst = std::max(worst, std::abs(quotient - td) / std::abs(td));
  }
  const double secs = seconds_since(t0);
  return {worst <= 0.05 && secs < 30.0,
          fmt("50 samples at eps = 1e-3, max relative deviation %.2e (tol 0.05), %.2f s (limit 30 s)", worst, secs)};
}

// 5 ------------------------------------------------------------------------

Outcome fem_correctness() {
  const auto t0 = std::chrono::steady_clock::now();

  // Patch test: uniaxial tension of the unit square with sliding supports.
  const double young = 1.3, nu = 0.27, s = 0.6;
  Mesh sq = make_crossed_mesh({{0, 0, 1, 1, 7, 7}});
  sq.tag_boundary({0, 0, 0, 1}, "left");
  sq.tag_boundary({0, 0, 1, 0}, "bottom");
  sq.tag_boundary({1, 0, 1, 1}, "right");
  BoundaryConditions bc;
  bc.dirichlet = {{"left", true, false}, {"bottom", false, true}};
  bc.loads = {{"right", Eigen::Vector2d(s, 0.0), std::nullopt}};
  ElasticitySolver patch(sq, bc);
  const ElasticState st = patch.solve(std::vector<LameParameters>(sq.num_triangles(), lame(young, nu)));
  double patch_err = 0.0;
  for (int v = 0; v < sq.num_vertices(); ++v) {
    const Point2 p = sq.vertex(v);
    patch_err = std::max(patch_err, std::abs(st.displacement(v, 0) - s / young * p.x()));
    patch_err = std::max(patch_err, std::abs(st.displacement(v, 1) + nu * s / young * p.y()));
  }

  // Compliance against load work on a three-phase cantilever design.
  const Benchmark b = make_cantilever(30, 15);
  std::vector<MaterialIndex> labels(b.mesh.num_triangles());
  for (int t = 0; t < b.mesh.num_triangles(); ++t) {
    const Point2 c = b.mesh.centroid(t);
    labels[t] = std::abs(c.y() - 0.5) > 0.3 ? 1 : (c.x() < 0 ? 2 : 3);
  }
  const auto mats = three_materials();
  const ElasticState cs = solve(b.mesh, MaterialMap::from_labels(3, labels), mats, b.bc);
  const double work_err = std::abs(cs.compliance - cs.load_work) / std::abs(cs.load_work);

  // One element: direct quadrature of the bilinear form.
  const Mesh tri({{0.0, 0.0}, {2.0, 0.5}, {0.5, 1.5}}, {{0, 1, 2}}, {});
  ElasticitySolver one(tri, {});
  const LameParameters lp{0.9, 0.35};
  const Eigen::Matrix<double, 6, 6> k = one.element_stiffness(0, lp);
  // Gradients of the hat functions, worked out by hand for this triangle
  // (2|T| = 2 * 1.5 - 0.5 * 0.5 = 2.75).
  const double twice_area = 2.75;
  const double grad[3][2] = {{(0.5 - 1.5) / twice_area, (0.5 - 2.0) / twice_area},
                             {(1.5 - 0.0) / twice_area, (0.0 - 0.5) / twice_area},
                             {(0.0 - 0.5) / twice_area, (2.0 - 0.0) / twice_area}};
  double stiff_err = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int i = 0; i < 2; ++i) {
      for (int c = 0; c < 3; ++c) {
        for (int j = 0; j < 2; ++j) {
          const double dot = grad[a][0] * grad[c][0] + grad[a][1] * grad[c][1];
          const double ref = 0.5 * twice_area *
                             (lp.lambda * grad[a][i] * grad[c][j] + lp.mu * ((i == j ? dot : 0.0) + grad[a][j] * grad[c][i]));
          stiff_err = std::max(stiff_err, std::abs(k(2 * a + i, 2 * c + j) - ref));
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {patch_err <= 1e-10 && work_err <= 1e-9 && stiff_err <= 1e-12 && secs < 5.0,
          fmt("patch error %.2e (tol 1e-10), compliance/work %.2e (tol 1e-9), element stiffness %.2e (tol 1e-12), "
              "%.2f s (limit 5 s)",
              patch_err, work_err, stiff_err, secs)};
}

// 6 ------------------------------------------------------------------------

Outcome polarization_tensor() {
  double zero = 0.0;
  for (double e : {0.01, 1.0, 50.0}) {
    for (double nu : {0.0, 0.2, 0.3333, 0.45}) {
      const ElasticMaterial m = make_material(e, nu, 0.0);
      const PolarizationTensor p = polarization(m, m);
      Eigen::Matrix2d strain;
      strain << 0.3, -0.2, -0.2, 0.7;
      zero = std::max(zero, p.apply(strain).cwiseAbs().maxCoeff());
    }
  }
  std::ifstream in(MMTOP_TEST_DATA "/polarization_oracle.txt");
  if (!in) return {false, "reference table not found"};
  int rows = 0;
  double worst = 0.0;
  double e_i, nu_i, nu_j, gamma, ident, trace;
  while (in >> e_i >> nu_i >> nu_j >> gamma >> ident >> trace) {
    ++rows;
    const ElasticMaterial from = make_material(e_i, nu_i, 0.0);
    ElasticMaterial to = make_material(e_i, nu_j, 0.0);
    to.young = gamma * e_i;
    const PolarizationTensor p = polarization(from, to);
    worst = std::max(worst, std::abs(p.identity_coeff - ident) / std::max(1.0, std::abs(ident)));
    worst = std::max(worst, std::abs(p.trace_coeff - trace) / std::max(1.0, std::abs(trace)));
  }
  return {zero == 0.0 && rows == 100 && worst <= 1e-12,
          fmt("identical phases: max |P e| = %.1e; %d reference tuples, max deviation %.2e (tol 1e-12)", zero, rows,
              worst)};
}

// 7 ------------------------------------------------------------------------

// Largest edge-connected component of strong material and whether it has an
// edge on boundary segments tagged `a` and `b`.
std::pair<int, bool> strong_path(const Mesh& mesh, const MaterialMap& design, const std::string& a,
                                 const std::string& b) {
  std::map<std::pair<int, int>, std::vector<int>> edges;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int k = 0; k < 3; ++k) {
      const int u = tri[k], v = tri[(k + 1) % 3];
      edges[{std::min(u, v), std::max(u, v)}].push_back(t);
    }
  }
  std::map<std::pair<int, int>, std::string> tags;
  for (const auto& s : mesh.boundary()) tags[{std::min(s.v0, s.v1), std::max(s.v0, s.v1)}] = s.tag;

  std::vector<int> comp(mesh.num_triangles(), -1);
  int best_size = 0;
  bool best_touches = false;
  for (int seed = 0; seed < mesh.num_triangles(); ++seed) {
    if (design.labels[seed] != 1 || comp[seed] >= 0) continue;
    std::vector<int> stack{seed};
    comp[seed] = seed;
    int size = 0;
    bool touch_a = false, touch_b = false;
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      ++size;
      const auto& tri = mesh.triangle(t);
      for (int k = 0; k < 3; ++k) {
        const std::pair<int, int> key{std::min(tri[k], tri[(k + 1) % 3]), std::max(tri[k], tri[(k + 1) % 3])};
        if (auto it = tags.find(key); it != tags.end()) {
          touch_a |= it->second == a;
          touch_b |= it->second == b;
        }
        for (int n : edges[key]) {
          if (n != t && design.labels[n] == 1 && comp[n] < 0) {
            comp[n] = seed;
            stack.push_back(n);
          }
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_touches = touch_a && touch_b;
    }
  }
  return {best_size, best_touches};
}

Outcome cantilever_run_properties() {
  CantileverRun& c = cantilever_run();
  const RunResult& r = c.result;
  int design_steps = 0, neutral_steps = 0, bad_steps = 0;
  for (size_t k = 1; k < r.history.size(); ++k) {
    const auto& prev = r.history[k - 1];
    if (prev.design_changed) {
      ++design_steps;
      if (!(r.history[k].objective < prev.objective)) ++bad_steps;
    } else {
      ++neutral_steps;
      if (r.history[k].objective != prev.objective) ++bad_steps;
    }
  }
  const double final_theta = r.history.back().theta_deg;
  const auto [size, touches] = strong_path(c.problem->mesh(), r.design, "dirichlet", "neumann");
  const bool pass = bad_steps == 0 && design_steps > 0 && final_theta < 15.0 && touches && c.seconds < 600.0;
  return {pass, fmt("%s after %d iterations; J %.5f -> %.5f; strict decrease on %d of %d design-changing steps, "
                    "%d level-set-only steps with J unchanged; final angle %.3f deg (limit 15); largest strong "
                    "component %d elements, touches support and load: %s; %.1f s (limit 600 s)",
                    to_string(r.status).c_str(), r.iterations(), r.history.front().objective,
                    r.history.back().objective, design_steps - bad_steps, design_steps, neutral_steps, final_theta,
                    size, touches ? "yes" : "no", c.seconds)};
}

// 8 ------------------------------------------------------------------------

void write_violations(const fs::path& path, const DescentMonitor& d) {
  std::ofstream out(path);
  out << "iter,element,from,to,td\n";
  for (const auto& v : d.log) out << v.iter << ',' << v.element << ',' << v.from << ',' << v.to << ',' << v.td << '\n';
}

Outcome descent_monitor(const fs::path& out_dir) {
  const DescentMonitor& a = academic_run().result.descent;
  const DescentMonitor& c = cantilever_run().result.descent;
  write_violations(out_dir / "violations_academic.csv", a);
  write_violations(out_dir / "violations_cantilever.csv", c);
  const double ra = 1.0 - a.violation_ratio(), rc = 1.0 - c.violation_ratio();
  const bool logged = a.log.size() == static_cast<size_t>(a.violations) && c.log.size() == static_cast<size_t>(c.violations);
  return {ra >= 0.99 && rc >= 0.95 && logged && a.switches > 0 && c.switches > 0,
          fmt("academic %ld/%ld switches with negative prior derivative (%.4f, min 0.99); cantilever %ld/%ld (%.4f, "
              "min 0.95); %ld + %ld violations logged to %s",
              a.switches - a.violations, a.switches, ra, c.switches - c.violations, c.switches, rc, a.violations,
              c.violations, out_dir.string().c_str())};
}

// 9 ------------------------------------------------------------------------

Outcome sphere_invariant() {
  const double a = academic_run().result.max_sphere_error;
  const double c = cantilever_run().result.max_sphere_error;
  return {std::max(a, c) <= 1e-10, fmt("max | ||psi_k|| - 1 |: academic %.2e, cantilever %.2e (tol 1e-10)", a, c)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string output = "acceptance_out";
  app.add_option("--output", output, "directory for run artifacts and violation logs");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(output);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"sector exactness", sector_exactness},
      {"generalized TD identity", generalized_td_identity},
      {"academic M=8 end-to-end", academic_end_to_end},
      {"TD vs flipped-disk quotient", perturbation_oracle},
      {"FEM correctness", fem_correctness},
      {"polarization tensor", polarization_tensor},
      {"cantilever run", cantilever_run_properties},
      {"descent-direction monitor", [&] { return descent_monitor(output); }},
      {"sphere invariant", sphere_invariant},
  };

  int failed = 0;
  for (size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }

  const auto& c = cantilever_run();
  write_history_csv_file((fs::path(output) / "history_cantilever.csv").string(), c.result.history, 3);
  write_ppm_file((fs::path(output) / "cantilever.ppm").string(),
                 render_design(c.problem->mesh(), c.result.design, 600));
  const auto& a = academic_run();
  write_history_csv_file((fs::path(output) / "history_academic.csv").string(), a.result.history, 8);
  write_ppm_file((fs::path(output) / "academic.ppm").string(), render_design(a.problem->mesh(), a.result.design, 512));

  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
