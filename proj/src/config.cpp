#include "mmtop/config.hpp"

#include "mmtop/academic.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

namespace mmtop {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': not a number: " + v);
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError("key '" + key + "': not an integer: " + v);
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': not a boolean: " + v);
}

}  // namespace

RunConfig default_config(const std::string& problem) {
  RunConfig c;
  c.problem = problem;
  if (problem == "academic8") {
    c.nx = c.ny = 128;
    c.optimizer = academic_config();
    c.initial_material = 8;
  } else if (problem == "cantilever" || problem == "bridge" || problem == "mast" || problem == "custom") {
    c.optimizer.eps_theta_deg = 0.5;
    c.optimizer.max_iter = 200;
    c.optimizer.filter_depth = 3;
    c.optimizer.line_search = true;
    c.initial_material = 1;
    if (problem == "cantilever") {
      c.nx = 60, c.ny = 30, c.optimizer.kappa_max = 0.12;
    } else if (problem == "bridge") {
      c.nx = 60, c.ny = 45, c.optimizer.kappa_max = 0.2;
    } else if (problem == "mast") {
      c.nx = 60, c.ny = 60, c.optimizer.kappa_max = 0.1;
    } else {
      c.optimizer.kappa_max = 0.1;
    }
  } else {
    throw ConfigError("unknown problem '" + problem + "'");
  }
  return c;
}

void RunConfig::validate() const {
  if (problem != "custom" && (nx < 2 || ny < 2)) throw ConfigError("mesh resolution must be at least 2");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride must be >= 1");
  if (image_width < 1) throw ConfigError("image_width must be >= 1");
  if (problem == "custom" && mesh_file.empty()) throw ConfigError("problem = custom requires mesh_file");
  const int m = problem == "academic8" ? 8 : 3;
  if (initial_material < 1 || initial_material > m) throw ConfigError("initial_material out of range");
  try {
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig parse_run_config(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key '" + key + "'");
  }

  RunConfig c = default_config(kv.count("problem") ? kv.at("problem") : "academic8");
  for (const auto& [key, v] : kv) {
    if (key == "problem") continue;
    else if (key == "nx") c.nx = to_int(key, v);
    else if (key == "ny") c.ny = to_int(key, v);
    else if (key == "E1") c.materials.E1 = to_double(key, v);
    else if (key == "E2") c.materials.E2 = to_double(key, v);
    else if (key == "E3") c.materials.E3 = to_double(key, v);
    else if (key == "nu1") c.materials.nu1 = to_double(key, v);
    else if (key == "nu2") c.materials.nu2 = to_double(key, v);
    else if (key == "nu3") c.materials.nu3 = to_double(key, v);
    else if (key == "l1") c.materials.l1 = to_double(key, v);
    else if (key == "l2") c.materials.l2 = to_double(key, v);
    else if (key == "kappa_max") c.optimizer.kappa_max = to_double(key, v);
    else if (key == "eps_theta_deg") c.optimizer.eps_theta_deg = to_double(key, v);
    else if (key == "max_iter") c.optimizer.max_iter = to_int(key, v);
    else if (key == "max_halvings") c.optimizer.max_halvings = to_int(key, v);
    else if (key == "filter_depth") c.optimizer.filter_depth = to_int(key, v);
    else if (key == "line_search") c.optimizer.line_search = to_bool(key, v);
    else if (key == "output_dir") c.output_dir = v;
    else if (key == "snapshot_stride") c.snapshot_stride = to_int(key, v);
    else if (key == "image_width") c.image_width = to_int(key, v);
    else if (key == "initial_material") c.initial_material = to_int(key, v);
    else if (key == "mesh_file") c.mesh_file = v;
    else if (key == "load_x") c.load_x = to_double(key, v);
    else if (key == "load_y") c.load_y = to_double(key, v);
    else throw ConfigError("unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

RunConfig parse_run_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  return parse_run_config(in);
}

}  // namespace mmtop
