#include "cutfsi/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cutfsi {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument(key + ": not a number: '" + v + "'");
  }
  if (pos != v.size()) throw std::invalid_argument(key + ": not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x)) throw std::invalid_argument(key + ": not an integer: '" + v + "'");
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw std::invalid_argument(key + ": not a boolean: '" + v + "'");
}

}  // namespace

std::string to_string(PositionUpdate v) { return v == PositionUpdate::midpoint ? "midpoint" : "three-level"; }
std::string to_string(MassModel v) { return v == MassModel::discrete ? "discrete" : "exact"; }
std::string to_string(RunMode v) { return v == RunMode::falling_disk ? "falling-disk" : "stokes-verify"; }

bool set_config_value(SimConfig& c, const std::string& key, const std::string& v) {
  if (key == "mode") {
    if (v == "falling-disk") {
      c.mode = RunMode::falling_disk;
    } else if (v == "stokes-verify") {
      c.mode = RunMode::stokes_verify;
    } else {
      throw std::invalid_argument("mode: expected falling-disk or stokes-verify, got '" + v + "'");
    }
  } else if (key == "x0") {
    c.domain.x0 = to_double(key, v);
  } else if (key == "x1") {
    c.domain.x1 = to_double(key, v);
  } else if (key == "y0") {
    c.domain.y0 = to_double(key, v);
  } else if (key == "y1") {
    c.domain.y1 = to_double(key, v);
  } else if (key == "nx") {
    c.nx = to_int(key, v);
  } else if (key == "ny") {
    c.ny = to_int(key, v);
  } else if (key == "mesh") {
    const auto x = v.find('x');
    if (x == std::string::npos) throw std::invalid_argument("mesh: expected <nx>x<ny>, got '" + v + "'");
    c.nx = to_int(key, v.substr(0, x));
    c.ny = to_int(key, v.substr(x + 1));
  } else if (key == "rho_f") {
    c.rho_f = to_double(key, v);
  } else if (key == "rho_s") {
    c.rho_s = to_double(key, v);
  } else if (key == "nu") {
    c.nu = to_double(key, v);
  } else if (key == "g") {
    c.g = to_double(key, v);
  } else if (key == "radius" || key == "R") {
    c.radius = to_double(key, v);
  } else if (key == "center_x") {
    c.center_x = to_double(key, v);
  } else if (key == "center_y") {
    c.center_y = to_double(key, v);
  } else if (key == "theta0") {
    c.theta0 = to_double(key, v);
  } else if (key == "gamma0") {
    c.gamma0 = to_double(key, v);
  } else if (key == "dt_init") {
    c.dt_init = to_double(key, v);
  } else if (key == "dt_min") {
    c.dt_min = to_double(key, v);
  } else if (key == "dt_max") {
    c.dt_max = to_double(key, v);
  } else if (key == "dt_growth") {
    c.dt_growth = to_double(key, v);
  } else if (key == "t_final" || key == "tfinal") {
    c.t_final = to_double(key, v);
  } else if (key == "position_update") {
    if (v == "midpoint") {
      c.position_update = PositionUpdate::midpoint;
    } else if (v == "three-level") {
      c.position_update = PositionUpdate::three_level;
    } else {
      throw std::invalid_argument("position_update: expected midpoint or three-level, got '" + v + "'");
    }
  } else if (key == "mass_model") {
    if (v == "discrete") {
      c.mass_model = MassModel::discrete;
    } else if (v == "exact") {
      c.mass_model = MassModel::exact;
    } else {
      throw std::invalid_argument("mass_model: expected discrete or exact, got '" + v + "'");
    }
  } else if (key == "convection") {
    c.convection = to_bool(key, v);
  } else if (key == "gamma_cap") {
    c.gamma_cap = to_bool(key, v);
  } else if (key == "local_reassembly") {
    c.local_reassembly = to_bool(key, v);
  } else if (key == "newton_tol_abs") {
    c.newton.tol_abs = to_double(key, v);
  } else if (key == "newton_tol_rel") {
    c.newton.tol_rel = to_double(key, v);
  } else if (key == "newton_max_iter") {
    c.newton.max_iter = to_int(key, v);
  } else if (key == "out_dir") {
    c.out_dir = v;
  } else if (key == "csv_name") {
    c.csv_name = v;
  } else if (key == "fields_every") {
    c.fields_every = to_int(key, v);
  } else if (key == "verify_meshes") {
    c.verify_meshes.clear();
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) c.verify_meshes.push_back(to_int(key, trim(item)));
  } else {
    return false;
  }
  return true;
}

void validate_config(const SimConfig& c) {
  std::vector<std::string> bad;
  auto need = [&bad](bool ok, const char* what) {
    if (!ok) bad.emplace_back(what);
  };
  need(c.domain.x1 > c.domain.x0 && c.domain.y1 > c.domain.y0, "domain (x0<x1, y0<y1)");
  need(c.nx >= 1 && c.ny >= 1, "nx/ny (>= 1)");
  need(c.rho_f > 0.0, "rho_f (> 0)");
  need(c.rho_s > 0.0, "rho_s (> 0)");
  need(c.nu > 0.0, "nu (> 0)");
  need(c.g >= 0.0, "g (>= 0)");
  need(c.radius > 0.0, "radius (> 0)");
  need(c.gamma0 >= 0.0, "gamma0 (>= 0)");
  need(c.dt_init > 0.0, "dt_init (> 0)");
  need(c.dt_min > 0.0, "dt_min (> 0)");
  need(c.dt_max >= 0.0, "dt_max (>= 0)");
  need(c.dt_growth == 0.0 || c.dt_growth >= 1.0, "dt_growth (0 or >= 1)");
  need(c.t_final >= 0.0, "t_final (>= 0)");
  need(c.newton.tol_abs > 0.0 && c.newton.tol_rel > 0.0 && c.newton.max_iter >= 1, "newton settings");
  need(c.fields_every >= 0, "fields_every (>= 0)");
  need(!c.verify_meshes.empty(), "verify_meshes (non-empty)");
  if (c.nx >= 1 && c.ny >= 1 && c.domain.x1 > c.domain.x0 && c.domain.y1 > c.domain.y0 && c.radius > 0.0) {
    const double dx = c.domain.width() / c.nx, dy = c.domain.height() / c.ny;
    const double h = std::sqrt(dx * dx + dy * dy);
    const double clearance = std::min({c.center_x - c.domain.x0, c.domain.x1 - c.center_x, c.center_y - c.domain.y0,
                                       c.domain.y1 - c.center_y}) -
                             c.radius;
    need(clearance > h, "center_x/center_y (disk must clear the boundary by more than h)");
  }
  if (!bad.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& b : bad) msg += " " + b + ";";
    throw std::invalid_argument(msg);
  }
}

SimConfig parse_config_text(const std::string& text, SimConfig cfg) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> errors;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (!set_config_value(cfg, key, value)) errors.push_back("unknown key '" + key + "'");
    } catch (const std::invalid_argument& e) {
      errors.emplace_back(e.what());
    }
  }
  if (!errors.empty()) {
    std::string msg = "config errors:";
    for (const auto& e : errors) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  validate_config(cfg);
  return cfg;
}

SimConfig parse_config_file(const std::string& path, SimConfig base) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

}  // namespace cutfsi
