#pragma once

#include <string>
#include <vector>

#include "cutfsi/mesh.hpp"
#include "cutfsi/rigid.hpp"
#include "cutfsi/solver.hpp"

namespace cutfsi {

enum class RunMode { falling_disk, stokes_verify };

/// How the solid mass entering Newton's laws is measured.
///  - discrete: rho_s times the area enclosed by the reconstructed interface,
///    consistent with the buoyancy the discrete fluid exerts;
///  - exact: rho_s pi R^2.
enum class MassModel { discrete, exact };

struct SimConfig {
  RunMode mode = RunMode::falling_disk;
  Rect domain{0.0, 2.0, 0.0, 6.0};
  int nx = 50, ny = 150;

  double rho_f = 1.0;
  double rho_s = 1.25;
  double nu = 0.1;
  double g = 981.0;
  double radius = 0.125;
  double center_x = 1.0, center_y = 4.0;
  double theta0 = 0.0;

  double gamma0 = 0.05;
  double dt_init = 0.0005;
  double dt_min = 1e-6;
  double dt_max = 0.001;   // 0: no upper bound beyond the CFL rule
  double dt_growth = 0.0;  // max ratio between consecutive steps; 0: unlimited
  double t_final = 0.5;
  PositionUpdate position_update = PositionUpdate::midpoint;
  MassModel mass_model = MassModel::discrete;
  bool convection = true;
  bool local_reassembly = false;
  bool gamma_cap = true;  // see AssemblyOptions::gamma_cap

  NewtonSettings newton;

  std::string out_dir = "out";
  std::string csv_name = "records.csv";
  int fields_every = 0;  // 0 disables field dumps

  std::vector<int> verify_meshes{20, 40, 80};  // nx; ny = 3 nx
};

/// Flat "key = value" text, '#' comments. Unknown keys and non-physical
/// values are reported together in one exception.
SimConfig parse_config_text(const std::string& text, SimConfig base = {});
SimConfig parse_config_file(const std::string& path, SimConfig base = {});

/// Throws std::invalid_argument listing every offending field.
void validate_config(const SimConfig& cfg);

/// Apply one key/value pair; returns false for unknown keys.
bool set_config_value(SimConfig& cfg, const std::string& key, const std::string& value);

std::string to_string(PositionUpdate v);
std::string to_string(MassModel v);
std::string to_string(RunMode v);

}  // namespace cutfsi
