#include "cutfsi/output.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace cutfsi {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << std::setprecision(17);
  return f;
}

void check_written(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace

void write_csv(const std::vector<SimRecord>& records, const std::string& path) {
  auto f = open_out(path);
  f << kCsvHeader << '\n';
  for (const auto& r : records) {
    f << r.t << ',' << r.dt << ',' << r.hx << ',' << r.hy << ',' << r.vx << ',' << r.vy << ',' << r.theta << ','
      << r.omega << ',' << r.Fx << ',' << r.Fy << ',' << r.T << ',' << r.newton_iters << ',' << r.n_cut << '\n';
  }
  check_written(f, path);
}

std::vector<SimRecord> read_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(f, line) || line != kCsvHeader) throw std::runtime_error("'" + path + "': unexpected CSV header");
  std::vector<SimRecord> out;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13) throw std::runtime_error("'" + path + "': malformed row");
    SimRecord r;
    double* d[] = {&r.t, &r.dt, &r.hx, &r.hy, &r.vx, &r.vy, &r.theta, &r.omega, &r.Fx, &r.Fy, &r.T};
    for (int i = 0; i < 11; ++i) *d[i] = std::stod(cells[i]);
    r.newton_iters = std::stoi(cells[11]);
    r.n_cut = std::stoi(cells[12]);
    out.push_back(r);
  }
  return out;
}

void write_fields(const Simulation& sim, const std::string& path) {
  const SimState& st = sim.state();
  const P2Layout& L = sim.layout();
  const Mesh& mesh = sim.mesh();
  if (!st.geo) throw std::runtime_error("write_fields: simulation not initialized");
  const DofMap& dofs = st.geo->dofs;

  // Nodal pressure: vertices directly, edge nodes as the endpoint average.
  std::vector<double> p(L.num_nodes(), 0.0);
  for (int n = 0; n < L.num_vertices; ++n) p[n] = st.P[n];
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& en = L.element_nodes[t];
    for (int e = 0; e < 3; ++e) p[en[3 + e]] = 0.5 * (st.P[en[e]] + st.P[en[(e + 1) % 3]]);
  }

  auto f = open_out(path);
  f << "# cutfsi fields t=" << st.t << '\n';
  f << "nodes " << dofs.num_velocity_nodes() << '\n';
  for (int s = 0; s < dofs.num_velocity_nodes(); ++s) {
    const int n = dofs.velocity_node[s];
    const double ux = st.U[2 * n], uy = st.U[2 * n + 1];
    f << n << ' ' << L.coords[n].x() << ' ' << L.coords[n].y() << ' ' << std::hypot(ux, uy) << ' ' << ux << ' ' << uy
      << ' ' << p[n] << '\n';
  }
  int ntri = 0;
  for (int t = 0; t < mesh.num_triangles(); ++t) ntri += st.geo->cls.tags[t] != ElementTag::solid;
  f << "triangles " << ntri << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementTag tag = st.geo->cls.tags[t];
    if (tag == ElementTag::solid) continue;
    const auto& tri = mesh.triangles[t];
    f << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << (tag == ElementTag::cut ? "cut" : "fluid") << '\n';
  }
  check_written(f, path);
}

void write_metadata(const Simulation& sim, const std::string& path) {
  const SimConfig& c = sim.config();
  auto f = open_out(path);
  f << "mode = " << to_string(c.mode) << '\n';
  f << "domain = " << c.domain.x0 << ' ' << c.domain.x1 << ' ' << c.domain.y0 << ' ' << c.domain.y1 << '\n';
  f << "mesh = " << c.nx << 'x' << c.ny << '\n';
  f << "mesh_intervals = nx and ny count grid intervals\n";
  f << "diagonal = bottom-left to top-right\n";
  f << "h = " << sim.h() << '\n';
  f << "gamma0 = " << c.gamma0 << '\n';
  f << "gamma = " << sim.gamma() << '\n';
  f << "gamma_cap = " << (c.gamma_cap ? "on" : "off") << '\n';
  f << "rho_f = " << c.rho_f << '\n';
  f << "rho_s = " << c.rho_s << '\n';
  f << "nu = " << c.nu << '\n';
  f << "g = " << c.g << '\n';
  f << "radius = " << c.radius << '\n';
  f << "center = " << c.center_x << ' ' << c.center_y << '\n';
  f << "theta0 = " << c.theta0 << '\n';
  f << "dt_init = " << c.dt_init << '\n';
  f << "dt_min = " << c.dt_min << '\n';
  f << "dt_max = " << c.dt_max << '\n';
  f << "dt_growth = " << c.dt_growth << '\n';
  f << "t_final = " << c.t_final << '\n';
  f << "velocity_update = forward Euler in the force\n";
  f << "position_update = " << to_string(c.position_update) << '\n';
  f << "mass_model = " << to_string(c.mass_model) << '\n';
  f << "gravity_vector = (0, -g); solid: m h'' = F + m g; fluid load: rho_f g\n";
  f << "perp_convention = (a,b)^perp = (-b,a)\n";
  f << "multiplier_space = P0 vector per cut element\n";
  f << "pressure_mean = bordered constraint over the fluid region\n";
  f << "convection = " << (c.convection ? "on" : "off") << '\n';
  f << "local_reassembly = " << (c.local_reassembly ? "on" : "off") << '\n';
  f << "newton = " << c.newton.tol_abs << ' ' << c.newton.tol_rel << ' ' << c.newton.max_iter << '\n';
  check_written(f, path);
}

}  // namespace cutfsi
