#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>

#include "cutfsi/config.hpp"
#include "cutfsi/output.hpp"
#include "cutfsi/timeloop.hpp"
#include "cutfsi/verify.hpp"

namespace fs = std::filesystem;
using namespace cutfsi;

namespace {

int run_falling_disk(const SimConfig& cfg) {
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  Simulation sim(cfg);
  write_metadata(sim, (out / "metadata.txt").string());
  int step = 0;
  const auto records = sim.run([&](const Simulation& s, const SimRecord& r) {
    std::fprintf(stderr, "step %5d  t=%.5f  dt=%.2e  h=(%.5f, %.5f)  v=(%+.4f, %+.4f)  newton=%d  cut=%d\n", step, r.t,
                 r.dt, r.hx, r.hy, r.vx, r.vy, r.newton_iters, r.n_cut);
    if (cfg.fields_every > 0 && step % cfg.fields_every == 0) {
      char name[64];
      std::snprintf(name, sizeof name, "fields_%06d.txt", step);
      write_fields(s, (out / name).string());
    }
    ++step;
  });
  write_csv(records, (out / cfg.csv_name).string());
  std::cout << "wrote " << records.size() << " records to " << (out / cfg.csv_name).string() << '\n';
  return 0;
}

int run_verify(const SimConfig& cfg) {
  const fs::path out(cfg.out_dir);
  fs::create_directories(out);
  const auto rows = run_stokes_verify(cfg);
  write_verify_csv(rows, (out / "stokes_verify.csv").string());
  std::printf("%6s %6s %12s %12s %12s %12s %7s %7s %7s\n", "nx", "ny", "h", "err_u", "err_p", "err_lambda", "ord_u",
              "ord_p", "ord_l");
  for (const auto& r : rows) {
    std::printf("%6d %6d %12.4e %12.4e %12.4e %12.4e %7.3f %7.3f %7.3f\n", r.nx, r.ny, r.h, r.err_u, r.err_p,
                r.err_lambda, r.order_u, r.order_p, r.order_lambda);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cut finite element solver for a rigid disk falling in a viscous fluid"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a simulation or a verification study");
  std::string config_path;
  std::optional<std::string> mode, out_dir, mesh, position_update;
  std::optional<double> gamma0, tfinal;
  run->add_option("--config", config_path, "flat key = value configuration file")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", mode, "falling-disk | stokes-verify");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--gamma0", gamma0, "stabilization coefficient (gamma = gamma0 h)");
  run->add_option("--mesh", mesh, "<nx>x<ny>");
  run->add_option("--tfinal", tfinal, "final time (s)");
  run->add_option("--position-update", position_update, "midpoint | three-level");

  CLI11_PARSE(app, argc, argv);

  try {
    SimConfig cfg = parse_config_file(config_path);
    if (mode) set_config_value(cfg, "mode", *mode);
    if (out_dir) cfg.out_dir = *out_dir;
    if (gamma0) cfg.gamma0 = *gamma0;
    if (mesh) set_config_value(cfg, "mesh", *mesh);
    if (tfinal) cfg.t_final = *tfinal;
    if (position_update) set_config_value(cfg, "position_update", *position_update);
    validate_config(cfg);
    return cfg.mode == RunMode::falling_disk ? run_falling_disk(cfg) : run_verify(cfg);
  } catch (const NewtonDivergedError& e) {
    std::cerr << "cutfsi: " << e.what() << "\n  residual history:";
    for (double r : e.history()) std::cerr << ' ' << r;
    std::cerr << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "cutfsi: " << e.what() << '\n';
    return 1;
  }
}
