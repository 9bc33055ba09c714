#pragma once

#include <string>
#include <vector>

#include "cutfsi/config.hpp"
#include "cutfsi/types.hpp"

namespace cutfsi {

/// Divergence-free Stokes pair on the plane:
///   u = (cos(pi x) sin(pi y), -sin(pi x) cos(pi y)),  p = sin(pi x) sin(pi y)
/// (p is shifted to zero mean over the discrete fluid region by the caller).
namespace manufactured {
Vec2 velocity(const Vec2& x);
Mat2 velocity_gradient(const Vec2& x);  // (a,b) -> d u_a / d x_b
double pressure(const Vec2& x);
/// -nu Lap u + grad p.
Vec2 body_force(const Vec2& x, double nu);
/// sigma(u, p - p_shift) n with sigma = 2 nu D(u) - p I.
Vec2 traction(const Vec2& x, const Vec2& n, double nu, double p_shift);
}  // namespace manufactured

struct VerifyRow {
  int nx = 0, ny = 0;
  double h = 0.0;
  double err_u = 0.0;       // L2(F)
  double err_p = 0.0;       // L2(F)
  double err_lambda = 0.0;  // L2(Gamma) against sigma(u,p)n
  double order_u = 0.0, order_p = 0.0, order_lambda = 0.0;  // vs previous row
  int newton_iters = 0;
  int n_cut = 0;
};

/// Steady Stokes solve with the disk held at (center_x, center_y), exact
/// Dirichlet data on the outer boundary and on the interface.
VerifyRow solve_manufactured_stokes(const SimConfig& cfg, int nx, int ny);

/// One row per entry of cfg.verify_meshes (nx, ny = 3 nx), with observed
/// orders between consecutive meshes.
std::vector<VerifyRow> run_stokes_verify(const SimConfig& cfg);

void write_verify_csv(const std::vector<VerifyRow>& rows, const std::string& path);

}  // namespace cutfsi
