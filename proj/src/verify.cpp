#include "cutfsi/verify.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <stdexcept>

#include "cutfsi/timeloop.hpp"

namespace cutfsi {

namespace manufactured {

using std::numbers::pi;

Vec2 velocity(const Vec2& x) {
  return {std::cos(pi * x.x()) * std::sin(pi * x.y()), -std::sin(pi * x.x()) * std::cos(pi * x.y())};
}

Mat2 velocity_gradient(const Vec2& x) {
  const double sx = std::sin(pi * x.x()), cx = std::cos(pi * x.x());
  const double sy = std::sin(pi * x.y()), cy = std::cos(pi * x.y());
  Mat2 g;
  g << -pi * sx * sy, pi * cx * cy, -pi * cx * cy, pi * sx * sy;
  return g;
}

double pressure(const Vec2& x) { return std::sin(pi * x.x()) * std::sin(pi * x.y()); }

Vec2 body_force(const Vec2& x, double nu) {
  // Each velocity component is an eigenfunction: Lap u = -2 pi^2 u.
  const Vec2 grad_p(pi * std::cos(pi * x.x()) * std::sin(pi * x.y()), pi * std::sin(pi * x.x()) * std::cos(pi * x.y()));
  return 2.0 * nu * pi * pi * velocity(x) + grad_p;
}

Vec2 traction(const Vec2& x, const Vec2& n, double nu, double p_shift) {
  const Mat2 g = velocity_gradient(x);
  const Mat2 D = 0.5 * (g + g.transpose());
  return 2.0 * nu * D * n - (pressure(x) - p_shift) * n;
}

}  // namespace manufactured

VerifyRow solve_manufactured_stokes(const SimConfig& cfg, int nx, int ny) {
  const Mesh mesh = build_structured_mesh(nx, ny, cfg.domain);
  const P2Layout layout = build_p2_layout(mesh);
  RigidShape shape;
  shape.radius = cfg.radius;
  RigidState rigid;
  rigid.h = Vec2(cfg.center_x, cfg.center_y);
  const GeometryState geo = build_geometry(mesh, layout, shape, rigid);
  const Discretization d{mesh, layout, geo.cls, geo.dofs};
  const double h = mesh_size_h(mesh);
  constexpr int err_order = 8;

  double area = 0.0, p_int = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (geo.cls.tags[t] == ElementTag::solid) continue;
    const QuadratureRule q = fluid_quadrature(mesh, geo.cls, t, err_order);
    for (std::size_t i = 0; i < q.size(); ++i) {
      area += q.weights[i];
      p_int += q.weights[i] * manufactured::pressure(q.points[i]);
    }
  }
  const double p_mean = p_int / area;

  FluidProblem::Setup setup;
  setup.params.rho_f = cfg.rho_f;
  setup.params.nu = cfg.nu;
  setup.gamma = cfg.gamma0 * h;
  setup.opts.load_order = 6;
  setup.opts.gamma_cap = cfg.gamma_cap;
  const double nu = cfg.nu;
  setup.body_force = [nu](const Vec2& x) { return manufactured::body_force(x, nu); };
  setup.u_gamma = manufactured::velocity;
  setup.dirichlet = manufactured::velocity;
  setup.mass_scale = 0.0;
  setup.convection = false;
  FluidProblem problem(d, std::move(setup), Vector());
  Vector x0 = Vector::Zero(problem.size());
  problem.impose_dirichlet(x0);
  const NewtonResult res = newton_solve(problem.as_system(), std::move(x0), cfg.newton);
  const Vector& x = res.x;

  VerifyRow row;
  row.nx = nx;
  row.ny = ny;
  row.h = h;
  row.newton_iters = res.iterations;
  row.n_cut = geo.cls.num_cut();
  double eu = 0.0, ep = 0.0, el = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (geo.cls.tags[t] == ElementTag::solid) continue;
    const TriangleMap map(mesh.triangle_vertices(t));
    const QuadratureRule q = fluid_quadrature(mesh, geo.cls, t, err_order);
    const auto& en = layout.element_nodes[t];
    const auto& tri = mesh.triangles[t];
    for (std::size_t i = 0; i < q.size(); ++i) {
      const P2Basis b = p2_basis(map, q.points[i]);
      const P1Basis pb = p1_basis(map, q.points[i]);
      Vec2 uh = Vec2::Zero();
      for (int k = 0; k < 6; ++k) {
        uh[0] += b.value[k] * x[geo.dofs.u_dof(en[k], 0)];
        uh[1] += b.value[k] * x[geo.dofs.u_dof(en[k], 1)];
      }
      double ph = 0.0;
      for (int k = 0; k < 3; ++k) ph += pb.value[k] * x[geo.dofs.p_offset() + geo.dofs.p_dof(tri[k])];
      eu += q.weights[i] * (uh - manufactured::velocity(q.points[i])).squaredNorm();
      const double pe = manufactured::pressure(q.points[i]) - p_mean;
      ep += q.weights[i] * (ph - pe) * (ph - pe);
    }
  }
  for (int ic = 0; ic < geo.cls.num_cut(); ++ic) {
    const CutCell& c = geo.cls.cells[ic];
    const Vec2 lam(x[geo.dofs.lambda_offset() + 2 * ic], x[geo.dofs.lambda_offset() + 2 * ic + 1]);
    const QuadratureRule q = segment_quadrature(c.segment[0], c.segment[1], 5);
    for (std::size_t i = 0; i < q.size(); ++i) {
      el += q.weights[i] * (lam - manufactured::traction(q.points[i], c.normal, nu, p_mean)).squaredNorm();
    }
  }
  row.err_u = std::sqrt(eu);
  row.err_p = std::sqrt(ep);
  row.err_lambda = std::sqrt(el);
  return row;
}

std::vector<VerifyRow> run_stokes_verify(const SimConfig& cfg) {
  validate_config(cfg);
  std::vector<VerifyRow> rows;
  for (int nx : cfg.verify_meshes) {
    const int ny = static_cast<int>(std::lround(nx * cfg.domain.height() / cfg.domain.width()));
    VerifyRow r = solve_manufactured_stokes(cfg, nx, ny);
    if (!rows.empty()) {
      const VerifyRow& prev = rows.back();
      const double lh = std::log(prev.h / r.h);
      r.order_u = std::log(prev.err_u / r.err_u) / lh;
      r.order_p = std::log(prev.err_p / r.err_p) / lh;
      r.order_lambda = std::log(prev.err_lambda / r.err_lambda) / lh;
    }
    rows.push_back(r);
  }
  return rows;
}

void write_verify_csv(const std::vector<VerifyRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << std::setprecision(17);
  f << "nx,ny,h,err_u,err_p,err_lambda,order_u,order_p,order_lambda,newton_iters,n_cut\n";
  for (const auto& r : rows) {
    f << r.nx << ',' << r.ny << ',' << r.h << ',' << r.err_u << ',' << r.err_p << ',' << r.err_lambda << ','
      << r.order_u << ',' << r.order_p << ',' << r.order_lambda << ',' << r.newton_iters << ',' << r.n_cut << '\n';
  }
  f.flush();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace cutfsi
