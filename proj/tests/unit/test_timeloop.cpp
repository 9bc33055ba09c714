#include <doctest.h>

#include <cmath>
#include <random>

#include "cutfsi/timeloop.hpp"

using namespace cutfsi;

namespace {

SimConfig small_config() {
  SimConfig c;
  c.nx = 10;
  c.ny = 30;
  return c;
}

struct Geo {
  Mesh mesh;
  P2Layout layout;
  RigidState rigid;
  GeometryState geo;
  Geo(int nx, int ny, Vec2 c)
      : mesh(build_structured_mesh(nx, ny, Rect{0, 2, 0, 6})),
        layout(build_p2_layout(mesh)),
        rigid(at(c)),
        geo(build_geometry(mesh, layout, RigidShape{}, rigid)) {}
  static RigidState at(Vec2 c) {
    RigidState s;
    s.h = c;
    return s;
  }
};

}  // namespace

TEST_CASE("velocity extension") {
  Geo g(10, 30, {1.0, 4.0});
  Vector U = Vector::Constant(2 * g.layout.num_nodes(), 0.25);
  RigidState r = g.rigid;
  extend_velocity(g.layout, g.geo.ls, r, U);
  for (int n = 0; n < g.layout.num_nodes(); ++n) {
    const bool inside = g.geo.ls(g.layout.coords[n]) <= 0.0;
    CHECK(U[2 * n] == (inside ? 0.0 : 0.25));
  }
  r.h_dot = {0.0, 0.0};
  r.theta_dot = 2.0;
  Vector V = Vector::Zero(2 * g.layout.num_nodes());
  extend_velocity(g.layout, g.geo.ls, r, V);
  for (int n = 0; n < g.layout.num_nodes(); ++n) {
    const Vec2 d = g.layout.coords[n] - r.h;
    if (g.geo.ls(g.layout.coords[n]) > 0.0) continue;
    CHECK(V[2 * n] == doctest::Approx(-2.0 * d.y()));
    CHECK(V[2 * n + 1] == doctest::Approx(2.0 * d.x()));
  }
}

TEST_CASE("CFL time step") {
  Geo g(50, 150, {1.0, 4.0});
  const double h = mesh_size_h(g.mesh);
  RigidState r = g.rigid;
  CHECK(adapt_dt(g.geo.cls, r, h, 0.1, 1e-6) == doctest::Approx(0.064).epsilon(1e-6));
  r.h_dot = {0.0, -10.0};
  CHECK(adapt_dt(g.geo.cls, r, h, 0.1, 1e-6) == doctest::Approx(0.005091).epsilon(1e-4));
  r.theta_dot = 100.0;  // rim speed adds to the centre speed
  CHECK(adapt_dt(g.geo.cls, r, h, 0.1, 1e-6) < 0.9 * h / 10.0);
}

TEST_CASE("pack and unpack are inverse on active slots") {
  Geo g(10, 30, {1.0, 4.0});
  const DofMap& d = g.geo.dofs;
  std::mt19937 rng(1);
  std::normal_distribution<double> N;
  Vector U(2 * g.layout.num_nodes()), P(g.mesh.num_nodes()), L(d.multiplier_size());
  for (auto& x : U) x = N(rng);
  for (auto& x : P) x = N(rng);
  for (auto& x : L) x = N(rng);
  const Vector x = pack_unknowns(d, U, P, L);
  CHECK(x.size() == d.size());
  Vector U2 = Vector::Zero(U.size()), P2 = Vector::Zero(P.size()), L2;
  unpack_unknowns(d, x, U2, P2, L2);
  CHECK((L2 - L).norm() == 0.0);
  for (int s = 0; s < d.num_velocity_nodes(); ++s) CHECK(U2[2 * d.velocity_node[s]] == U[2 * d.velocity_node[s]]);
  for (int s = 0; s < d.num_pressure(); ++s) CHECK(P2[d.pressure_node[s]] == P[d.pressure_node[s]]);
}

TEST_CASE("full residual Jacobian matches central differences") {
  Geo g(10, 30, {1.02, 3.95});
  const Discretization d{g.mesh, g.layout, g.geo.cls, g.geo.dofs};
  FluidProblem::Setup setup;
  setup.gamma = 0.05 * mesh_size_h(g.mesh);
  setup.body_force = [](const Vec2&) { return Vec2(0.0, -981.0); };
  setup.u_gamma = [](const Vec2& x) { return Vec2(0.3 * x.y(), -5.0); };
  setup.mass_scale = 1000.0;
  setup.convection = true;
  std::mt19937 rng(42);
  std::normal_distribution<double> N;
  Vector U_old(g.geo.dofs.velocity_size());
  for (auto& x : U_old) x = N(rng);
  const FluidProblem prob(d, setup, U_old);
  Vector x(prob.size());
  for (int s = 0; s < g.geo.dofs.num_velocity_nodes(); ++s) {
    const Vec2 p = g.layout.coords[g.geo.dofs.velocity_node[s]];
    x[2 * s] = std::sin(2 * p.x()) * std::cos(p.y());
    x[2 * s + 1] = 3.0 * p.x() * p.y();
  }
  for (int k = g.geo.dofs.p_offset(); k < x.size(); ++k) x[k] = N(rng);
  const SparseMatrix J = prob.raw_jacobian(x);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    Vector dir(x.size());
    for (auto& v : dir) v = N(rng);
    const double eps = 1e-6;
    const Vector fd = (prob.raw_residual(x + eps * dir) - prob.raw_residual(x - eps * dir)) / (2 * eps);
    const Vector jd = J * dir;
    worst = std::max(worst, (fd - jd).norm() / jd.norm());
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("steady Stokes problem is solved by one Newton iteration") {
  Geo g(10, 30, {1.0, 4.0});
  const Discretization d{g.mesh, g.layout, g.geo.cls, g.geo.dofs};
  FluidProblem::Setup setup;
  setup.gamma = 0.05 * mesh_size_h(g.mesh);
  setup.body_force = [](const Vec2&) { return Vec2(0.0, -981.0); };
  setup.u_gamma = [](const Vec2&) { return Vec2(0.0, -5.0); };
  setup.convection = false;
  const FluidProblem prob(d, setup, Vector());
  const auto res = newton_solve(prob.as_system(), Vector::Zero(prob.size()));
  CHECK(res.iterations == 1);

  FluidProblem::Setup zero = setup;
  zero.body_force = nullptr;
  zero.u_gamma = nullptr;
  zero.convection = true;
  const FluidProblem pz(d, zero, Vector());
  const auto rz = newton_solve(pz.as_system(), Vector::Zero(pz.size()));
  CHECK(rz.x.norm() == 0.0);
}

TEST_CASE("rest state without gravity stays at rest") {
  SimConfig c = small_config();
  c.g = 0.0;
  c.t_final = 0.002;
  Simulation sim(c);
  const auto recs = sim.run();
  CHECK(recs.size() >= 2);
  const auto& s = sim.state();
  CHECK(s.U.norm() < 1e-12);
  CHECK(s.lambda.norm() < 1e-10);
  CHECK(s.rigid.h.isApprox(Vec2(1.0, 4.0)));
  CHECK(s.rigid.h_dot.norm() < 1e-12);
}

TEST_CASE("run bookkeeping") {
  SimConfig c = small_config();
  c.t_final = 0.0;
  Simulation s0(c);
  const auto r0 = s0.run();
  REQUIRE(r0.size() == 1);
  CHECK(r0[0].t == 0.0);
  CHECK(r0[0].dt == c.dt_init);

  c.t_final = 0.003;
  Simulation s1(c);
  int calls = 0;
  const auto r1 = s1.run([&calls](const Simulation&, const SimRecord&) { ++calls; });
  CHECK(static_cast<int>(r1.size()) == calls);
  for (std::size_t i = 1; i < r1.size(); ++i) {
    CHECK(r1[i].t > r1[i - 1].t);
    CHECK(r1[i].t == doctest::Approx(r1[i - 1].t + r1[i].dt));
    CHECK(r1[i].n_cut > 0);
  }
  CHECK(r1.back().t >= c.t_final - 1e-12);
  // a heavy disk starts falling
  CHECK(r1.back().vy < 0.0);
}

TEST_CASE("dt bounds from the configuration") {
  SimConfig c = small_config();
  c.t_final = 0.004;
  c.dt_max = 0.001;
  c.dt_growth = 1.5;
  Simulation s(c);
  const auto r = s.run();
  for (std::size_t i = 1; i < r.size(); ++i) {
    CHECK(r[i].dt <= 0.001 + 1e-15);
    CHECK(r[i].dt <= 1.5 * r[i - 1].dt + 1e-15);
  }
}
