#include <doctest.h>

#include <cmath>

#include "cutfsi/rigid.hpp"

using namespace cutfsi;

TEST_CASE("disk inertia for the benchmark disk") {
  const auto in = disk_inertia(1.25, 0.125);
  CHECK(in.mass == doctest::Approx(0.0613592).epsilon(1e-6));
  CHECK(in.inertia == doctest::Approx(4.79369e-4).epsilon(1e-5));
  const auto in2 = disk_inertia(1.25, 0.25);
  CHECK(in2.mass == doctest::Approx(4 * in.mass));
  CHECK(in2.inertia == doctest::Approx(16 * in.inertia));
  CHECK_THROWS(disk_inertia(0.0, 1.0));
}

TEST_CASE("velocity update") {
  const auto in = disk_inertia(1.25, 0.125);
  const Vec2 g(0.0, -981.0);
  RigidState s;
  advance_velocity(s, in, Vec2::Zero(), 0.0, g, 0.001);
  CHECK(s.h_dot.y() == doctest::Approx(-0.981));
  RigidState e;
  e.h_dot = {0.3, -2.0};
  advance_velocity(e, in, Vec2(0.0, in.mass * 981.0), 0.0, g, 0.01);
  CHECK(e.h_dot.x() == doctest::Approx(0.3));
  CHECK(e.h_dot.y() == doctest::Approx(-2.0));
  RigidState r;
  advance_velocity(r, in, Vec2::Zero(), in.inertia / 0.01, g, 0.01);
  CHECK(r.theta_dot == doctest::Approx(1.0));
}

TEST_CASE("midpoint position update") {
  const auto in = disk_inertia(1.25, 0.125);
  RigidState s;
  s.h = {1.0, 4.0};
  s.h_dot = {0.0, -5.0};
  advance_position(s, in, Vec2::Zero(), 0.0, Vec2::Zero(), 0.01, PositionUpdate::midpoint, Vec2(0.0, -5.0), 0.0);
  CHECK(s.h.y() == doctest::Approx(3.95));
  CHECK(s.h_prev.y() == doctest::Approx(4.0));

  RigidState z;
  z.h = {1.0, 4.0};
  advance_velocity(z, in, Vec2::Zero(), 0.0, Vec2::Zero(), 0.01);
  advance_position(z, in, Vec2::Zero(), 0.0, Vec2::Zero(), 0.01, PositionUpdate::midpoint, Vec2::Zero(), 0.0);
  CHECK(z.h.isApprox(Vec2(1.0, 4.0)));
}

TEST_CASE("startup history") {
  RigidState s;
  s.h = {1.0, 4.0};
  startup_history(s, 0.01);
  CHECK(s.h_prev.isApprox(s.h));
  s.h_dot = {0.0, -1.0};
  startup_history(s, 0.01);
  CHECK(s.h_prev.y() == doctest::Approx(4.01));
}

TEST_CASE("both position updates reproduce free fall") {
  // exact: h(t) = h0 + v0 t - g t^2 / 2
  const auto in = disk_inertia(1.25, 0.125);
  const Vec2 g(0.0, -981.0);
  const double dt = 1e-3;
  for (auto variant : {PositionUpdate::midpoint, PositionUpdate::three_level}) {
    RigidState s;
    s.h = {1.0, 4.0};
    s.h_dot = {0.0, -1.0};
    // three-level startup from the exact previous position
    s.h_prev = s.h - dt * s.h_dot + 0.5 * dt * dt * g;
    for (int n = 0; n < 100; ++n) {
      const Vec2 v_old = s.h_dot;
      advance_velocity(s, in, Vec2::Zero(), 0.0, g, dt);
      advance_position(s, in, Vec2::Zero(), 0.0, g, dt, variant, v_old, 0.0);
    }
    const double t = 0.1;
    const double exact = 4.0 - t - 0.5 * 981.0 * t * t;
    CHECK(s.h.y() == doctest::Approx(exact).epsilon(1e-10));
    CHECK(s.h_dot.y() == doctest::Approx(-1.0 - 981.0 * t).epsilon(1e-12));
  }
}
