#pragma once

#include "cutfsi/geometry.hpp"

namespace cutfsi {

struct RigidInertia {
  double mass = 0.0;     // g (per unit depth)
  double inertia = 0.0;  // g cm^2
  double rho_s = 0.0;
};

RigidInertia disk_inertia(double rho_s, double radius);

enum class PositionUpdate { midpoint, three_level };

/// Explicit velocity update from the hydrodynamic force/torque of the
/// previous fluid solve:
///   h'   += dt/m (force + m g)
///   th'  += dt/I torque
/// `gravity` is the acceleration vector, (0,-981) for the benchmark.
void advance_velocity(RigidState& s, const RigidInertia& in, const Vec2& force, double torque, const Vec2& gravity,
                      double dt);

/// Position update. `midpoint` uses the average of the old velocities
/// (`h_dot_old`, `theta_dot_old`) and the already-advanced ones in `s`;
/// `three_level` uses h^{n+1} = 2h^n - h^{n-1} + dt^2/m (force + m g).
/// Updates h_prev/theta_prev to the old position.
void advance_position(RigidState& s, const RigidInertia& in, const Vec2& force, double torque, const Vec2& gravity,
                      double dt, PositionUpdate variant, const Vec2& h_dot_old, double theta_dot_old);

/// h_prev = h0 - dt h'0 (and likewise for the angle).
void startup_history(RigidState& s, double dt);

}  // namespace cutfsi
