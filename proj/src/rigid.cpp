#include "cutfsi/rigid.hpp"

#include <numbers>
#include <stdexcept>

namespace cutfsi {

RigidInertia disk_inertia(double rho_s, double radius) {
  if (!(rho_s > 0.0) || !(radius > 0.0)) throw std::invalid_argument("disk_inertia: rho_s and R must be positive");
  RigidInertia in;
  in.rho_s = rho_s;
  in.mass = rho_s * std::numbers::pi * radius * radius;
  in.inertia = 0.5 * in.mass * radius * radius;
  return in;
}

void advance_velocity(RigidState& s, const RigidInertia& in, const Vec2& force, double torque, const Vec2& gravity,
                      double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance_velocity: dt must be positive");
  s.h_dot += (dt / in.mass) * (force + in.mass * gravity);
  s.theta_dot += (dt / in.inertia) * torque;
}

void advance_position(RigidState& s, const RigidInertia& in, const Vec2& force, double torque, const Vec2& gravity,
                      double dt, PositionUpdate variant, const Vec2& h_dot_old, double theta_dot_old) {
  if (!(dt > 0.0)) throw std::invalid_argument("advance_position: dt must be positive");
  const Vec2 h_old = s.h;
  const double theta_old = s.theta;
  if (variant == PositionUpdate::midpoint) {
    s.h += 0.5 * dt * (h_dot_old + s.h_dot);
    s.theta += 0.5 * dt * (theta_dot_old + s.theta_dot);
  } else {
    s.h = 2.0 * h_old - s.h_prev + (dt * dt / in.mass) * (force + in.mass * gravity);
    s.theta = 2.0 * theta_old - s.theta_prev + (dt * dt / in.inertia) * torque;
  }
  s.h_prev = h_old;
  s.theta_prev = theta_old;
}

void startup_history(RigidState& s, double dt) {
  s.h_prev = s.h - dt * s.h_dot;
  s.theta_prev = s.theta - dt * s.theta_dot;
}

}  // namespace cutfsi
