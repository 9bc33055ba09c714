#pragma once

#include "cutfsi/types.hpp"

namespace cutfsi {

/// Rigid solid shape. Only the disk is supported.
struct RigidShape {
  enum class Kind { disk };
  Kind kind = Kind::disk;
  double radius = 0.125;  // cm
};

/// Kinematic state of the rigid solid.
///
/// `h_prev` holds the centre position of the previous accepted step; it is
/// only consumed by the three-level position update.
struct RigidState {
  Vec2 h = Vec2::Zero();
  Vec2 h_dot = Vec2::Zero();
  double theta = 0.0;
  double theta_dot = 0.0;
  Vec2 h_prev = Vec2::Zero();
  double theta_prev = 0.0;
};

/// Signed-distance level set of a rigid shape placed at a rigid state:
/// negative inside the solid, positive in the fluid.
class LevelSet {
 public:
  LevelSet(RigidShape shape, const RigidState& state);

  double operator()(const Vec2& x) const;
  const RigidShape& shape() const { return shape_; }
  const Vec2& center() const { return center_; }

 private:
  RigidShape shape_;
  Vec2 center_;
};

double levelset_eval(const Vec2& x, const LevelSet& ls);

/// Outward unit normal of the fluid domain at a point of the interface,
/// i.e. pointing from the fluid into the solid.
Vec2 interface_normal(const Vec2& x, const LevelSet& ls);

/// Rigid velocity field h' + theta' (x - h)^perp.
Vec2 rigid_velocity_at(const Vec2& x, const RigidState& s);

}  // namespace cutfsi
