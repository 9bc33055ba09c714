#include "cutfsi/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace cutfsi {

LevelSet::LevelSet(RigidShape shape, const RigidState& state) : shape_(shape), center_(state.h) {
  if (!(shape_.radius > 0.0)) throw std::invalid_argument("LevelSet: radius must be positive");
}

double LevelSet::operator()(const Vec2& x) const { return (x - center_).norm() - shape_.radius; }

double levelset_eval(const Vec2& x, const LevelSet& ls) { return ls(x); }

Vec2 interface_normal(const Vec2& x, const LevelSet& ls) {
  const Vec2 r = x - ls.center();
  const double len = r.norm();
  if (len == 0.0) throw std::domain_error("interface_normal: point coincides with the disk centre");
  return -r / len;
}

Vec2 rigid_velocity_at(const Vec2& x, const RigidState& s) { return s.h_dot + s.theta_dot * perp(x - s.h); }

}  // namespace cutfsi
