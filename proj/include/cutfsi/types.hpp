#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace cutfsi {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Counterclockwise quarter turn: (a,b) -> (-b,a).
inline Vec2 perp(const Vec2& v) { return {-v.y(), v.x()}; }

/// z-component of the 2D cross product.
inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace cutfsi
