#pragma once

#include <span>
#include <vector>

#include "cutfsi/types.hpp"

namespace cutfsi {

/// Points and positive weights; weights sum to the measure of the region.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }
  double measure() const;
  void append(const QuadratureRule& other);
};

/// Symmetric rule on a triangle, exact for polynomials of total degree
/// `order`. Orders 1-6 use Dunavant/Strang-Fix points; higher orders fall
/// back to a collapsed Gauss product rule.
QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c, int order);

/// Convex counterclockwise polygon, fan-triangulated from the vertex centroid.
QuadratureRule polygon_quadrature(std::span<const Vec2> polygon, int order);

/// Gauss-Legendre rule with `npts` points on the segment [a,b].
QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int npts);

/// Gauss-Legendre nodes/weights on [-1,1].
void gauss_legendre(int npts, std::vector<double>& nodes, std::vector<double>& weights);

double polygon_area(std::span<const Vec2> polygon);

}  // namespace cutfsi
