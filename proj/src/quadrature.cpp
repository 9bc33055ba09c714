#include "cutfsi/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cutfsi/mesh.hpp"

namespace cutfsi {

namespace {

struct BaryPoint {
  double l0, l1, l2, w;
};

// Orbit helpers for symmetric rules: weights are normalized to sum 1.
void orbit3(std::vector<BaryPoint>& r, double a, double b, double w) {
  r.push_back({a, b, b, w});
  r.push_back({b, a, b, w});
  r.push_back({b, b, a, w});
}

void orbit6(std::vector<BaryPoint>& r, double a, double b, double c, double w) {
  r.push_back({a, b, c, w});
  r.push_back({a, c, b, w});
  r.push_back({b, a, c, w});
  r.push_back({b, c, a, w});
  r.push_back({c, a, b, w});
  r.push_back({c, b, a, w});
}

std::vector<BaryPoint> reference_rule(int order) {
  std::vector<BaryPoint> r;
  switch (order) {
    case 1:
      r.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 1.0});
      break;
    case 2:
      orbit3(r, 2.0 / 3, 1.0 / 6, 1.0 / 3);
      break;
    case 3:
      // Strang-Fix, all weights positive.
      orbit6(r, 0.659027622374092, 0.231933368553031, 0.109039009072877, 1.0 / 6);
      break;
    case 4:
      orbit3(r, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      orbit3(r, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      break;
    case 5:
      r.push_back({1.0 / 3, 1.0 / 3, 1.0 / 3, 0.225});
      orbit3(r, 0.059715871789770, 0.470142064105115, 0.132394152788506);
      orbit3(r, 0.797426985353087, 0.101286507323456, 0.125939180544827);
      break;
    case 6:
      orbit3(r, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      orbit3(r, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      orbit6(r, 0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374);
      break;
    default: {
      // Collapsed (Duffy) Gauss product rule: exact for degree 2n-2 >= order.
      const int n = (order + 3) / 2;
      std::vector<double> x, w;
      gauss_legendre(n, x, w);
      for (int i = 0; i < n; ++i) {
        const double s = 0.5 * (x[i] + 1.0);
        for (int j = 0; j < n; ++j) {
          const double t = 0.5 * (x[j] + 1.0);
          // (s,t) in the unit square -> (l1,l2) = (s(1-t), t), Jacobian (1-t).
          const double l1 = s * (1.0 - t), l2 = t;
          const double weight = 0.25 * w[i] * w[j] * (1.0 - t) * 2.0;
          r.push_back({1.0 - l1 - l2, l1, l2, weight});
        }
      }
      break;
    }
  }
  return r;
}

const std::vector<BaryPoint>& cached_rule(int order) {
  static const std::vector<std::vector<BaryPoint>> cache = [] {
    std::vector<std::vector<BaryPoint>> c(13);
    for (int k = 1; k <= 12; ++k) c[k] = reference_rule(k);
    return c;
  }();
  if (order < 1) throw std::invalid_argument("triangle_quadrature: order must be >= 1");
  if (order > 12) throw std::invalid_argument("triangle_quadrature: order > 12 not supported");
  return cache[order];
}

}  // namespace

double QuadratureRule::measure() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

void QuadratureRule::append(const QuadratureRule& other) {
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
}

void gauss_legendre(int npts, std::vector<double>& nodes, std::vector<double>& weights) {
  if (npts < 1) throw std::invalid_argument("gauss_legendre: npts must be >= 1");
  nodes.assign(npts, 0.0);
  weights.assign(npts, 0.0);
  for (int i = 0; i < (npts + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (npts + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= npts; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = npts == 1 ? x : p1;
      const double pnm1 = npts == 1 ? 1.0 : p0;
      dp = npts * (x * pn - pnm1) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[npts - 1 - i] = x;
    weights[i] = weights[npts - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

QuadratureRule triangle_quadrature(const Vec2& a, const Vec2& b, const Vec2& c, int order) {
  const double area = signed_area(a, b, c);
  if (!(std::abs(area) > 0.0)) throw std::invalid_argument("triangle_quadrature: degenerate triangle");
  const auto& ref = cached_rule(order);
  QuadratureRule q;
  q.points.reserve(ref.size());
  q.weights.reserve(ref.size());
  for (const auto& p : ref) {
    q.points.push_back(p.l0 * a + p.l1 * b + p.l2 * c);
    q.weights.push_back(p.w * std::abs(area));
  }
  return q;
}

double polygon_area(std::span<const Vec2> polygon) {
  double s = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) s += cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  return 0.5 * s;
}

QuadratureRule polygon_quadrature(std::span<const Vec2> polygon, int order) {
  if (polygon.size() < 3) throw std::invalid_argument("polygon_quadrature: fewer than 3 vertices");
  const double area = polygon_area(polygon);
  if (!(area > 0.0)) throw std::invalid_argument("polygon_quadrature: degenerate or clockwise polygon");
  if (polygon.size() == 3) return triangle_quadrature(polygon[0], polygon[1], polygon[2], order);
  Vec2 centroid = Vec2::Zero();
  for (const auto& p : polygon) centroid += p;
  centroid /= static_cast<double>(polygon.size());
  QuadratureRule q;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Vec2& p = polygon[i];
    const Vec2& r = polygon[(i + 1) % polygon.size()];
    // Coincident vertices produce empty fan triangles; skip them.
    if (signed_area(centroid, p, r) <= 1e-14 * area) continue;
    q.append(triangle_quadrature(centroid, p, r, order));
  }
  return q;
}

QuadratureRule segment_quadrature(const Vec2& a, const Vec2& b, int npts) {
  const double len = (b - a).norm();
  if (!(len > 0.0)) throw std::invalid_argument("segment_quadrature: zero-length segment");
  std::vector<double> x, w;
  gauss_legendre(npts, x, w);
  QuadratureRule q;
  q.points.reserve(npts);
  q.weights.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    q.points.push_back(a + 0.5 * (x[i] + 1.0) * (b - a));
    q.weights.push_back(0.5 * w[i] * len);
  }
  return q;
}

}  // namespace cutfsi
