#include "cutfsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cutfsi {

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) { return 0.5 * cross(b - a, c - a); }

Mesh build_structured_mesh(int nx, int ny, const Rect& domain) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_structured_mesh: nx and ny must be positive (got " + std::to_string(nx) +
                                "x" + std::to_string(ny) + ")");
  }
  if (!(domain.x1 > domain.x0) || !(domain.y1 > domain.y0)) {
    throw std::invalid_argument("build_structured_mesh: degenerate rectangle");
  }
  Mesh m;
  m.domain = domain;
  m.nx = nx;
  m.ny = ny;
  const double dx = domain.width() / nx;
  const double dy = domain.height() / ny;
  m.nodes.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  m.on_boundary.reserve(m.nodes.capacity());
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      // Pin the last row/column to the exact rectangle bounds.
      const double x = (i == nx) ? domain.x1 : domain.x0 + i * dx;
      const double y = (j == ny) ? domain.y1 : domain.y0 + j * dy;
      m.nodes.emplace_back(x, y);
      m.on_boundary.push_back(i == 0 || i == nx || j == 0 || j == ny);
    }
  }
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.triangles.reserve(2 * static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      m.triangles.push_back({a, b, c});
      m.triangles.push_back({a, c, d});
    }
  }
  return m;
}

double mesh_size_h(const Mesh& mesh) {
  double h = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = mesh.triangle_vertices(t);
    h = std::max({h, (v[1] - v[0]).norm(), (v[2] - v[1]).norm(), (v[0] - v[2]).norm()});
  }
  return h;
}

MeshMetrics mesh_metrics(const Mesh& mesh) {
  return {mesh_size_h(mesh), mesh.domain.width() / mesh.nx, mesh.domain.height() / mesh.ny};
}

}  // namespace cutfsi
