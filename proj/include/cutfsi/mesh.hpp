#pragma once

#include <array>
#include <vector>

#include "cutfsi/types.hpp"

namespace cutfsi {

struct Rect {
  double x0 = 0.0, x1 = 2.0;
  double y0 = 0.0, y1 = 6.0;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
  bool contains(const Vec2& p) const { return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1; }
};

/// Structured triangulation of a rectangle. Triangles are counterclockwise;
/// every grid cell is split along its bottom-left to top-right diagonal.
struct Mesh {
  Rect domain;
  int nx = 0, ny = 0;
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  std::vector<char> on_boundary;  // per node

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }
  std::array<Vec2, 3> triangle_vertices(int t) const {
    const auto& tri = triangles[t];
    return {nodes[tri[0]], nodes[tri[1]], nodes[tri[2]]};
  }
};

struct MeshMetrics {
  double h = 0.0;  // max element diameter
  double dx = 0.0;
  double dy = 0.0;
};

Mesh build_structured_mesh(int nx, int ny, const Rect& domain);

double mesh_size_h(const Mesh& mesh);
MeshMetrics mesh_metrics(const Mesh& mesh);

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace cutfsi
