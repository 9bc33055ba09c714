#include "cutfsi/cut.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cutfsi {

namespace {

// Root of f on the segment [a,b] given f(a) < 0 < f(b) or the reverse,
// by Illinois regula falsi started from the linear estimate.
Vec2 edge_root(const LevelSet& f, const Vec2& a, const Vec2& b, double fa, double fb) {
  double s0 = 0.0, s1 = 1.0, f0 = fa, f1 = fb;
  double s = f0 / (f0 - f1);
  int side = 0;
  for (int it = 0; it < 60; ++it) {
    const double fs = f(a + s * (b - a));
    if (fs == 0.0 || s1 - s0 < 1e-15) break;
    if ((fs > 0.0) == (f1 > 0.0)) {
      s1 = s;
      f1 = fs;
      if (side == 1) f0 *= 0.5;
      side = 1;
    } else {
      s0 = s;
      f0 = fs;
      if (side == -1) f1 *= 0.5;
      side = -1;
    }
    const double next = s0 + f0 / (f0 - f1) * (s1 - s0);
    if (std::abs(next - s) <= 1e-15) {
      s = next;
      break;
    }
    s = next;
  }
  return a + s * (b - a);
}

}  // namespace

CutCell clip_triangle(const std::array<Vec2, 3>& v, const std::array<double, 3>& phi) {
  return clip_triangle(v, phi, nullptr);
}

CutCell clip_triangle(const std::array<Vec2, 3>& v, const std::array<double, 3>& phi, const LevelSet* exact) {
  const bool any_pos = phi[0] > 0.0 || phi[1] > 0.0 || phi[2] > 0.0;
  const bool any_nonpos = phi[0] <= 0.0 || phi[1] <= 0.0 || phi[2] <= 0.0;
  if (!any_pos || !any_nonpos) throw std::invalid_argument("clip_triangle: level set does not change sign");

  CutCell c;
  c.triangle_area = std::abs(signed_area(v[0], v[1], v[2]));
  // Walk the counterclockwise boundary, keeping phi > 0 vertices and the
  // crossings on sign-changing edges; the result stays counterclockwise.
  std::vector<Vec2> poly;
  std::vector<Vec2> crossings;
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const bool in_i = phi[i] > 0.0;
    const bool in_j = phi[j] > 0.0;
    if (in_i) poly.push_back(v[i]);
    if (in_i != in_j) {
      const double s = phi[i] / (phi[i] - phi[j]);
      const bool refine = exact && phi[i] != 0.0 && phi[j] != 0.0;
      const Vec2 p = refine ? edge_root(*exact, v[i], v[j], phi[i], phi[j]) : Vec2(v[i] + s * (v[j] - v[i]));
      poly.push_back(p);
      crossings.push_back(p);
    }
  }
  c.fluid_polygon = std::move(poly);
  c.fluid_area = polygon_area(c.fluid_polygon);

  // Gradient of the P1 interpolant; the fluid normal points down the gradient.
  const double two_a = cross(v[1] - v[0], v[2] - v[0]);
  const Vec2 grad = (phi[0] * perp(v[2] - v[1]) + phi[1] * perp(v[0] - v[2]) + phi[2] * perp(v[1] - v[0])) / two_a;
  c.segment = {crossings[0], crossings[1]};
  c.segment_length = (crossings[1] - crossings[0]).norm();
  if (exact && c.segment_length > 0.0) {
    const Vec2 n = perp(crossings[1] - crossings[0]) / c.segment_length;
    c.normal = n.dot(grad) > 0.0 ? Vec2(-n) : n;
  } else {
    const double gnorm = grad.norm();
    c.normal = gnorm > 0.0 ? Vec2(-grad / gnorm) : Vec2::Zero();
  }
  return c;
}

CutClassification classify_elements(const Mesh& mesh, const LevelSet& ls, CutOptions opts) {
  const double tol_cut = opts.tol_cut >= 0.0 ? opts.tol_cut : 1e-6 * mesh_size_h(mesh);
  std::vector<double> phi_node(mesh.num_nodes());
  for (int n = 0; n < mesh.num_nodes(); ++n) {
    const double phi = ls(mesh.nodes[n]);
    phi_node[n] = std::abs(phi) <= tol_cut ? 0.0 : phi;
  }

  CutClassification cls;
  cls.tags.assign(mesh.num_triangles(), ElementTag::fluid);
  cls.cell_of_element.assign(mesh.num_triangles(), -1);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    const std::array<double, 3> phi{phi_node[tri[0]], phi_node[tri[1]], phi_node[tri[2]]};
    const double lo = std::min({phi[0], phi[1], phi[2]});
    const double hi = std::max({phi[0], phi[1], phi[2]});
    if (lo > 0.0) continue;
    if (hi <= 0.0) {
      cls.tags[t] = ElementTag::solid;
      continue;
    }
    CutCell c = clip_triangle(mesh.triangle_vertices(t), phi, &ls);
    c.triangle = t;
    const int zeros = (phi[0] == 0.0) + (phi[1] == 0.0) + (phi[2] == 0.0);
    const bool edge_on_interface = lo == 0.0 && zeros == 2;
    const double solid_area = c.triangle_area - c.fluid_area;
    if (c.fluid_area < opts.tol_area * c.triangle_area) {
      cls.tags[t] = ElementTag::solid;
    } else if (solid_area < opts.tol_area * c.triangle_area && !edge_on_interface) {
      cls.tags[t] = ElementTag::fluid;
    } else {
      cls.tags[t] = ElementTag::cut;
      cls.cell_of_element[t] = static_cast<int>(cls.cells.size());
      cls.cells.push_back(std::move(c));
    }
  }
  return cls;
}

QuadratureRule fluid_quadrature(const Mesh& mesh, const CutClassification& cls, int t, int order) {
  switch (cls.tags[t]) {
    case ElementTag::fluid: {
      const auto v = mesh.triangle_vertices(t);
      return triangle_quadrature(v[0], v[1], v[2], order);
    }
    case ElementTag::cut:
      return polygon_quadrature(cls.cell(t)->fluid_polygon, order);
    case ElementTag::solid:
      break;
  }
  return {};
}

double total_fluid_area(const Mesh& mesh, const CutClassification& cls) {
  double a = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (cls.tags[t] == ElementTag::fluid) {
      const auto v = mesh.triangle_vertices(t);
      a += std::abs(signed_area(v[0], v[1], v[2]));
    } else if (cls.tags[t] == ElementTag::cut) {
      a += cls.cell(t)->fluid_area;
    }
  }
  return a;
}

double total_interface_length(const CutClassification& cls) {
  double l = 0.0;
  for (const auto& c : cls.cells) l += c.segment_length;
  return l;
}

}  // namespace cutfsi
