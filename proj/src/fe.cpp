#include "cutfsi/fe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

namespace cutfsi {

TriangleMap::TriangleMap(const std::array<Vec2, 3>& v) : v_(v) {
  const double two_a = cross(v[1] - v[0], v[2] - v[0]);
  if (two_a == 0.0) throw std::invalid_argument("TriangleMap: degenerate triangle");
  area_ = 0.5 * std::abs(two_a);
  // grad lambda_i = perp(opposite edge, counterclockwise) / (2A)
  grad_[0] = perp(v[2] - v[1]) / two_a;
  grad_[1] = perp(v[0] - v[2]) / two_a;
  grad_[2] = perp(v[1] - v[0]) / two_a;
}

std::array<double, 3> TriangleMap::barycentric(const Vec2& x) const {
  const double l1 = grad_[1].dot(x - v_[0]);
  const double l2 = grad_[2].dot(x - v_[0]);
  return {1.0 - l1 - l2, l1, l2};
}

P2Basis p2_basis(const TriangleMap& map, const Vec2& x) {
  const auto l = map.barycentric(x);
  const auto& g = map.grad_barycentric();
  P2Basis b;
  for (int i = 0; i < 3; ++i) {
    b.value[i] = l[i] * (2.0 * l[i] - 1.0);
    b.grad[i] = (4.0 * l[i] - 1.0) * g[i];
  }
  static constexpr int ei[3] = {0, 1, 2};
  static constexpr int ej[3] = {1, 2, 0};
  for (int e = 0; e < 3; ++e) {
    const int i = ei[e], j = ej[e];
    b.value[3 + e] = 4.0 * l[i] * l[j];
    b.grad[3 + e] = 4.0 * (l[i] * g[j] + l[j] * g[i]);
  }
  return b;
}

P1Basis p1_basis(const TriangleMap& map, const Vec2& x) {
  const auto l = map.barycentric(x);
  P1Basis b;
  for (int i = 0; i < 3; ++i) {
    b.value[i] = l[i];
    b.grad[i] = map.grad_barycentric()[i];
  }
  return b;
}

BasisValues basis_eval(FESpaceKind kind, const Mesh& mesh, int t, const Vec2& x) {
  const TriangleMap map(mesh.triangle_vertices(t));
  const auto l = map.barycentric(x);
  constexpr double tol = 1e-10;
  if (l[0] < -tol || l[1] < -tol || l[2] < -tol) {
    throw std::out_of_range("basis_eval: point outside element " + std::to_string(t));
  }
  BasisValues out;
  switch (kind) {
    case FESpaceKind::p2_vector: {
      const auto b = p2_basis(map, x);
      out.value.assign(b.value.begin(), b.value.end());
      out.grad.assign(b.grad.begin(), b.grad.end());
      break;
    }
    case FESpaceKind::p1_scalar: {
      const auto b = p1_basis(map, x);
      out.value.assign(b.value.begin(), b.value.end());
      out.grad.assign(b.grad.begin(), b.grad.end());
      break;
    }
    case FESpaceKind::p0_vector_on_cut:
      out.value = {1.0};
      out.grad = {Vec2::Zero()};
      break;
  }
  return out;
}

P2Layout build_p2_layout(const Mesh& mesh) {
  P2Layout L;
  L.num_vertices = mesh.num_nodes();
  L.coords = mesh.nodes;
  L.on_boundary = mesh.on_boundary;
  std::map<std::pair<int, int>, int> edge_node;
  L.element_nodes.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    auto& en = L.element_nodes[t];
    en[0] = tri[0];
    en[1] = tri[1];
    en[2] = tri[2];
    for (int e = 0; e < 3; ++e) {
      const int a = tri[e], b = tri[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_node.try_emplace({key.first, key.second}, L.num_nodes());
      if (inserted) {
        const Vec2 mid = 0.5 * (mesh.nodes[a] + mesh.nodes[b]);
        const auto& r = mesh.domain;
        L.coords.push_back(mid);
        L.on_boundary.push_back(mesh.on_boundary[a] && mesh.on_boundary[b] &&
                                (mid.x() == r.x0 || mid.x() == r.x1 || mid.y() == r.y0 || mid.y() == r.y1));
      }
      en[3 + e] = it->second;
    }
  }
  return L;
}

int DofMap::count(DofStatus s, FESpaceKind kind) const {
  const auto& v = kind == FESpaceKind::p1_scalar ? pressure_status : velocity_status;
  if (kind == FESpaceKind::p0_vector_on_cut) return s == DofStatus::active ? num_multipliers : 0;
  if (s == DofStatus::active) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [](DofStatus x) { return x != DofStatus::eliminated; }));
  }
  return static_cast<int>(std::count(v.begin(), v.end(), s));
}

DofMap build_dof_maps(const Mesh& mesh, const P2Layout& layout, const CutClassification& cls, const LevelSet& ls) {
  DofMap d;
  const int nv = mesh.num_nodes();
  const int n2 = layout.num_nodes();
  std::vector<char> vel_active(n2, 0), vel_touch_cut(n2, 0);
  std::vector<char> p_active(nv, 0), p_touch_cut(nv, 0);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    if (cls.tags[t] == ElementTag::solid) continue;
    const bool is_cut = cls.tags[t] == ElementTag::cut;
    for (int k = 0; k < 6; ++k) {
      const int n = layout.element_nodes[t][k];
      vel_active[n] = 1;
      if (is_cut) vel_touch_cut[n] = 1;
    }
    for (int k = 0; k < 3; ++k) {
      const int n = mesh.triangles[t][k];
      p_active[n] = 1;
      if (is_cut) p_touch_cut[n] = 1;
    }
  }

  d.velocity_status.assign(n2, DofStatus::eliminated);
  d.velocity_index.assign(n2, -1);
  for (int n = 0; n < n2; ++n) {
    if (!vel_active[n]) continue;
    const bool in_solid = ls(layout.coords[n]) <= 0.0;
    d.velocity_status[n] = (in_solid && vel_touch_cut[n]) ? DofStatus::virtual_dof : DofStatus::active;
    d.velocity_index[n] = static_cast<int>(d.velocity_node.size());
    d.velocity_node.push_back(n);
    d.velocity_dirichlet.push_back(layout.on_boundary[n]);
  }

  d.pressure_status.assign(nv, DofStatus::eliminated);
  d.pressure_index.assign(nv, -1);
  for (int n = 0; n < nv; ++n) {
    if (!p_active[n]) continue;
    const bool in_solid = ls(mesh.nodes[n]) <= 0.0;
    d.pressure_status[n] = (in_solid && p_touch_cut[n]) ? DofStatus::virtual_dof : DofStatus::active;
    d.pressure_index[n] = static_cast<int>(d.pressure_node.size());
    d.pressure_node.push_back(n);
  }
  d.num_multipliers = cls.num_cut();
  return d;
}

}  // namespace cutfsi
