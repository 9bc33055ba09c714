#pragma once

#include <array>
#include <vector>

#include "cutfsi/geometry.hpp"
#include "cutfsi/mesh.hpp"
#include "cutfsi/quadrature.hpp"

namespace cutfsi {

enum class ElementTag : unsigned char { fluid, solid, cut };

/// Fluid side of one triangle crossed by the zero set of the P1 interpolant
/// of the level set.
struct CutCell {
  int triangle = -1;
  std::vector<Vec2> fluid_polygon;  // 3 or 4 vertices, counterclockwise
  std::array<Vec2, 2> segment;
  Vec2 normal = Vec2::Zero();  // fluid-outward, towards decreasing phi
  double fluid_area = 0.0;
  double segment_length = 0.0;
  double triangle_area = 0.0;

  Vec2 segment_midpoint() const { return 0.5 * (segment[0] + segment[1]); }
};

struct CutOptions {
  double tol_cut = -1.0;  // absolute; negative means 1e-6 * h
  double tol_area = 1e-8;  // relative to the triangle area
};

struct CutClassification {
  std::vector<ElementTag> tags;
  std::vector<CutCell> cells;       // ordered by triangle index
  std::vector<int> cell_of_element;  // -1 unless tagged cut

  int num_cut() const { return static_cast<int>(cells.size()); }
  const CutCell* cell(int t) const { return cell_of_element[t] < 0 ? nullptr : &cells[cell_of_element[t]]; }
};

/// Clip a triangle by the zero set of the linear interpolant of `phi`.
/// Requires at least one strictly positive and one non-positive value.
CutCell clip_triangle(const std::array<Vec2, 3>& vertices, const std::array<double, 3>& phi);

/// Same, but each crossing on a sign-changing edge is moved onto the zero
/// set of `exact` along that edge, so the segment is a chord of the
/// interface and the normal is perpendicular to it.
CutCell clip_triangle(const std::array<Vec2, 3>& vertices, const std::array<double, 3>& phi, const LevelSet* exact);

/// Classify every triangle against the level set and clip the cut ones,
/// with crossings placed on the exact interface.
/// Vertex values within tol_cut of zero are snapped onto the interface.
/// Cut triangles with a negligible fluid (resp. solid) part are
/// reclassified solid (resp. fluid), except that a triangle with one edge on
/// the interface and the third vertex in the fluid stays cut: its cell is the
/// whole triangle and its segment is that edge.
CutClassification classify_elements(const Mesh& mesh, const LevelSet& ls, CutOptions opts = {});

/// Quadrature rule covering the fluid part of a non-solid element.
QuadratureRule fluid_quadrature(const Mesh& mesh, const CutClassification& cls, int t, int order);

/// Total fluid area and interface length of a classification.
double total_fluid_area(const Mesh& mesh, const CutClassification& cls);
double total_interface_length(const CutClassification& cls);

}  // namespace cutfsi
