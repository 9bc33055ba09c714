#pragma once

#include <array>
#include <vector>

#include "cutfsi/cut.hpp"
#include "cutfsi/geometry.hpp"
#include "cutfsi/mesh.hpp"

namespace cutfsi {

enum class FESpaceKind { p2_vector, p1_scalar, p0_vector_on_cut };

/// Affine map of one triangle: barycentric coordinates and their gradients.
class TriangleMap {
 public:
  explicit TriangleMap(const std::array<Vec2, 3>& v);

  std::array<double, 3> barycentric(const Vec2& x) const;
  const std::array<Vec2, 3>& grad_barycentric() const { return grad_; }
  double area() const { return area_; }

 private:
  std::array<Vec2, 3> v_;
  std::array<Vec2, 3> grad_;
  double area_;
};

/// Values and gradients of the local Lagrange basis at one point. P2 local
/// order: vertices 0,1,2 then midpoints of edges 01, 12, 20.
struct P2Basis {
  std::array<double, 6> value;
  std::array<Vec2, 6> grad;
};
struct P1Basis {
  std::array<double, 3> value;
  std::array<Vec2, 3> grad;
};

P2Basis p2_basis(const TriangleMap& map, const Vec2& x);
P1Basis p1_basis(const TriangleMap& map, const Vec2& x);

/// Scalar shape values/gradients of `kind` on element `t` at `x`. Throws if
/// x lies outside the closed element. The P0 multiplier basis is the
/// constant 1 on a cut element.
struct BasisValues {
  std::vector<double> value;
  std::vector<Vec2> grad;
};
BasisValues basis_eval(FESpaceKind kind, const Mesh& mesh, int t, const Vec2& x);

/// Mesh-level P2 node numbering: vertices first, then one node per edge.
struct P2Layout {
  int num_vertices = 0;
  std::vector<Vec2> coords;
  std::vector<char> on_boundary;
  std::vector<std::array<int, 6>> element_nodes;

  int num_nodes() const { return static_cast<int>(coords.size()); }
};

P2Layout build_p2_layout(const Mesh& mesh);

enum class DofStatus : unsigned char { active, virtual_dof, eliminated };

/// Active/virtual/eliminated partition of the three spaces for one
/// geometry, and the packing of active dofs into one unknown vector
/// [U (2 per velocity node) | P | Lambda (2 per cut element) | mean-pressure aux].
struct DofMap {
  std::vector<DofStatus> velocity_status;  // per P2 node
  std::vector<DofStatus> pressure_status;  // per vertex
  std::vector<int> velocity_index;         // P2 node -> active slot or -1
  std::vector<int> pressure_index;         // vertex -> active slot or -1
  std::vector<int> velocity_node;          // active slot -> P2 node
  std::vector<int> pressure_node;          // active slot -> vertex
  std::vector<char> velocity_dirichlet;    // per active velocity slot
  int num_multipliers = 0;                 // cut elements

  int num_velocity_nodes() const { return static_cast<int>(velocity_node.size()); }
  int num_pressure() const { return static_cast<int>(pressure_node.size()); }
  int velocity_size() const { return 2 * num_velocity_nodes(); }
  int multiplier_size() const { return 2 * num_multipliers; }

  int u_offset() const { return 0; }
  int p_offset() const { return velocity_size(); }
  int lambda_offset() const { return p_offset() + num_pressure(); }
  int aux_offset() const { return lambda_offset() + multiplier_size(); }
  int size() const { return aux_offset() + 1; }

  int u_dof(int p2_node, int comp) const {
    const int s = velocity_index[p2_node];
    return s < 0 ? -1 : 2 * s + comp;
  }
  int p_dof(int vertex) const { return pressure_index[vertex]; }
  int count(DofStatus s, FESpaceKind kind) const;
};

DofMap build_dof_maps(const Mesh& mesh, const P2Layout& layout, const CutClassification& cls, const LevelSet& ls);

}  // namespace cutfsi
