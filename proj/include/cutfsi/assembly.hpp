#pragma once

#include <functional>
#include <unordered_map>
#include <vector>

#include "cutfsi/cut.hpp"
#include "cutfsi/fe.hpp"
#include "cutfsi/geometry.hpp"
#include "cutfsi/mesh.hpp"

namespace cutfsi {

/// Fluid properties in the 2D unit system (g/cm^2, g/(cm s), cm/s^2).
struct FluidParams {
  double rho_f = 1.0;
  double nu = 0.1;
  Vec2 gravity{0.0, -981.0};
};

struct AssemblyOptions {
  int volume_order = 4;      // mass, viscous and divergence terms
  int convection_order = 5;  // (u.grad)u . v is degree 5 for P2
  int load_order = 5;
  int segment_points = 3;
  /// Reuse element matrices of uncut fluid elements across geometries.
  bool local_reassembly = false;
  /// Limit gamma on each cut element to |F_T| / (24 nu |Gamma_T|) so the
  /// stabilized viscous block stays coercive on elements with a small fluid
  /// part.
  bool gamma_cap = true;
};

using VectorField = std::function<Vec2(const Vec2&)>;

/// Everything the assembly routines need to know about the current geometry.
struct Discretization {
  const Mesh& mesh;
  const P2Layout& layout;
  const CutClassification& cls;
  const DofMap& dofs;
};

/// Block saddle-point operator over active dofs. Row/column spaces:
/// u = velocity slots (2 per active P2 node), p = active vertices,
/// l = multipliers (2 per cut element).
struct SaddleSystem {
  SparseMatrix M_uu;  // u x u
  SparseMatrix A_uu;  // u x u
  SparseMatrix A_up;  // u x p
  SparseMatrix A_ul;  // u x l
  SparseMatrix A_pp;  // p x p
  SparseMatrix A_pl;  // p x l
  SparseMatrix A_ll;  // l x l
  Vector c_p;         // mean-pressure row
  Vector F;           // volume loads on u
  Vector G;           // interface data on l
  double gamma = 0.0;

  static SaddleSystem zeros(const DofMap& dofs);
};

/// Cache of uncut element matrices used by the local reassembly path.
class ElementCache {
 public:
  struct Entry {
    Eigen::Matrix<double, 12, 12> mass;
    Eigen::Matrix<double, 12, 12> viscous;
    Eigen::Matrix<double, 12, 3> divergence;
  };
  const Entry* find(int t) const;
  void store(int t, Entry e);
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<int, Entry> entries_;
};

/// rho_f-weighted mass, 2 nu D(u):D(v) and -p div v over the fluid region.
void assemble_volume(const Discretization& d, const FluidParams& params, const AssemblyOptions& opts,
                     SaddleSystem& sys, ElementCache* cache = nullptr);

/// Multiplier coupling -int_G lambda.v plus the gamma-weighted stabilization
/// terms, added to A_uu, A_up, A_ul, A_pp, A_pl, A_ll.
/// Stabilization weight used on one cut element.
double local_gamma(double gamma, const CutCell& cell, double nu, const AssemblyOptions& opts = {});

void assemble_interface_stab(const Discretization& d, const FluidParams& params, double gamma,
                             const AssemblyOptions& opts, SaddleSystem& sys);

struct ConvectionTerms {
  Vector residual;       // int rho_f ((u.grad)u).v
  SparseMatrix jacobian;  // d residual / dU
};

/// `U` holds all active velocity slots (Dirichlet slots included).
ConvectionTerms assemble_convection(const Discretization& d, const FluidParams& params, const Vector& U,
                                    const AssemblyOptions& opts, bool with_jacobian = true);

/// F = int body_force . v over the fluid; G_mu = -int_G mu . u_gamma.
void assemble_loads(const Discretization& d, const VectorField& body_force, const VectorField& u_gamma,
                    const AssemblyOptions& opts, SaddleSystem& sys);

/// c_p . P = int_F p.
Vector assemble_pressure_mean_constraint(const Discretization& d, const AssemblyOptions& opts);

/// Linear maps from the multiplier block to the hydrodynamic force
/// -int_G lambda and torque -int_G (x-h)^perp . lambda.
struct ForceFunctionals {
  Eigen::Matrix<double, 2, Eigen::Dynamic> force;
  Eigen::RowVectorXd torque;

  Vec2 apply_force(const Vector& lambda) const { return force * lambda; }
  double apply_torque(const Vector& lambda) const { return torque.dot(lambda); }
};
ForceFunctionals assemble_force_functionals(const CutClassification& cls, const Vec2& center);

/// Full saddle system for one geometry (volume + interface + loads + mean row).
SaddleSystem assemble_saddle_system(const Discretization& d, const FluidParams& params, double gamma,
                                    const VectorField& body_force, const VectorField& u_gamma,
                                    const AssemblyOptions& opts, ElementCache* cache = nullptr);

/// Bordered global matrix
///   [ s M + A_uu   A_up    A_ul   0  ]
///   [ A_up^T       A_pp    A_pl   c_p]
///   [ A_ul^T       A_pl^T  A_ll   0  ]
///   [ 0            c_p^T   0      0  ]
/// in the unknown ordering of DofMap.
SparseMatrix global_operator(const SaddleSystem& sys, double mass_scale);

/// Multiplier 2-vector of cut cell `cut_index`.
Vec2 multiplier_value(const Vector& lambda_block, int cut_index);

}  // namespace cutfsi
