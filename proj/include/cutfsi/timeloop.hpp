#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cutfsi/assembly.hpp"
#include "cutfsi/config.hpp"
#include "cutfsi/rigid.hpp"
#include "cutfsi/solver.hpp"

namespace cutfsi {

/// Geometry-dependent artifacts for one position of the solid.
struct GeometryState {
  LevelSet ls;
  CutClassification cls;
  DofMap dofs;
};

GeometryState build_geometry(const Mesh& mesh, const P2Layout& layout, const RigidShape& shape,
                             const RigidState& rigid, const CutOptions& opts = {});

/// Scatter/gather between global nodal arrays and the packed unknown vector.
/// Global arrays: U has 2 entries per P2 node, P one per vertex, lambda two
/// per cut cell of `dofs`.
Vector pack_unknowns(const DofMap& dofs, const Vector& U, const Vector& P, const Vector& lambda, double aux = 0.0);
void unpack_unknowns(const DofMap& dofs, const Vector& x, Vector& U, Vector& P, Vector& lambda);

/// Residual/Jacobian of the discrete fluid equations on a fixed geometry:
///   s M (U - U_old) + A_uu U + N(U)U + A_up P + A_ul L = F
///   A_up^T U + A_pp P + A_pl L + c_p a               = 0
///   A_ul^T U + A_pl^T P + A_ll L                       = G
///   c_p^T P                                            = 0
/// Dirichlet velocity slots are held at their prescribed values.
class FluidProblem {
 public:
  struct Setup {
    FluidParams params;
    double gamma = 0.0;
    AssemblyOptions opts;
    VectorField body_force;
    VectorField u_gamma;
    VectorField dirichlet;  // null means homogeneous
    double mass_scale = 0.0;  // 1/dt, or 0 for a steady problem
    bool convection = true;
  };

  FluidProblem(const Discretization& d, Setup setup, const Vector& U_old_slots, ElementCache* cache = nullptr);

  int size() const { return static_cast<int>(K_.rows()); }
  const SaddleSystem& system() const { return sys_; }
  const SparseMatrix& linear_operator() const { return K_; }

  void evaluate(const Vector& x, Vector& r, SparseMatrix* J) const;
  /// Residual without the Dirichlet row/column elimination.
  Vector raw_residual(const Vector& x) const;
  SparseMatrix raw_jacobian(const Vector& x) const;

  /// Overwrite the Dirichlet slots of x with their prescribed values.
  void impose_dirichlet(Vector& x) const;
  NonlinearSystem as_system() const;
  std::string describe_dof(long k) const;

 private:
  const Discretization& d_;
  Setup setup_;
  SaddleSystem sys_;
  SparseMatrix K_;
  Vector rhs_;
  std::vector<char> fixed_;
  Vector fixed_values_;
};

struct SimRecord {
  double t = 0.0, dt = 0.0;
  double hx = 0.0, hy = 0.0, vx = 0.0, vy = 0.0;
  double theta = 0.0, omega = 0.0;
  double Fx = 0.0, Fy = 0.0, T = 0.0;
  int newton_iters = 0;
  int n_cut = 0;
};

/// State carried between time levels.
struct SimState {
  double t = 0.0;
  double dt = 0.0;       // step used to reach t
  double dt_next = 0.0;  // step for the next advance
  RigidState rigid;
  Vector U;       // 2 per P2 node, extended to the whole domain
  Vector P;       // per vertex (meaningful on active vertices)
  Vector lambda;  // 2 per cut cell of `geo`
  std::shared_ptr<const GeometryState> geo;
  Vec2 force = Vec2::Zero();
  double torque = 0.0;
  int newton_iters = 0;
};

/// Set every velocity node inside the solid (phi <= 0) to the rigid motion.
void extend_velocity(const P2Layout& layout, const LevelSet& ls, const RigidState& rigid, Vector& U);

/// CFL rule dt = min(0.9 h / v_m, 2 h^2 / nu), v_m the largest rigid speed
/// over interface quadrature points and the centre.
double adapt_dt(const CutClassification& cls, const RigidState& rigid, double h, double nu, double dt_min,
                int segment_points = 3);

class Simulation {
 public:
  explicit Simulation(SimConfig cfg);

  const SimConfig& config() const { return cfg_; }
  const Mesh& mesh() const { return mesh_; }
  const P2Layout& layout() const { return layout_; }
  const SimState& state() const { return state_; }
  const RigidInertia& inertia() const { return inertia_; }
  double h() const { return h_; }
  double gamma() const { return gamma_; }

  /// Initial geometry plus one fluid solve at rest to obtain Lambda^0.
  void initialize();
  /// One time step (six sub-steps) followed by the dt update.
  void step();
  SimRecord record() const;
  /// Run to t_final; `on_step` is called after every record.
  std::vector<SimRecord> run(const std::function<void(const Simulation&, const SimRecord&)>& on_step = {});

 private:
  int fluid_solve(const GeometryState& geo, const RigidState& rigid, double dt);
  RigidInertia current_inertia(const GeometryState& geo) const;

  SimConfig cfg_;
  Mesh mesh_;
  P2Layout layout_;
  RigidShape shape_;
  RigidInertia inertia_;
  FluidParams params_;
  double h_ = 0.0;
  double gamma_ = 0.0;
  SimState state_;
  ElementCache cache_;
  bool initialized_ = false;
};

}  // namespace cutfsi
