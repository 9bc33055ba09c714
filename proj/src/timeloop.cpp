#include "cutfsi/timeloop.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cutfsi {

GeometryState build_geometry(const Mesh& mesh, const P2Layout& layout, const RigidShape& shape,
                             const RigidState& rigid, const CutOptions& opts) {
  LevelSet ls(shape, rigid);
  CutClassification cls = classify_elements(mesh, ls, opts);
  DofMap dofs = build_dof_maps(mesh, layout, cls, ls);
  return {std::move(ls), std::move(cls), std::move(dofs)};
}

Vector pack_unknowns(const DofMap& dofs, const Vector& U, const Vector& P, const Vector& lambda, double aux) {
  Vector x = Vector::Zero(dofs.size());
  for (int s = 0; s < dofs.num_velocity_nodes(); ++s) {
    const int n = dofs.velocity_node[s];
    x[2 * s] = U[2 * n];
    x[2 * s + 1] = U[2 * n + 1];
  }
  for (int s = 0; s < dofs.num_pressure(); ++s) x[dofs.p_offset() + s] = P[dofs.pressure_node[s]];
  if (lambda.size() == dofs.multiplier_size()) x.segment(dofs.lambda_offset(), dofs.multiplier_size()) = lambda;
  x[dofs.aux_offset()] = aux;
  return x;
}

void unpack_unknowns(const DofMap& dofs, const Vector& x, Vector& U, Vector& P, Vector& lambda) {
  for (int s = 0; s < dofs.num_velocity_nodes(); ++s) {
    const int n = dofs.velocity_node[s];
    U[2 * n] = x[2 * s];
    U[2 * n + 1] = x[2 * s + 1];
  }
  for (int s = 0; s < dofs.num_pressure(); ++s) P[dofs.pressure_node[s]] = x[dofs.p_offset() + s];
  lambda = x.segment(dofs.lambda_offset(), dofs.multiplier_size());
}

FluidProblem::FluidProblem(const Discretization& d, Setup setup, const Vector& U_old_slots, ElementCache* cache)
    : d_(d), setup_(std::move(setup)) {
  sys_ = assemble_saddle_system(d_, setup_.params, setup_.gamma, setup_.body_force, setup_.u_gamma, setup_.opts,
                                cache);
  K_ = global_operator(sys_, setup_.mass_scale);
  const int n = static_cast<int>(K_.rows());
  const int nu = d_.dofs.velocity_size();
  rhs_ = Vector::Zero(n);
  rhs_.head(nu) = sys_.F;
  if (setup_.mass_scale != 0.0) {
    if (U_old_slots.size() != nu) throw std::invalid_argument("FluidProblem: U_old has the wrong size");
    rhs_.head(nu) += setup_.mass_scale * (sys_.M_uu * U_old_slots);
  }
  rhs_.segment(d_.dofs.lambda_offset(), d_.dofs.multiplier_size()) = sys_.G;

  fixed_.assign(n, 0);
  fixed_values_ = Vector::Zero(n);
  for (int s = 0; s < d_.dofs.num_velocity_nodes(); ++s) {
    if (!d_.dofs.velocity_dirichlet[s]) continue;
    fixed_[2 * s] = fixed_[2 * s + 1] = 1;
    if (setup_.dirichlet) {
      const Vec2 g = setup_.dirichlet(d_.layout.coords[d_.dofs.velocity_node[s]]);
      fixed_values_[2 * s] = g[0];
      fixed_values_[2 * s + 1] = g[1];
    }
  }
}

void FluidProblem::impose_dirichlet(Vector& x) const {
  for (int k = 0; k < static_cast<int>(fixed_.size()); ++k) {
    if (fixed_[k]) x[k] = fixed_values_[k];
  }
}

Vector FluidProblem::raw_residual(const Vector& x) const {
  Vector r = K_ * x - rhs_;
  if (setup_.convection) {
    const int nu = d_.dofs.velocity_size();
    const ConvectionTerms c = assemble_convection(d_, setup_.params, x.head(nu), setup_.opts, false);
    r.head(nu) += c.residual;
  }
  return r;
}

SparseMatrix FluidProblem::raw_jacobian(const Vector& x) const {
  SparseMatrix J = K_;
  if (setup_.convection) {
    const int nu = d_.dofs.velocity_size();
    const ConvectionTerms c = assemble_convection(d_, setup_.params, x.head(nu), setup_.opts, true);
    for (int k = 0; k < c.jacobian.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(c.jacobian, k); it; ++it) J.coeffRef(it.row(), it.col()) += it.value();
    }
  }
  return J;
}

void FluidProblem::evaluate(const Vector& x, Vector& r, SparseMatrix* J) const {
  const int nu = d_.dofs.velocity_size();
  r = K_ * x - rhs_;
  ConvectionTerms c;
  if (setup_.convection) {
    c = assemble_convection(d_, setup_.params, x.head(nu), setup_.opts, J != nullptr);
    r.head(nu) += c.residual;
  }
  for (int k = 0; k < static_cast<int>(fixed_.size()); ++k) {
    if (fixed_[k]) r[k] = x[k] - fixed_values_[k];
  }
  if (!J) return;
  *J = K_;
  if (setup_.convection) {
    for (int k = 0; k < c.jacobian.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(c.jacobian, k); it; ++it) J->coeffRef(it.row(), it.col()) += it.value();
    }
  }
  // Dirichlet rows/columns become identity; pattern is kept for reuse.
  for (int k = 0; k < J->outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(*J, k); it; ++it) {
      if (fixed_[it.row()] || fixed_[it.col()]) it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
    }
  }
}

NonlinearSystem FluidProblem::as_system() const {
  NonlinearSystem s;
  s.evaluate = [this](const Vector& x, Vector& r, SparseMatrix* J) { evaluate(x, r, J); };
  s.describe_dof = [this](long k) { return describe_dof(k); };
  return s;
}

std::string FluidProblem::describe_dof(long k) const {
  const DofMap& dofs = d_.dofs;
  std::ostringstream os;
  if (k < dofs.p_offset()) {
    const int n = dofs.velocity_node[k / 2];
    const Vec2& x = d_.layout.coords[n];
    os << "velocity node " << n << " component " << (k % 2) << " at (" << x.x() << ", " << x.y() << ")";
  } else if (k < dofs.lambda_offset()) {
    const int n = dofs.pressure_node[k - dofs.p_offset()];
    const Vec2& x = d_.mesh.nodes[n];
    os << "pressure vertex " << n << " at (" << x.x() << ", " << x.y() << ")";
  } else if (k < dofs.aux_offset()) {
    const int c = static_cast<int>(k - dofs.lambda_offset()) / 2;
    os << "multiplier of cut element " << d_.cls.cells[c].triangle << " component " << ((k - dofs.lambda_offset()) % 2);
  } else {
    os << "mean-pressure constraint";
  }
  return os.str();
}

void extend_velocity(const P2Layout& layout, const LevelSet& ls, const RigidState& rigid, Vector& U) {
  for (int n = 0; n < layout.num_nodes(); ++n) {
    const Vec2& x = layout.coords[n];
    if (ls(x) > 0.0) continue;
    const Vec2 v = rigid_velocity_at(x, rigid);
    U[2 * n] = v[0];
    U[2 * n + 1] = v[1];
  }
}

double adapt_dt(const CutClassification& cls, const RigidState& rigid, double h, double nu, double dt_min,
                int segment_points) {
  double vm = rigid.h_dot.norm();
  for (const auto& c : cls.cells) {
    const QuadratureRule q = segment_quadrature(c.segment[0], c.segment[1], segment_points);
    for (const auto& p : q.points) vm = std::max(vm, rigid_velocity_at(p, rigid).norm());
  }
  const double diffusive = 2.0 * h * h / nu;
  const double dt = vm > 0.0 ? std::min(0.9 * h / vm, diffusive) : diffusive;
  return std::max(dt, dt_min);
}

Simulation::Simulation(SimConfig cfg) : cfg_(std::move(cfg)) {
  validate_config(cfg_);
  mesh_ = build_structured_mesh(cfg_.nx, cfg_.ny, cfg_.domain);
  layout_ = build_p2_layout(mesh_);
  shape_.radius = cfg_.radius;
  inertia_ = disk_inertia(cfg_.rho_s, cfg_.radius);
  params_.rho_f = cfg_.rho_f;
  params_.nu = cfg_.nu;
  params_.gravity = Vec2(0.0, -cfg_.g);
  h_ = mesh_size_h(mesh_);
  gamma_ = cfg_.gamma0 * h_;
}

RigidInertia Simulation::current_inertia(const GeometryState& geo) const {
  if (cfg_.mass_model == MassModel::exact) return inertia_;
  // Mass and inertia of the region enclosed by the reconstructed interface.
  const Vec2 c = geo.ls.center();
  double area = 0.0, second = 0.0;
  auto moment = [&c](const QuadratureRule& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.size(); ++i) s += q.weights[i] * (q.points[i] - c).squaredNorm();
    return s;
  };
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    const ElementTag tag = geo.cls.tags[t];
    if (tag == ElementTag::fluid) continue;
    const auto v = mesh_.triangle_vertices(t);
    const QuadratureRule full = triangle_quadrature(v[0], v[1], v[2], 2);
    if (tag == ElementTag::solid) {
      area += full.measure();
      second += moment(full);
    } else {
      const CutCell& cell = *geo.cls.cell(t);
      const QuadratureRule fluid = polygon_quadrature(cell.fluid_polygon, 2);
      area += cell.triangle_area - cell.fluid_area;
      second += moment(full) - moment(fluid);
    }
  }
  RigidInertia in;
  in.rho_s = cfg_.rho_s;
  in.mass = cfg_.rho_s * area;
  in.inertia = cfg_.rho_s * second;
  return in;
}

int Simulation::fluid_solve(const GeometryState& geo, const RigidState& rigid, double dt) {
  const Discretization d{mesh_, layout_, geo.cls, geo.dofs};
  FluidProblem::Setup setup;
  setup.params = params_;
  setup.gamma = gamma_;
  setup.opts.local_reassembly = cfg_.local_reassembly;
  setup.opts.gamma_cap = cfg_.gamma_cap;
  const Vec2 body = params_.rho_f * params_.gravity;
  setup.body_force = [body](const Vec2&) { return body; };
  setup.u_gamma = [rigid](const Vec2& x) { return rigid_velocity_at(x, rigid); };
  setup.mass_scale = 1.0 / dt;
  setup.convection = cfg_.convection;

  Vector U_old(geo.dofs.velocity_size());
  for (int s = 0; s < geo.dofs.num_velocity_nodes(); ++s) {
    const int n = geo.dofs.velocity_node[s];
    U_old[2 * s] = state_.U[2 * n];
    U_old[2 * s + 1] = state_.U[2 * n + 1];
  }
  FluidProblem problem(d, std::move(setup), U_old, cfg_.local_reassembly ? &cache_ : nullptr);

  // Multiplier guess: previous value on elements that stay cut.
  Vector lambda0 = Vector::Zero(geo.dofs.multiplier_size());
  if (state_.geo) {
    for (int ic = 0; ic < geo.cls.num_cut(); ++ic) {
      const int old = state_.geo->cls.cell_of_element[geo.cls.cells[ic].triangle];
      if (old >= 0 && 2 * old + 1 < state_.lambda.size()) lambda0.segment<2>(2 * ic) = state_.lambda.segment<2>(2 * old);
    }
  }
  Vector x0 = pack_unknowns(geo.dofs, state_.U, state_.P, lambda0);
  problem.impose_dirichlet(x0);
  const NewtonResult res = newton_solve(problem.as_system(), std::move(x0), cfg_.newton);
  unpack_unknowns(geo.dofs, res.x, state_.U, state_.P, state_.lambda);
  return res.iterations;
}

void Simulation::initialize() {
  state_ = SimState{};
  state_.rigid.h = Vec2(cfg_.center_x, cfg_.center_y);
  state_.rigid.theta = cfg_.theta0;
  startup_history(state_.rigid, cfg_.dt_init);
  state_.U = Vector::Zero(2 * layout_.num_nodes());
  state_.P = Vector::Zero(mesh_.num_nodes());
  auto geo = std::make_shared<GeometryState>(build_geometry(mesh_, layout_, shape_, state_.rigid));
  extend_velocity(layout_, geo->ls, state_.rigid, state_.U);
  state_.newton_iters = fluid_solve(*geo, state_.rigid, cfg_.dt_init);
  extend_velocity(layout_, geo->ls, state_.rigid, state_.U);
  const ForceFunctionals ff = assemble_force_functionals(geo->cls, state_.rigid.h);
  state_.force = ff.apply_force(state_.lambda);
  state_.torque = ff.apply_torque(state_.lambda);
  state_.geo = std::move(geo);
  state_.t = 0.0;
  state_.dt = cfg_.dt_init;
  state_.dt_next = cfg_.dt_init;
  initialized_ = true;
}

void Simulation::step() {
  if (!initialized_) initialize();
  const double dt = state_.dt_next;
  RigidState& rigid = state_.rigid;
  const RigidInertia inertia = current_inertia(*state_.geo);

  // 1-2: structure velocity and position from Lambda^n.
  const Vec2 h_dot_old = rigid.h_dot;
  const double theta_dot_old = rigid.theta_dot;
  advance_velocity(rigid, inertia, state_.force, state_.torque, params_.gravity, dt);
  advance_position(rigid, inertia, state_.force, state_.torque, params_.gravity, dt, cfg_.position_update, h_dot_old,
                   theta_dot_old);
  const Rect& r = cfg_.domain;
  const double R = cfg_.radius;
  if (!rigid.h.allFinite() || rigid.h.x() - R <= r.x0 || rigid.h.x() + R >= r.x1 || rigid.h.y() - R <= r.y0 ||
      rigid.h.y() + R >= r.y1) {
    std::ostringstream os;
    os << "solid left the domain at t=" << state_.t + dt << " (centre " << rigid.h.x() << ", " << rigid.h.y() << ")";
    throw std::runtime_error(os.str());
  }

  // 3: geometry at t^{n+1}.
  auto geo = std::make_shared<GeometryState>(build_geometry(mesh_, layout_, shape_, rigid));
  // 4: extension of U^n; the interface data is built inside the fluid solve.
  extend_velocity(layout_, geo->ls, rigid, state_.U);
  // 5: Newton solve on F(t^{n+1}).
  state_.newton_iters = fluid_solve(*geo, rigid, dt);
  // 6: extension of U^{n+1}.
  extend_velocity(layout_, geo->ls, rigid, state_.U);

  const ForceFunctionals ff = assemble_force_functionals(geo->cls, rigid.h);
  state_.force = ff.apply_force(state_.lambda);
  state_.torque = ff.apply_torque(state_.lambda);
  state_.geo = std::move(geo);
  state_.t += dt;
  state_.dt = dt;
  double next = adapt_dt(state_.geo->cls, rigid, h_, cfg_.nu, cfg_.dt_min);
  if (cfg_.dt_max > 0.0) next = std::min(next, cfg_.dt_max);
  if (cfg_.dt_growth > 0.0) next = std::min(next, cfg_.dt_growth * dt);
  state_.dt_next = std::max(next, cfg_.dt_min);
}

SimRecord Simulation::record() const {
  SimRecord rec;
  rec.t = state_.t;
  rec.dt = state_.dt;
  rec.hx = state_.rigid.h.x();
  rec.hy = state_.rigid.h.y();
  rec.vx = state_.rigid.h_dot.x();
  rec.vy = state_.rigid.h_dot.y();
  rec.theta = state_.rigid.theta;
  rec.omega = state_.rigid.theta_dot;
  rec.Fx = state_.force.x();
  rec.Fy = state_.force.y();
  rec.T = state_.torque;
  rec.newton_iters = state_.newton_iters;
  rec.n_cut = state_.geo ? state_.geo->cls.num_cut() : 0;
  return rec;
}

std::vector<SimRecord> Simulation::run(const std::function<void(const Simulation&, const SimRecord&)>& on_step) {
  if (!initialized_) initialize();
  std::vector<SimRecord> records;
  records.push_back(record());
  if (on_step) on_step(*this, records.back());
  while (state_.t < cfg_.t_final - 1e-12) {
    step();
    records.push_back(record());
    if (on_step) on_step(*this, records.back());
  }
  return records;
}

}  // namespace cutfsi
