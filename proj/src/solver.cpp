#include "cutfsi/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <sstream>

#ifdef CUTFSI_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

namespace cutfsi {

namespace {

// Locate the first structurally or numerically zero pivot with SparseLU,
// which reports the offending column.
long find_zero_pivot(const SparseMatrix& J) {
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(J);
  lu.factorize(J);
  if (lu.info() == Eigen::Success) return -1;
  const std::string msg = lu.lastErrorMessage();
  const auto pos = msg.find_last_of(' ');
  long col = -1;
  if (pos != std::string::npos) {
    try {
      col = std::stol(msg.substr(pos + 1));
    } catch (const std::exception&) {
      col = -1;
    }
  }
  if (col >= 0 && col < J.cols()) col = lu.colsPermutation().indices()[col];
  return col;
}

bool same_pattern(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  for (Eigen::Index k = 0; k <= a.outerSize(); ++k) {
    if (a.outerIndexPtr()[k] != b.outerIndexPtr()[k]) return false;
  }
  for (Eigen::Index k = 0; k < a.nonZeros(); ++k) {
    if (a.innerIndexPtr()[k] != b.innerIndexPtr()[k]) return false;
  }
  return true;
}

}  // namespace

struct LinearSolver::Impl {
#ifdef CUTFSI_HAVE_UMFPACK
  Eigen::UmfPackLU<SparseMatrix> lu;
#else
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
#endif
  SparseMatrix pattern;
  bool analyzed = false;
  SparseMatrix matrix;
};

LinearSolver::LinearSolver() : impl_(std::make_unique<Impl>()) {
#ifdef CUTFSI_HAVE_UMFPACK
  impl_->lu.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
#endif
}
LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

void LinearSolver::factorize(const SparseMatrix& J) {
  if (J.rows() != J.cols()) throw std::invalid_argument("LinearSolver: matrix is not square");
  impl_->matrix = J;
  impl_->matrix.makeCompressed();
  if (!impl_->analyzed || !same_pattern(impl_->pattern, impl_->matrix)) {
    impl_->lu.analyzePattern(impl_->matrix);
    impl_->pattern = impl_->matrix;
    impl_->analyzed = true;
  }
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success) {
    impl_->analyzed = false;
    const long dof = find_zero_pivot(impl_->matrix);
    std::ostringstream os;
    os << "singular matrix: zero pivot";
    if (dof >= 0) {
      os << " at unknown " << dof;
      if (describe_dof) os << " (" << describe_dof(dof) << ")";
    } else {
      os << " (numerical)";
    }
    throw SingularMatrixError(os.str(), dof);
  }
}

Vector LinearSolver::solve(const Vector& r) const {
  const SparseMatrix& J = impl_->matrix;
  Vector x = impl_->lu.solve(r);
  const double tol = 1e-10 * (r.norm() + 1.0);
  Vector res = r - J * x;
  // Iterative refinement for ill-conditioned cut configurations.
  for (int k = 0; k < 3 && res.norm() > tol; ++k) {
    x += impl_->lu.solve(res);
    res = r - J * x;
  }
  if (!x.allFinite() || res.norm() > tol) {
    std::ostringstream os;
    os << "linear solve inaccurate: residual " << res.norm() << " > " << tol;
    throw std::runtime_error(os.str());
  }
  return x;
}

Vector linear_solve(const SparseMatrix& J, const Vector& r) {
  LinearSolver s;
  s.factorize(J);
  return s.solve(r);
}

NewtonResult newton_solve(const NonlinearSystem& sys, Vector x0, const NewtonSettings& settings) {
  if (!x0.allFinite()) throw std::invalid_argument("newton_solve: initial guess is not finite");
  if (settings.max_iter < 1 || !(settings.tol_abs > 0.0) || !(settings.tol_rel > 0.0)) {
    throw std::invalid_argument("newton_solve: invalid settings");
  }
  NewtonResult out;
  out.x = std::move(x0);
  Vector r;
  SparseMatrix J;
  LinearSolver lin;
  lin.describe_dof = sys.describe_dof;

  sys.evaluate(out.x, r, &J);
  double rnorm = r.norm();
  out.residual_history.push_back(rnorm);
  const double target = std::max(settings.tol_abs, settings.tol_rel * rnorm);
  while (rnorm > target) {
    if (out.iterations >= settings.max_iter) {
      std::ostringstream os;
      os << "newton_solve: no convergence after " << out.iterations << " iterations (residual " << rnorm
         << ", target " << target << ")";
      throw NewtonDivergedError(os.str(), out.residual_history);
    }
    lin.factorize(J);
    const Vector dx = lin.solve(-r);
    double step = 1.0;
    Vector trial = out.x + dx;
    Vector rt;
    SparseMatrix Jt;
    sys.evaluate(trial, rt, &Jt);
    double tnorm = rt.norm();
    // Halve only if the full step increased the residual.
    for (int k = 0; k < 8 && !(tnorm < rnorm); ++k) {
      step *= 0.5;
      trial = out.x + step * dx;
      sys.evaluate(trial, rt, &Jt);
      tnorm = rt.norm();
    }
    out.x = std::move(trial);
    r = std::move(rt);
    J = std::move(Jt);
    rnorm = tnorm;
    ++out.iterations;
    out.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) {
      throw NewtonDivergedError("newton_solve: residual is not finite", out.residual_history);
    }
  }
  return out;
}

}  // namespace cutfsi
