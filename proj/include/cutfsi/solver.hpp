#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "cutfsi/types.hpp"

namespace cutfsi {

class SingularMatrixError : public std::runtime_error {
 public:
  SingularMatrixError(const std::string& what, long dof) : std::runtime_error(what), dof_(dof) {}
  long dof() const { return dof_; }

 private:
  long dof_;
};

/// Sparse direct LU solver. The symbolic analysis is kept and reused while
/// the sparsity pattern of successive matrices does not change.
class LinearSolver {
 public:
  LinearSolver();
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Optional naming of unknowns for error messages.
  std::function<std::string(long)> describe_dof;

  void factorize(const SparseMatrix& J);
  Vector solve(const Vector& r) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Solve J x = r with a fresh factorization. Guarantees
/// ||J x - r|| <= 1e-10 (||r|| + 1) or throws.
Vector linear_solve(const SparseMatrix& J, const Vector& r);

struct NewtonSettings {
  double tol_abs = 1e-10;
  double tol_rel = 1e-8;
  int max_iter = 25;
};

/// Nonlinear system F(x) = 0. `evaluate` fills the residual and, when
/// `jacobian` is non-null, the Jacobian at x.
struct NonlinearSystem {
  std::function<void(const Vector& x, Vector& residual, SparseMatrix* jacobian)> evaluate;
  std::function<std::string(long)> describe_dof;
};

struct NewtonResult {
  Vector x;
  int iterations = 0;
  std::vector<double> residual_history;
};

class NewtonDivergedError : public std::runtime_error {
 public:
  NewtonDivergedError(const std::string& what, std::vector<double> history)
      : std::runtime_error(what), history_(std::move(history)) {}
  const std::vector<double>& history() const { return history_; }

 private:
  std::vector<double> history_;
};

/// Full Newton with the exact Jacobian. Step halving kicks in only after
/// a residual increase.
NewtonResult newton_solve(const NonlinearSystem& sys, Vector x0, const NewtonSettings& settings = {});

}  // namespace cutfsi
