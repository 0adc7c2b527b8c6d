#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "dgoc/assembly.hpp"
#include "dgoc/preconditioner.hpp"

namespace dgoc {

using LinearMap = std::function<void(const Vector&, Vector&)>;

struct KrylovResult {
  Vector solution;
  int iterations = 0;  // operator applications
  /// ‖r_i‖_{P^{-1}} / ‖b‖_{P^{-1}}, entry 0 is the initial residual (1).
  std::vector<double> relative_residuals;
  bool converged = false;
  /// ‖b - B x‖_2 / ‖b‖_2 of the returned solution.
  double true_relative_residual = 0.0;
  std::string message;
};

/// Preconditioned MINRES from a zero initial guess. `op` must be symmetric
/// and `prec` (the action of the preconditioner inverse) symmetric positive
/// definite.
KrylovResult minres(const LinearMap& op, const LinearMap& prec, const Vector& rhs, double tol,
                    int maxit = 500);

KrylovResult minres(const SaddleOperator& op, const PreconditionerContext& prec, const Vector& rhs,
                    double tol, int maxit = 500);

void write_residual_history_csv(const KrylovResult& r, std::ostream& out);

}  // namespace dgoc
