#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "dgoc/multigrid.hpp"

namespace dgoc {

enum class PrecondMode { mg, bgs_single_sweep, exact };

PrecondMode parse_precond_mode(const std::string& name);  // "mg", "bgs", "exact"
std::string precond_mode_name(PrecondMode mode);

/// Dense solves are refused above this level.
inline constexpr int kExactModeMaxLevel = 3;
inline constexpr int kSpectrumMaxLevel = 2;

/// Approximates blockdiag(M, P^T M^{-1} P)^{-1} with P = beta^½ A + M on the
/// finest level of the hierarchy.
class PreconditionerContext {
 public:
  PreconditionerContext(std::shared_ptr<const MGHierarchy> hierarchy, PrecondMode mode);

  PrecondMode mode() const { return mode_; }
  const MGHierarchy& hierarchy() const { return *h_; }
  int level() const { return h_->finest(); }
  int size() const { return 2 * h_->levels.back().mesh.num_dofs(); }

  /// (w; v) -> (M^{-1} w; B_P M B_P^T v), B_P one V-cycle (or one GS sweep,
  /// or an exact solve) for P from zero.
  void apply(const Vector& rhs, Vector& out) const;
  Vector apply(const Vector& rhs) const;

 private:
  std::shared_ptr<const MGHierarchy> h_;
  PrecondMode mode_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_, lu_t_;
};

Vector apply_preconditioner(const PreconditionerContext& ctx, const Vector& rhs);

/// blockdiag(M, M + beta A^T M^{-1} A)^{-1} rhs by dense factorization.
Vector apply_ideal_preconditioner(const BlockDiagMatrix& M, const BlockSparseMatrix& A, double beta,
                                  const Vector& rhs);

enum class SpectrumKind { ideal, practical };

struct SchurDiagnostics {
  std::vector<double> eigenvalues;  // ascending
  double min = 0.0;
  double max = 0.0;
};

/// ideal: eigenvalues of blockdiag(M, S)^{-1} B with S = M + beta A^T M^{-1} A.
/// practical: generalized eigenvalues of (S, P^T M^{-1} P).
SchurDiagnostics preconditioned_spectrum(const BlockDiagMatrix& M, const BlockSparseMatrix& A,
                                         double beta, SpectrumKind which);

}  // namespace dgoc
