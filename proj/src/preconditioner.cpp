#include "dgoc/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace dgoc {

namespace {

int max_dofs(int level) { return 3 * 2 * (1 << (2 * level)); }

void guard(int dofs, int level, const char* what) {
  if (dofs > max_dofs(level))
    throw std::invalid_argument(std::string(what) + ": dense path limited to level " +
                                std::to_string(level));
}

Eigen::MatrixXd schur(const BlockDiagMatrix& M, const BlockSparseMatrix& A, double beta) {
  const Eigen::MatrixXd Ad = A.to_dense();
  Eigen::MatrixXd MinvA(Ad.rows(), Ad.cols());
  for (int j = 0; j < Ad.cols(); ++j) MinvA.col(j) = M.solve(Vector(Ad.col(j)));
  return M.to_dense() + beta * Ad.transpose() * MinvA;
}

}  // namespace

PrecondMode parse_precond_mode(const std::string& name) {
  if (name == "mg") return PrecondMode::mg;
  if (name == "bgs" || name == "bgs_single_sweep") return PrecondMode::bgs_single_sweep;
  if (name == "exact") return PrecondMode::exact;
  throw std::invalid_argument("unknown preconditioner mode '" + name + "'");
}

std::string precond_mode_name(PrecondMode mode) {
  switch (mode) {
    case PrecondMode::mg: return "mg";
    case PrecondMode::bgs_single_sweep: return "bgs";
    case PrecondMode::exact: return "exact";
  }
  return "unknown";
}

PreconditionerContext::PreconditionerContext(std::shared_ptr<const MGHierarchy> hierarchy,
                                             PrecondMode mode)
    : h_(std::move(hierarchy)), mode_(mode) {
  if (!h_ || h_->levels.empty()) throw std::invalid_argument("PreconditionerContext: no hierarchy");
  if (mode_ == PrecondMode::exact) {
    if (level() > kExactModeMaxLevel)
      throw std::invalid_argument("PreconditionerContext: exact mode limited to level " +
                                  std::to_string(kExactModeMaxLevel));
    lu_.compute(h_->levels.back().P.to_dense());
    lu_t_.compute(h_->levels.back().Pt.to_dense());
  }
}

void PreconditionerContext::apply(const Vector& rhs, Vector& out) const {
  if (rhs.size() != size()) throw std::invalid_argument("preconditioner: dimension mismatch");
  const MGLevel& lv = h_->levels.back();
  const int n = lv.mesh.num_dofs();
  const int k = level();
  out.resize(2 * n);
  out.head(n) = lv.mass.solve(Vector(rhs.head(n)));

  const Vector v = rhs.tail(n);
  const Vector zero = Vector::Zero(n);
  Vector v1, v3;
  switch (mode_) {
    case PrecondMode::mg:
      v1 = v_cycle(*h_, k, v, zero, true);
      break;
    case PrecondMode::bgs_single_sweep:
      v1 = zero;
      block_gauss_seidel(lv.Pt, lv.diag_inv_t, v, v1, lv.perm, {SweepDirection::backward, 1});
      break;
    case PrecondMode::exact:
      v1 = lu_t_.solve(v);
      break;
  }
  const Vector v2 = lv.mass * v1;
  switch (mode_) {
    case PrecondMode::mg:
      v3 = v_cycle(*h_, k, v2, zero, false);
      break;
    case PrecondMode::bgs_single_sweep:
      v3 = zero;
      block_gauss_seidel(lv.P, lv.diag_inv, v2, v3, lv.perm, {SweepDirection::forward, 1});
      break;
    case PrecondMode::exact:
      v3 = lu_.solve(v2);
      break;
  }
  out.tail(n) = v3;
}

Vector PreconditionerContext::apply(const Vector& rhs) const {
  Vector out;
  apply(rhs, out);
  return out;
}

Vector apply_preconditioner(const PreconditionerContext& ctx, const Vector& rhs) {
  return ctx.apply(rhs);
}

Vector apply_ideal_preconditioner(const BlockDiagMatrix& M, const BlockSparseMatrix& A, double beta,
                                  const Vector& rhs) {
  const int n = M.rows();
  guard(n, kExactModeMaxLevel, "apply_ideal_preconditioner");
  if (A.rows() != n || rhs.size() != 2 * n)
    throw std::invalid_argument("apply_ideal_preconditioner: dimension mismatch");
  Vector out(2 * n);
  out.head(n) = M.solve(Vector(rhs.head(n)));
  out.tail(n) = schur(M, A, beta).llt().solve(Vector(rhs.tail(n)));
  return out;
}

SchurDiagnostics preconditioned_spectrum(const BlockDiagMatrix& M, const BlockSparseMatrix& A,
                                         double beta, SpectrumKind which) {
  const int n = M.rows();
  guard(n, kSpectrumMaxLevel, "preconditioned_spectrum");
  const Eigen::MatrixXd Md = M.to_dense();
  const Eigen::MatrixXd S = schur(M, A, beta);
  Eigen::MatrixXd lhs, rhs;
  if (which == SpectrumKind::ideal) {
    const double bh = std::sqrt(beta);
    const Eigen::MatrixXd Ad = A.to_dense();
    lhs.resize(2 * n, 2 * n);
    lhs << Md, bh * Ad, bh * Ad.transpose(), -Md;
    rhs = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    rhs.topLeftCorner(n, n) = Md;
    rhs.bottomRightCorner(n, n) = S;
  } else {
    const Eigen::MatrixXd P = std::sqrt(beta) * A.to_dense() + Md;
    Eigen::MatrixXd MinvP(n, n);
    for (int j = 0; j < n; ++j) MinvP.col(j) = M.solve(Vector(P.col(j)));
    lhs = S;
    rhs = P.transpose() * MinvP;
  }
  // both sides symmetric, right side SPD
  lhs = 0.5 * (lhs + lhs.transpose()).eval();
  rhs = 0.5 * (rhs + rhs.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(lhs, rhs);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("preconditioned_spectrum: eigensolver failed");
  SchurDiagnostics d;
  d.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(d.eigenvalues.begin(), d.eigenvalues.end());
  d.min = d.eigenvalues.front();
  d.max = d.eigenvalues.back();
  return d;
}

}  // namespace dgoc
