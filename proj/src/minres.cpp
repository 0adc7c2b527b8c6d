#include "dgoc/minres.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dgoc {

// Paige-Saunders recurrences; variable names follow the usual reference
// implementation.
KrylovResult minres(const LinearMap& op, const LinearMap& prec, const Vector& b, double tol,
                    int maxit) {
  if (!(tol > 0.0)) throw std::invalid_argument("minres: tol must be > 0");
  if (maxit < 1) throw std::invalid_argument("minres: maxit must be >= 1");
  const int n = static_cast<int>(b.size());
  KrylovResult res;
  res.solution = Vector::Zero(n);

  Vector y;
  prec(b, y);
  double beta1 = b.dot(y);
  if (beta1 < 0.0) throw std::runtime_error("minres: preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);
  res.relative_residuals.push_back(1.0);
  if (beta1 == 0.0) {
    res.converged = true;
    res.message = "zero right-hand side";
    res.relative_residuals.back() = 0.0;
    return res;
  }

  Vector r1 = b, r2 = b;
  Vector w = Vector::Zero(n), w1 = Vector::Zero(n), w2 = Vector::Zero(n);
  Vector v(n), Av(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  constexpr double tiny = std::numeric_limits<double>::epsilon();
  Vector& x = res.solution;

  res.message = "iteration limit reached";
  for (int itn = 1; itn <= maxit; ++itn) {
    v = y / beta;
    op(v, Av);
    y = Av;
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1.swap(r2);
    r2 = y;
    prec(r2, y);
    oldb = beta;
    double bb = r2.dot(y);
    if (bb < 0.0) throw std::runtime_error("minres: preconditioner is not positive definite");
    beta = std::sqrt(bb);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1.swap(w2);
    w2.swap(w);
    w = (v - oldeps * w1 - delta * w2) / gamma;
    x += phi * w;

    res.iterations = itn;
    const double rel = phibar / beta1;
    res.relative_residuals.push_back(rel);
    if (rel <= tol) {
      res.converged = true;
      res.message = "converged";
      break;
    }
    if (beta == 0.0) {
      // Lanczos breakdown: the Krylov space is invariant, x is the minimizer
      res.converged = rel <= std::sqrt(tol);
      res.message = res.converged ? "breakdown with small residual" : "breakdown";
      if (!res.converged) throw std::runtime_error("minres: Lanczos breakdown");
      break;
    }
  }

  Vector bx;
  op(x, bx);
  res.true_relative_residual = (b - bx).norm() / b.norm();
  return res;
}

KrylovResult minres(const SaddleOperator& op, const PreconditionerContext& prec, const Vector& rhs,
                    double tol, int maxit) {
  if (op.size() != prec.size() || rhs.size() != op.size())
    throw std::invalid_argument("minres: operator, preconditioner and rhs sizes differ");
  return minres([&](const Vector& in, Vector& out) { op.apply(in, out); },
                [&](const Vector& in, Vector& out) { prec.apply(in, out); }, rhs, tol, maxit);
}

void write_residual_history_csv(const KrylovResult& r, std::ostream& out) {
  out << "iteration,relative_residual\n";
  out.precision(10);
  for (std::size_t i = 0; i < r.relative_residuals.size(); ++i)
    out << i << ',' << r.relative_residuals[i] << '\n';
}

}  // namespace dgoc
