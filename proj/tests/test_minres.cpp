#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include <Eigen/LU>

#include "dgoc/minres.hpp"

using namespace dgoc;

namespace {

Vector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

LinearMap dense_map(const Eigen::MatrixXd& A) {
  return [A](const Vector& x, Vector& y) { y = A * x; };
}

const LinearMap kIdentity = [](const Vector& x, Vector& y) { y = x; };

struct SaddleCase {
  Mesh mesh;
  ProblemData pd;
  BlockDiagMatrix M;
  BlockSparseMatrix A;
};

SaddleCase saddle_case(double eps, double beta, int level) {
  SaddleCase c;
  c.pd = make_problem_data(eps, beta, Point(1, 0));
  c.mesh = classify_edges(build_mesh(level), c.pd.zeta);
  c.M = assemble_mass(c.mesh);
  c.A = assemble_operator(c.mesh, c.pd);
  return c;
}

}  // namespace

TEST_CASE("argument checks and trivial systems") {
  const Vector b = Vector::Ones(4);
  CHECK_THROWS_AS(minres(kIdentity, kIdentity, b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(minres(kIdentity, kIdentity, b, 1e-6, 0), std::invalid_argument);

  const KrylovResult z = minres(kIdentity, kIdentity, Vector::Zero(4), 1e-8);
  CHECK(z.converged);
  CHECK(z.iterations == 0);
  CHECK(z.solution.norm() == 0.0);

  SUBCASE("signed identity: at most two iterations") {
    Eigen::MatrixXd S = Eigen::MatrixXd::Identity(6, 6);
    S.bottomRightCorner(3, 3) *= -1.0;
    std::mt19937_64 rng(13);
    const Vector rhs = random_vector(6, rng);
    const KrylovResult r = minres(dense_map(S), kIdentity, rhs, 1e-12);
    CHECK(r.converged);
    CHECK(r.iterations <= 2);
    CHECK((S * r.solution - rhs).norm() < 1e-12 * rhs.norm());
  }
  SUBCASE("indefinite preconditioner is rejected") {
    const LinearMap neg = [](const Vector& x, Vector& y) { y = -x; };
    CHECK_THROWS_AS(minres(kIdentity, neg, b, 1e-8), std::runtime_error);
  }
}

TEST_CASE("dense symmetric indefinite system") {
  std::mt19937_64 rng(14);
  const int n = 40;
  Eigen::MatrixXd R(n, n);
  for (int j = 0; j < n; ++j) R.col(j) = random_vector(n, rng);
  const Eigen::MatrixXd S = R + R.transpose();
  const Vector rhs = random_vector(n, rng);
  const KrylovResult r = minres(dense_map(S), kIdentity, rhs, 1e-10, 400);
  CHECK(r.converged);
  CHECK(r.relative_residuals.front() == 1.0);
  CHECK(r.relative_residuals.size() == static_cast<std::size_t>(r.iterations + 1));
  for (std::size_t i = 1; i < r.relative_residuals.size(); ++i)
    CHECK(r.relative_residuals[i] <= r.relative_residuals[i - 1] * (1 + 1e-12));
  CHECK(r.relative_residuals.back() <= 1e-10);
  const Vector x = S.partialPivLu().solve(rhs);
  CHECK((r.solution - x).norm() <= 1e-6 * x.norm());
  CHECK(r.true_relative_residual == doctest::Approx((S * r.solution - rhs).norm() / rhs.norm()));

  SUBCASE("iteration limit") {
    const KrylovResult cut = minres(dense_map(S), kIdentity, rhs, 1e-10, 3);
    CHECK_FALSE(cut.converged);
    CHECK(cut.iterations == 3);
    CHECK(cut.relative_residuals.size() == 4);
  }
}

TEST_CASE("ideal preconditioner converges in few iterations") {
  // The ideal spectrum fills two intervals rather than three points, so the
  // count is small but not bounded by three.
  for (double eps : {1e-1, 1e-3}) {
    for (int k = 0; k <= 2; ++k) {
      const SaddleCase c = saddle_case(eps, 1.0, k);
      const SaddleOperator B(c.M, c.A, 1.0);
      const LinearMap op = [&](const Vector& x, Vector& y) { B.apply(x, y); };
      const LinearMap prec = [&](const Vector& x, Vector& y) {
        y = apply_ideal_preconditioner(c.M, c.A, 1.0, x);
      };
      std::mt19937_64 rng(15);
      const Vector rhs = random_vector(B.size(), rng);
      const KrylovResult r = minres(op, prec, rhs, 1e-10);
      MESSAGE("eps " << eps << " level " << k << ": " << r.iterations << " iterations");
      CHECK(r.converged);
      CHECK(r.iterations <= 30);
    }
  }
}

TEST_CASE("preconditioned saddle solve") {
  for (PrecondMode mode : {PrecondMode::mg, PrecondMode::bgs_single_sweep, PrecondMode::exact}) {
    const double eps = mode == PrecondMode::bgs_single_sweep ? 1e-9 : 1e-3;
    const SaddleCase c = saddle_case(eps, 1.0, 3);
    const SaddleOperator B(c.M, c.A, 1.0);
    const auto h = std::make_shared<const MGHierarchy>(build_hierarchy(3, c.pd));
    const PreconditionerContext ctx(h, mode);
    const ManufacturedProblem mp = manufacture_rhs(example_spec(ExampleId::smooth, eps), c.pd);
    const Vector rhs = assemble_saddle_rhs(c.mesh, c.pd, mp);
    const KrylovResult r = minres(B, ctx, rhs, 1e-6);
    CHECK(r.converged);
    CHECK(r.relative_residuals.back() <= 1e-6);
    CHECK(r.true_relative_residual <= 1e-5);
    CHECK(r.iterations < 40);
    const Vector exact = B.to_dense().partialPivLu().solve(rhs);
    CHECK((r.solution - exact).norm() <= 1e-4 * exact.norm());
  }
}

TEST_CASE("mg and single-sweep counts agree in the transport regime") {
  for (int k = 1; k <= 4; ++k) {
    const SaddleCase c = saddle_case(1e-9, 1.0, k);
    const SaddleOperator B(c.M, c.A, 1.0);
    const auto h = std::make_shared<const MGHierarchy>(build_hierarchy(k, c.pd));
    const ManufacturedProblem mp = manufacture_rhs(example_spec(ExampleId::smooth, 1e-9), c.pd);
    const Vector rhs = assemble_saddle_rhs(c.mesh, c.pd, mp);
    const int a = minres(B, PreconditionerContext(h, PrecondMode::mg), rhs, 1e-6).iterations;
    const int b = minres(B, PreconditionerContext(h, PrecondMode::bgs_single_sweep), rhs, 1e-6).iterations;
    CHECK(std::abs(a - b) <= 1);
  }
}

TEST_CASE("residual history csv") {
  KrylovResult r;
  r.relative_residuals = {1.0, 0.5, 0.01};
  std::ostringstream os;
  write_residual_history_csv(r, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "iteration,relative_residual");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 3);
}
