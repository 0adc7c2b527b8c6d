#pragma once

#include "dgoc/mesh.hpp"
#include "dgoc/problems.hpp"
#include "dgoc/sparse.hpp"

namespace dgoc {

// Degrees of freedom are element-major: entry 3*t + j is the value of the
// discrete function at local vertex j of element t. Matrix rows index test
// functions and columns trial functions, so (A u)_i = a_h(u, φ_i).

BlockDiagMatrix assemble_mass(const Mesh& mesh);

/// Symmetric interior penalty form with penalty sigma / h_e on every edge.
BlockSparseMatrix assemble_sip(const Mesh& mesh, double sigma);

/// The two algebraically equivalent ways of writing the upwind form.
enum class UpwindForm {
  downwind_value,  // flux tested with the downwind trace
  average_jump,    // centred flux plus ½|zeta·n| jump penalty
};

/// Upwind advection-reaction form; requires classified edges.
BlockSparseMatrix assemble_upwind_ar(const Mesh& mesh, const VectorField& zeta,
                                     const ScalarField& gamma,
                                     UpwindForm form = UpwindForm::downwind_value);

/// eps * A_sip + A_ar
BlockSparseMatrix assemble_operator(const Mesh& mesh, const ProblemData& pd);

/// Forward: the state operator with convection zeta (the matrix A).
/// Adjoint: the operator acting on the second argument of a_h (the matrix
/// A^T), whose convection is -zeta.
enum class Direction { forward, adjoint };

/// ∫ source φ_i with the degree-5 rule.
Vector assemble_source(const Mesh& mesh, const ScalarField& source);

/// Right-hand side terms produced by nonzero Dirichlet data g_D under weak
/// imposition: eps(sigma/h_e ∫ g_D φ - ∫ g_D n·∇φ) on boundary edges, plus
/// -∫ (n·zeta_dir) g_D φ on edges that are inflow for the direction.
Vector assemble_lifting(const Mesh& mesh, const ProblemData& pd, const ScalarField& dirichlet,
                        Direction direction);

/// assemble_source + assemble_lifting
Vector assemble_load(const Mesh& mesh, const ProblemData& pd, const ScalarField& source,
                     const ScalarField& dirichlet, Direction direction);

/// How manufactured sources are integrated against the test functions.
enum class LoadRule {
  /// Degree-5 quadrature of the closed-form source. Layers thinner than the
  /// mesh are invisible to it, so the discrete problem sees the reduced
  /// (eps -> 0) data.
  strong,
  /// The differential operator is moved onto the test function element by
  /// element, so the O(1) edge fluxes of unresolved layers enter the load.
  /// Agrees with `strong` for smooth data.
  weak,
};

/// Stacked right-hand side (top; bottom) of the saddle system for the
/// manufactured pair: top rows test the state equation (source g), bottom
/// rows the adjoint equation (source f).
Vector assemble_saddle_rhs(const Mesh& mesh, const ProblemData& pd,
                           const ManufacturedProblem& problem, LoadRule rule = LoadRule::strong);

/// L2 projection onto the broken P1 space.
Vector l2_projection(const Mesh& mesh, const BlockDiagMatrix& mass, const ScalarField& u);

/// Nodal interpolant (element-wise vertex values).
Vector interpolate(const Mesh& mesh, const ScalarField& u);

/// [[M, b^½ A], [b^½ A^T, -M]] applied to stacked (p; y); never formed.
class SaddleOperator {
 public:
  SaddleOperator(BlockDiagMatrix mass, BlockSparseMatrix op, double beta);

  int size() const { return 2 * n_; }
  int field_size() const { return n_; }
  const BlockDiagMatrix& mass() const { return mass_; }
  const BlockSparseMatrix& op() const { return op_; }
  double beta() const { return beta_; }

  void apply(const Vector& x, Vector& out) const;
  Vector operator*(const Vector& x) const;

  Eigen::MatrixXd to_dense() const;

 private:
  BlockDiagMatrix mass_;
  BlockSparseMatrix op_;
  double beta_;
  int n_;
};

SaddleOperator build_saddle(const BlockDiagMatrix& mass, const BlockSparseMatrix& op, double beta);

}  // namespace dgoc
