#pragma once

#include <optional>
#include <string>

#include "dgoc/mesh.hpp"
#include "dgoc/sparse.hpp"

namespace dgoc {

/// Coefficients of the state operator
///   -eps Δy + zeta·∇y + gamma y
/// and the discretization/regularization parameters of the optimality system.
struct ProblemData {
  double epsilon = 1.0;
  double beta = 1.0;
  VectorField zeta = [](const Point&) { return Point(0.0, 0.0); };
  ScalarField gamma = [](const Point&) { return 0.0; };
  /// ∇·zeta; only the weak-form manufactured loads need it.
  ScalarField zeta_divergence = [](const Point&) { return 0.0; };
  double sigma = 10.0;
  /// max(‖gamma‖_∞, |zeta|_{1,∞})
  double tau_c_inv = 0.0;
  std::optional<double> gamma0;

  double beta_half() const;
  void validate() const;
};

/// Constant convection and reaction; tau_c_inv is |gamma| since a constant
/// field has zero W^{1,∞} seminorm.
ProblemData make_problem_data(double epsilon, double beta, const Point& zeta, double gamma = 0.0,
                              double sigma = 10.0);

struct ExactSolution {
  ScalarField value;
  VectorField gradient;
  ScalarField laplacian;
};

enum class ExampleId { smooth, boundary_layer, interior_layer };

ExampleId parse_example(const std::string& name);
std::string example_name(ExampleId id);

/// Exact solutions and convection field of a test problem for a given eps.
struct ExampleSpec {
  ExampleId id = ExampleId::smooth;
  std::string name;
  Point zeta = Point(1.0, 0.0);
  double gamma = 0.0;
  ExactSolution p;
  ExactSolution y;
};

ExampleSpec example_spec(ExampleId id, double epsilon);

/// Exact pair (p, y) of the balanced system with its closed-form sources
///   f = beta^½(-eps Δp - ∇·(zeta p) + gamma p) - y
///   g = p + beta^½(-eps Δy + zeta·∇y + gamma y)
/// and Dirichlet traces.
struct ManufacturedProblem {
  std::string name;
  ExactSolution p;
  ExactSolution y;
  ScalarField f;
  ScalarField g;
  ScalarField dirichlet_p;
  ScalarField dirichlet_y;
};

ManufacturedProblem manufacture_rhs(const ExampleSpec& spec, const ProblemData& pd);

/// Undo the rebalancing: returns (beta^¼ p̃, beta^-¼ ỹ).
std::pair<Vector, Vector> to_original_variables(const Vector& p_tilde, const Vector& y_tilde,
                                                double beta);

}  // namespace dgoc
