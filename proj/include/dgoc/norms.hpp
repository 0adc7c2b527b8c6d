#pragma once

#include <limits>
#include <string>
#include <vector>

#include "dgoc/mesh.hpp"
#include "dgoc/problems.hpp"
#include "dgoc/sparse.hpp"

namespace dgoc {

// All errors are e = u - u_h with u the exact function.

double error_l2(const Mesh& mesh, const Vector& uh, const ScalarField& exact);

/// (Σ_T ‖∇e‖²_T)^½
double error_broken_h1(const Mesh& mesh, const Vector& uh, const ExactSolution& exact);

/// Treatment of the h_e ‖{n·∇e}‖² term of ‖·‖_d.
enum class FluxTerm {
  /// Left out. On discrete functions it is bounded by the other terms, and
  /// with the exact part on an edge inside a layer it is O(h/eps).
  omitted,
  /// {n·∇u_h} only; does not vanish as h -> 0, diagnostic use.
  discrete,
  /// {n·∇(u - u_h)}
  full,
};

FluxTerm parse_flux_term(const std::string& name);
std::string flux_term_name(FluxTerm f);

struct EpsNormOptions {
  FluxTerm flux = FluxTerm::omitted;
};

struct EpsNormParts {
  double d_sq = 0.0;   // ‖e‖_d²
  double ar_sq = 0.0;  // ‖e‖_ar²
};

/// Requires classified edges.
EpsNormParts eps_norm_parts(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                            const ProblemData& pd, const EpsNormOptions& opt = {});

/// (eps ‖e‖_d² + ‖e‖_ar²)^½
double error_eps_norm(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                      const ProblemData& pd, const EpsNormOptions& opt = {});

/// (beta^½ ‖e‖_{1,eps}² + ‖e‖²)^½
double error_triple_norm(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                         const ProblemData& pd, const EpsNormOptions& opt = {});

struct LocalError {
  double l2 = 0.0;
  double broken_h1 = 0.0;
  bool empty = false;  // no element inside the box
};

LocalError error_local(const Mesh& mesh, const Vector& uh, const ExactSolution& exact,
                       const SubdomainBox& box);

/// rates[k] = log2(e[k-1]/e[k]); rates[0] and rates from non-positive errors
/// are NaN.
std::vector<double> convergence_rates(const std::vector<double>& errors);

inline bool rate_defined(double r) { return r == r; }

struct LevelErrors {
  int level = 0;
  double h = 0.0;
  double l2_y = 0.0, eps_y = 0.0, l2_p = 0.0, eps_p = 0.0;
  double local_l2_y = 0.0, local_h1_y = 0.0, local_l2_p = 0.0, local_h1_p = 0.0;
};

struct ErrorReport {
  std::vector<LevelErrors> levels;

  /// Column by member pointer, e.g. column(&LevelErrors::l2_y).
  std::vector<double> column(double LevelErrors::*field) const;
  std::vector<double> rates(double LevelErrors::*field) const;
};

}  // namespace dgoc
