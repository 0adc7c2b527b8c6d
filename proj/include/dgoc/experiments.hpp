#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dgoc/assembly.hpp"
#include "dgoc/minres.hpp"
#include "dgoc/norms.hpp"
#include "dgoc/preconditioner.hpp"
#include "dgoc/problems.hpp"

namespace dgoc {

enum class ExperimentKind { contraction, smooth, boundary_layer, interior_layer };

ExperimentKind parse_experiment(const std::string& name);
std::string experiment_name(ExperimentKind kind);

/// Flat JSON config; unknown keys are rejected so typos do not pass silently.
struct ExperimentConfig {
  ExperimentKind example = ExperimentKind::smooth;
  std::vector<double> epsilon_list{1e-1, 1e-3, 1e-6, 1e-9};
  std::vector<double> beta_list{1.0};
  int min_level = 1;
  int max_level = 7;
  int m1 = 8;
  int m2 = 8;
  std::vector<int> smoothing_list{2, 4, 8};  // contraction only
  double sigma = 10.0;
  double tol = 1e-6;
  int maxit = 500;
  PrecondMode precond_mode = PrecondMode::mg;
  std::string output_dir = "out";
  std::uint64_t seed = 20240101;
  int contraction_seeds = 5;
  LoadRule load_rule = LoadRule::strong;
  FluxTerm flux_term = FluxTerm::omitted;
  /// [x_min, x_max, y_min, y_max]; defaults depend on the example.
  std::optional<std::array<double, 4>> local_box;
  /// Write nodal fields at this level (0 = off).
  int emit_field_level = 0;

  void validate() const;
  SubdomainBox box() const;
};

ExperimentConfig default_config(ExperimentKind kind);
/// Keys in `j` override the defaults of `kind`.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentKind kind);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& file, ExperimentKind kind);

ExampleId example_of(ExperimentKind kind);

// ---- single solves

struct SolveOutcome {
  Mesh mesh;
  Vector p;  // balanced variables
  Vector y;
  KrylovResult krylov;
  ManufacturedProblem problem;
  ProblemData pd;
};

SolveOutcome solve_example(ExampleId id, double epsilon, double beta, int level,
                           const ExperimentConfig& cfg);

LevelErrors measure_errors(const SolveOutcome& s, int level, const ExperimentConfig& cfg);

// ---- studies

struct ContractionRow {
  double epsilon = 0.0;
  double beta = 0.0;
  int level = 0;
  int m = 0;
  bool transpose = false;
  double rate = 0.0;
  int iterations = 0;
  bool diverged = false;
};

std::vector<ContractionRow> run_contraction_study(const ExperimentConfig& cfg);

struct ConvergenceRow {
  double epsilon = 0.0;
  double beta = 0.0;
  int dofs = 0;
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;
  double true_relative_residual = 0.0;
  LevelErrors errors;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;

  /// Rows of one (eps, beta) cell as an ErrorReport, in level order.
  ErrorReport report(double epsilon, double beta) const;
  /// Iteration count at (eps, beta, level) or -1.
  int iterations(double epsilon, double beta, int level) const;
};

ConvergenceStudy run_convergence_study(const ExperimentConfig& cfg);

// ---- output

const std::vector<std::string>& contraction_csv_columns();
const std::vector<std::string>& convergence_csv_columns();

void write_contraction_csv(const std::vector<ContractionRow>& rows, std::ostream& out);
void write_contraction_md(const std::vector<ContractionRow>& rows, bool transpose,
                          std::ostream& out);
void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out);
/// Global and local error tables per (eps, beta), then an iteration table.
void write_convergence_md(const ConvergenceStudy& study, const ExperimentConfig& cfg,
                          std::ostream& out);

/// Rows "field,element,local,x,y,value" for y_h, p_h, y, p at every
/// element vertex.
void emit_solution_field(const Mesh& mesh, const Vector& yh, const Vector& ph,
                         const ExactSolution& y, const ExactSolution& p, std::ostream& out);

/// Runs the configured study and writes *.csv, *.md and manifest.json into
/// cfg.output_dir. Returns the list of written files.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg);

extern const char* const kVersion;

}  // namespace dgoc
