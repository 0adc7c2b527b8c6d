#include "dgoc/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>

namespace dgoc {

const char* const kVersion = "0.1.0";

namespace fs = std::filesystem;
using nlohmann::json;

ExperimentKind parse_experiment(const std::string& name) {
  if (name == "contraction") return ExperimentKind::contraction;
  if (name == "smooth") return ExperimentKind::smooth;
  if (name == "boundary-layer" || name == "boundary_layer") return ExperimentKind::boundary_layer;
  if (name == "interior-layer" || name == "interior_layer") return ExperimentKind::interior_layer;
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::string experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::contraction: return "contraction";
    case ExperimentKind::smooth: return "smooth";
    case ExperimentKind::boundary_layer: return "boundary-layer";
    case ExperimentKind::interior_layer: return "interior-layer";
  }
  return "unknown";
}

ExampleId example_of(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::smooth: return ExampleId::smooth;
    case ExperimentKind::boundary_layer: return ExampleId::boundary_layer;
    case ExperimentKind::interior_layer: return ExampleId::interior_layer;
    case ExperimentKind::contraction: break;
  }
  throw std::invalid_argument("contraction study has no manufactured example");
}

void ExperimentConfig::validate() const {
  if (min_level < 1 || max_level < min_level)
    throw std::invalid_argument("config: need 1 <= min_level <= max_level");
  if (!(tol > 0.0)) throw std::invalid_argument("config: tol must be > 0");
  if (maxit < 1) throw std::invalid_argument("config: maxit must be >= 1");
  if (epsilon_list.empty() || beta_list.empty())
    throw std::invalid_argument("config: epsilon_list and beta_list must be non-empty");
  for (double e : epsilon_list)
    if (!(e > 0.0)) throw std::invalid_argument("config: epsilon values must be > 0");
  for (double b : beta_list)
    if (!(b > 0.0)) throw std::invalid_argument("config: beta values must be > 0");
  if (m1 < 0 || m2 < 0) throw std::invalid_argument("config: smoothing counts must be >= 0");
  if (example == ExperimentKind::contraction && smoothing_list.empty())
    throw std::invalid_argument("config: smoothing_list must be non-empty");
  for (int m : smoothing_list)
    if (m < 0) throw std::invalid_argument("config: smoothing_list entries must be >= 0");
  if (!(sigma > 0.0)) throw std::invalid_argument("config: sigma must be > 0");
  if (contraction_seeds < 1) throw std::invalid_argument("config: contraction_seeds must be >= 1");
  if (precond_mode == PrecondMode::exact && max_level > kExactModeMaxLevel)
    throw std::invalid_argument("config: exact mode needs max_level <= " +
                                std::to_string(kExactModeMaxLevel));
  if (emit_field_level < 0) throw std::invalid_argument("config: emit_field_level must be >= 0");
  box();
}

SubdomainBox ExperimentConfig::box() const {
  if (local_box) {
    const auto& b = *local_box;
    return SubdomainBox(b[0], b[1], b[2], b[3]);
  }
  if (example == ExperimentKind::interior_layer) return SubdomainBox(0.6, 1.0, 0.0, 1.0);
  return SubdomainBox(0.25, 0.75, 0.25, 0.75);
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.example = kind;
  c.output_dir = "out/" + experiment_name(kind);
  if (kind != ExperimentKind::contraction) c.max_level = 8;
  return c;
}

namespace {

LoadRule parse_load_rule(const std::string& s) {
  if (s == "weak") return LoadRule::weak;
  if (s == "strong") return LoadRule::strong;
  throw std::invalid_argument("unknown load_rule '" + s + "'");
}

std::string load_rule_name(LoadRule r) { return r == LoadRule::weak ? "weak" : "strong"; }

}  // namespace

ExperimentConfig config_from_json(const json& j, ExperimentKind kind) {
  if (!j.is_object()) throw std::invalid_argument("config: top level must be a JSON object");
  ExperimentConfig c = default_config(kind);
  static const std::set<std::string> known = {
      "example",  "epsilon_list", "beta_list",    "min_level",         "max_level",
      "m1",       "m2",           "smoothing_list", "sigma",           "tol",
      "maxit",    "precond_mode", "output_dir",   "seed",              "contraction_seeds",
      "load_rule", "flux_term", "local_box", "emit_field_level"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + key + "'");
  if (j.contains("example") && parse_experiment(j["example"].get<std::string>()) != kind)
    throw std::invalid_argument("config: example '" + j["example"].get<std::string>() +
                                "' does not match the command");
  if (j.contains("epsilon_list")) c.epsilon_list = j["epsilon_list"].get<std::vector<double>>();
  if (j.contains("beta_list")) c.beta_list = j["beta_list"].get<std::vector<double>>();
  if (j.contains("min_level")) c.min_level = j["min_level"].get<int>();
  if (j.contains("max_level")) c.max_level = j["max_level"].get<int>();
  if (j.contains("m1")) c.m1 = j["m1"].get<int>();
  if (j.contains("m2")) c.m2 = j["m2"].get<int>();
  if (j.contains("smoothing_list")) c.smoothing_list = j["smoothing_list"].get<std::vector<int>>();
  if (j.contains("sigma")) c.sigma = j["sigma"].get<double>();
  if (j.contains("tol")) c.tol = j["tol"].get<double>();
  if (j.contains("maxit")) c.maxit = j["maxit"].get<int>();
  if (j.contains("precond_mode"))
    c.precond_mode = parse_precond_mode(j["precond_mode"].get<std::string>());
  if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("contraction_seeds")) c.contraction_seeds = j["contraction_seeds"].get<int>();
  if (j.contains("load_rule")) c.load_rule = parse_load_rule(j["load_rule"].get<std::string>());
  if (j.contains("flux_term")) c.flux_term = parse_flux_term(j["flux_term"].get<std::string>());
  if (j.contains("local_box")) c.local_box = j["local_box"].get<std::array<double, 4>>();
  if (j.contains("emit_field_level")) c.emit_field_level = j["emit_field_level"].get<int>();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["example"] = experiment_name(c.example);
  j["epsilon_list"] = c.epsilon_list;
  j["beta_list"] = c.beta_list;
  j["min_level"] = c.min_level;
  j["max_level"] = c.max_level;
  j["m1"] = c.m1;
  j["m2"] = c.m2;
  j["smoothing_list"] = c.smoothing_list;
  j["sigma"] = c.sigma;
  j["tol"] = c.tol;
  j["maxit"] = c.maxit;
  j["precond_mode"] = precond_mode_name(c.precond_mode);
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  j["contraction_seeds"] = c.contraction_seeds;
  j["load_rule"] = load_rule_name(c.load_rule);
  j["flux_term"] = flux_term_name(c.flux_term);
  const SubdomainBox b = c.box();
  j["local_box"] = {b.x_min, b.x_max, b.y_min, b.y_max};
  j["emit_field_level"] = c.emit_field_level;
  return j;
}

ExperimentConfig load_config(const fs::path& file, ExperimentKind kind) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config " + file.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("config " + file.string() + ": " + e.what());
  }
  return config_from_json(j, kind);
}

SolveOutcome solve_example(ExampleId id, double epsilon, double beta, int level,
                           const ExperimentConfig& cfg) {
  const ExampleSpec spec = example_spec(id, epsilon);
  SolveOutcome s;
  s.pd = make_problem_data(epsilon, beta, spec.zeta, spec.gamma, cfg.sigma);
  s.problem = manufacture_rhs(spec, s.pd);
  auto h = std::make_shared<const MGHierarchy>(build_hierarchy(level, s.pd, cfg.m1, cfg.m2));
  const MGLevel& fine = h->levels.back();
  s.mesh = fine.mesh;
  const Vector rhs = assemble_saddle_rhs(s.mesh, s.pd, s.problem, cfg.load_rule);
  const SaddleOperator B(fine.mass, fine.A, beta);
  const PreconditionerContext ctx(h, cfg.precond_mode);
  s.krylov = minres(B, ctx, rhs, cfg.tol, cfg.maxit);
  const int n = s.mesh.num_dofs();
  s.p = s.krylov.solution.head(n);
  s.y = s.krylov.solution.tail(n);
  return s;
}

LevelErrors measure_errors(const SolveOutcome& s, int level, const ExperimentConfig& cfg) {
  LevelErrors e;
  e.level = level;
  e.h = s.mesh.h;
  EpsNormOptions opt;
  opt.flux = cfg.flux_term;
  e.l2_y = error_l2(s.mesh, s.y, s.problem.y.value);
  e.l2_p = error_l2(s.mesh, s.p, s.problem.p.value);
  e.eps_y = error_eps_norm(s.mesh, s.y, s.problem.y, s.pd, opt);
  e.eps_p = error_eps_norm(s.mesh, s.p, s.problem.p, s.pd, opt);
  const SubdomainBox box = cfg.box();
  const LocalError ly = error_local(s.mesh, s.y, s.problem.y, box);
  const LocalError lp = error_local(s.mesh, s.p, s.problem.p, box);
  e.local_l2_y = ly.l2;
  e.local_h1_y = ly.broken_h1;
  e.local_l2_p = lp.l2;
  e.local_h1_p = lp.broken_h1;
  return e;
}

std::vector<ContractionRow> run_contraction_study(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<ContractionRow> rows;
  const Point zeta(1.0, 0.0);
  for (double eps : cfg.epsilon_list)
    for (double beta : cfg.beta_list) {
      const ProblemData pd = make_problem_data(eps, beta, zeta, 0.0, cfg.sigma);
      const MGHierarchy h = build_hierarchy(cfg.max_level, pd, cfg.m1, cfg.m2);
      for (int transpose = 0; transpose < 2; ++transpose)
        for (int k = cfg.min_level; k <= cfg.max_level; ++k)
          for (int m : cfg.smoothing_list) {
            const ContractionEstimate est = estimate_contraction(
                h, k, m, transpose != 0, cfg.contraction_seeds, cfg.seed);
            rows.push_back({eps, beta, k, m, transpose != 0, est.rate, est.iterations,
                            est.diverged});
          }
    }
  return rows;
}

ErrorReport ConvergenceStudy::report(double epsilon, double beta) const {
  ErrorReport r;
  for (const auto& row : rows)
    if (row.epsilon == epsilon && row.beta == beta) r.levels.push_back(row.errors);
  return r;
}

int ConvergenceStudy::iterations(double epsilon, double beta, int level) const {
  for (const auto& row : rows)
    if (row.epsilon == epsilon && row.beta == beta && row.errors.level == level)
      return row.iterations;
  return -1;
}

ConvergenceStudy run_convergence_study(const ExperimentConfig& cfg) {
  cfg.validate();
  const ExampleId id = example_of(cfg.example);
  ConvergenceStudy study;
  for (double eps : cfg.epsilon_list)
    for (double beta : cfg.beta_list)
      for (int k = cfg.min_level; k <= cfg.max_level; ++k) {
        const SolveOutcome s = solve_example(id, eps, beta, k, cfg);
        ConvergenceRow row;
        row.epsilon = eps;
        row.beta = beta;
        row.dofs = 2 * s.mesh.num_dofs();
        row.iterations = s.krylov.iterations;
        row.converged = s.krylov.converged;
        row.relative_residual = s.krylov.relative_residuals.back();
        row.true_relative_residual = s.krylov.true_relative_residual;
        row.errors = measure_errors(s, k, cfg);
        study.rows.push_back(row);
      }
  return study;
}

// ---- output

namespace {

std::string sci(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

std::string fixed2(double v) {
  if (!rate_defined(v)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

void csv_header(const std::vector<std::string>& cols, std::ostream& out) {
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

void md_row(const std::vector<std::string>& cells, std::ostream& out) {
  out << '|';
  for (const auto& c : cells) out << ' ' << c << " |";
  out << '\n';
}

void md_header(const std::vector<std::string>& cells, std::ostream& out) {
  md_row(cells, out);
  out << '|';
  for (std::size_t i = 0; i < cells.size(); ++i) out << "---|";
  out << '\n';
}

}  // namespace

const std::vector<std::string>& contraction_csv_columns() {
  static const std::vector<std::string> cols = {"epsilon", "beta",      "level",     "m",
                                                "cycle",   "contraction", "iterations", "diverged"};
  return cols;
}

const std::vector<std::string>& convergence_csv_columns() {
  static const std::vector<std::string> cols = {
      "epsilon",        "beta",       "level",      "h",          "dofs",
      "iterations",     "converged",  "relres",     "true_relres", "l2_y",
      "l2_y_order",     "eps_y",      "eps_y_order", "l2_p",      "l2_p_order",
      "eps_p",          "eps_p_order", "local_l2_y", "local_l2_y_order", "local_h1_y",
      "local_h1_y_order", "local_l2_p", "local_l2_p_order", "local_h1_p", "local_h1_p_order"};
  return cols;
}

void write_contraction_csv(const std::vector<ContractionRow>& rows, std::ostream& out) {
  csv_header(contraction_csv_columns(), out);
  for (const auto& r : rows)
    out << sci(r.epsilon, 2) << ',' << sci(r.beta, 2) << ',' << r.level << ',' << r.m << ','
        << (r.transpose ? "transpose" : "forward") << ',' << sci(r.rate, 3) << ','
        << r.iterations << ',' << (r.diverged ? 1 : 0) << '\n';
}

void write_contraction_md(const std::vector<ContractionRow>& rows, bool transpose,
                          std::ostream& out) {
  std::map<std::pair<double, double>, std::map<int, std::map<int, double>>> cells;
  std::set<int> ms;
  for (const auto& r : rows) {
    if (r.transpose != transpose) continue;
    cells[{r.epsilon, r.beta}][r.level][r.m] = r.rate;
    ms.insert(r.m);
  }
  out << "## Contraction numbers, " << (transpose ? "transpose cycle (P^T)" : "forward cycle (P)")
      << "\n\n";
  for (const auto& [key, levels] : cells) {
    out << "eps = " << sci(key.first, 0) << ", beta = " << sci(key.second, 0) << "\n\n";
    std::vector<std::string> head{"k"};
    for (int m : ms) head.push_back("m=" + std::to_string(m));
    md_header(head, out);
    for (const auto& [k, bym] : levels) {
      std::vector<std::string> row{std::to_string(k)};
      for (int m : ms) row.push_back(bym.count(m) ? sci(bym.at(m), 2) : "-");
      md_row(row, out);
    }
    out << '\n';
  }
}

void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out) {
  csv_header(convergence_csv_columns(), out);
  std::set<std::pair<double, double>> keys;
  for (const auto& r : study.rows) keys.insert({r.epsilon, r.beta});
  for (const auto& [eps, beta] : keys) {
    const ErrorReport rep = study.report(eps, beta);
    std::vector<std::vector<double>> rates;
    for (auto f : {&LevelErrors::l2_y, &LevelErrors::eps_y, &LevelErrors::l2_p,
                   &LevelErrors::eps_p, &LevelErrors::local_l2_y, &LevelErrors::local_h1_y,
                   &LevelErrors::local_l2_p, &LevelErrors::local_h1_p})
      rates.push_back(rep.rates(f));
    std::size_t i = 0;
    for (const auto& r : study.rows) {
      if (r.epsilon != eps || r.beta != beta) continue;
      const LevelErrors& e = r.errors;
      const double vals[] = {e.l2_y,       e.eps_y,      e.l2_p,       e.eps_p,
                             e.local_l2_y, e.local_h1_y, e.local_l2_p, e.local_h1_p};
      out << sci(eps, 2) << ',' << sci(beta, 2) << ',' << e.level << ',' << sci(e.h) << ','
          << r.dofs << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
          << sci(r.relative_residual, 3) << ',' << sci(r.true_relative_residual, 3);
      for (int c = 0; c < 8; ++c)
        out << ',' << sci(vals[c]) << ',' << (rate_defined(rates[c][i]) ? fixed2(rates[c][i]) : "");
      out << '\n';
      ++i;
    }
  }
}

void write_convergence_md(const ConvergenceStudy& study, const ExperimentConfig& cfg,
                          std::ostream& out) {
  std::set<std::pair<double, double>> keys;
  std::set<int> levels;
  for (const auto& r : study.rows) {
    keys.insert({r.epsilon, r.beta});
    levels.insert(r.errors.level);
  }
  const SubdomainBox b = cfg.box();
  for (const auto& [eps, beta] : keys) {
    const ErrorReport rep = study.report(eps, beta);
    out << "## " << experiment_name(cfg.example) << ", eps = " << sci(eps, 0)
        << ", beta = " << sci(beta, 0) << "\n\n### Global\n\n";
    auto table = [&](const std::vector<std::pair<std::string, double LevelErrors::*>>& cols) {
      std::vector<std::string> head{"k"};
      for (const auto& c : cols) {
        head.push_back(c.first);
        head.push_back("order");
      }
      md_header(head, out);
      std::vector<std::vector<double>> rates;
      for (const auto& c : cols) rates.push_back(rep.rates(c.second));
      for (std::size_t i = 0; i < rep.levels.size(); ++i) {
        std::vector<std::string> row{std::to_string(rep.levels[i].level)};
        for (std::size_t c = 0; c < cols.size(); ++c) {
          row.push_back(sci(rep.levels[i].*(cols[c].second), 2));
          row.push_back(fixed2(rates[c][i]));
        }
        md_row(row, out);
      }
      out << '\n';
    };
    table({{"‖e_y‖_L2", &LevelErrors::l2_y},
           {"‖e_y‖_1,eps", &LevelErrors::eps_y},
           {"‖e_p‖_L2", &LevelErrors::l2_p},
           {"‖e_p‖_1,eps", &LevelErrors::eps_p}});
    out << "### Local, box [" << b.x_min << ',' << b.x_max << "]x[" << b.y_min << ',' << b.y_max
        << "]\n\n";
    table({{"‖e_y‖_L2", &LevelErrors::local_l2_y},
           {"‖e_y‖_H1(T_h)", &LevelErrors::local_h1_y},
           {"‖e_p‖_L2", &LevelErrors::local_l2_p},
           {"‖e_p‖_H1(T_h)", &LevelErrors::local_h1_p}});
  }

  out << "## MINRES iterations (" << precond_mode_name(cfg.precond_mode) << ")\n\n";
  std::vector<std::string> head{"k"};
  for (const auto& [eps, beta] : keys) head.push_back("eps=" + sci(eps, 0) + " beta=" + sci(beta, 0));
  md_header(head, out);
  for (int k : levels) {
    std::vector<std::string> row{std::to_string(k)};
    for (const auto& [eps, beta] : keys) {
      std::string cell = std::to_string(study.iterations(eps, beta, k));
      for (const auto& r : study.rows)
        if (r.epsilon == eps && r.beta == beta && r.errors.level == k && !r.converged)
          cell += " (not converged)";
      row.push_back(cell);
    }
    md_row(row, out);
  }
  out << '\n';
}

void emit_solution_field(const Mesh& mesh, const Vector& yh, const Vector& ph,
                         const ExactSolution& y, const ExactSolution& p, std::ostream& out) {
  out << "field,element,local,x,y,value\n";
  auto dump = [&](const char* name, auto value) {
    for (int t = 0; t < mesh.num_elements(); ++t)
      for (int j = 0; j < 3; ++j) {
        const Point x = mesh.vertex(t, j);
        out << name << ',' << t << ',' << j << ',' << sci(x.x(), 10) << ',' << sci(x.y(), 10)
            << ',' << sci(value(t, j, x), 10) << '\n';
      }
  };
  dump("y_h", [&](int t, int j, const Point&) { return yh[3 * t + j]; });
  dump("p_h", [&](int t, int j, const Point&) { return ph[3 * t + j]; });
  dump("y", [&](int, int, const Point& x) { return y.value(x); });
  dump("p", [&](int, int, const Point& x) { return p.value(x); });
}

namespace {

fs::path write_file(const fs::path& dir, const std::string& name,
                    const std::function<void(std::ostream&)>& body) {
  const fs::path path = dir / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  body(out);
  return path;
}

}  // namespace

std::vector<fs::path> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);
  std::vector<fs::path> files;
  const auto start = std::chrono::steady_clock::now();
  json results;

  if (cfg.example == ExperimentKind::contraction) {
    const auto rows = run_contraction_study(cfg);
    files.push_back(write_file(dir, "contraction.csv",
                               [&](std::ostream& o) { write_contraction_csv(rows, o); }));
    files.push_back(write_file(dir, "contraction_forward.md",
                               [&](std::ostream& o) { write_contraction_md(rows, false, o); }));
    files.push_back(write_file(dir, "contraction_transpose.md",
                               [&](std::ostream& o) { write_contraction_md(rows, true, o); }));
    results["rows"] = rows.size();
  } else {
    const auto study = run_convergence_study(cfg);
    files.push_back(write_file(dir, "convergence.csv",
                               [&](std::ostream& o) { write_convergence_csv(study, o); }));
    files.push_back(write_file(dir, "convergence.md",
                               [&](std::ostream& o) { write_convergence_md(study, cfg, o); }));
    int unconverged = 0;
    for (const auto& r : study.rows) unconverged += r.converged ? 0 : 1;
    results["rows"] = study.rows.size();
    results["unconverged"] = unconverged;
    if (cfg.emit_field_level > 0) {
      const int k = cfg.emit_field_level;
      const SolveOutcome s =
          solve_example(example_of(cfg.example), cfg.epsilon_list.front(), cfg.beta_list.front(), k, cfg);
      files.push_back(write_file(dir, "solution_field_level" + std::to_string(k) + ".csv",
                                 [&](std::ostream& o) {
                                   emit_solution_field(s.mesh, s.y, s.p, s.problem.y, s.problem.p, o);
                                 }));
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json manifest;
  manifest["tool"] = "dg-optctrl";
  manifest["version"] = kVersion;
  manifest["config"] = config_to_json(cfg);
  manifest["results"] = results;
  manifest["wall_seconds"] = seconds;
  json names = json::array();
  for (const auto& f : files) names.push_back(f.filename().string());
  manifest["files"] = names;
  files.push_back(write_file(dir, "manifest.json", [&](std::ostream& o) { o << manifest.dump(2) << '\n'; }));
  return files;
}

}  // namespace dgoc
