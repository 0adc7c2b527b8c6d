#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgoc/experiments.hpp"

using namespace dgoc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string joined(const std::vector<std::string>& cols) {
  std::string s;
  for (std::size_t i = 0; i < cols.size(); ++i) s += (i ? "," : "") + cols[i];
  return s;
}

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("dgoc_test_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentConfig tiny(ExperimentKind kind, const fs::path& dir) {
  ExperimentConfig c = default_config(kind);
  c.epsilon_list = {1e-3};
  c.min_level = 1;
  c.max_level = 3;
  c.smoothing_list = {2, 4};
  c.contraction_seeds = 2;
  c.output_dir = dir.string();
  return c;
}

}  // namespace

TEST_CASE("experiment names") {
  for (ExperimentKind k : {ExperimentKind::contraction, ExperimentKind::smooth,
                           ExperimentKind::boundary_layer, ExperimentKind::interior_layer})
    CHECK(parse_experiment(experiment_name(k)) == k);
  CHECK(parse_experiment("boundary_layer") == ExperimentKind::boundary_layer);
  CHECK_THROWS_AS(parse_experiment("spiral"), std::invalid_argument);
  CHECK(example_of(ExperimentKind::interior_layer) == ExampleId::interior_layer);
  CHECK_THROWS_AS(example_of(ExperimentKind::contraction), std::invalid_argument);
}

TEST_CASE("default configuration") {
  const ExperimentConfig c = default_config(ExperimentKind::smooth);
  CHECK(c.epsilon_list == std::vector<double>{1e-1, 1e-3, 1e-6, 1e-9});
  CHECK(c.beta_list == std::vector<double>{1.0});
  CHECK(c.m1 == 8);
  CHECK(c.m2 == 8);
  CHECK(c.sigma == 10.0);
  CHECK(c.tol == 1e-6);
  CHECK(c.max_level == 8);
  CHECK(c.precond_mode == PrecondMode::mg);
  CHECK(c.load_rule == LoadRule::strong);
  CHECK(c.flux_term == FluxTerm::omitted);
  CHECK_NOTHROW(c.validate());
  CHECK(default_config(ExperimentKind::contraction).max_level == 7);
  CHECK(default_config(ExperimentKind::contraction).smoothing_list == std::vector<int>{2, 4, 8});
  const SubdomainBox ib = default_config(ExperimentKind::interior_layer).box();
  CHECK(ib.x_min == 0.6);
  CHECK(ib.x_max == 1.0);
  const SubdomainBox sb = c.box();
  CHECK(sb.x_min == 0.25);
  CHECK(sb.y_max == 0.75);
}

TEST_CASE("json configuration") {
  SUBCASE("overrides and round trip") {
    const json j = {{"epsilon_list", {1e-2}}, {"max_level", 4}, {"precond_mode", "bgs"},
                    {"sigma", 6.0},           {"load_rule", "weak"}, {"local_box", {0.1, 0.9, 0.2, 0.8}}};
    const ExperimentConfig c = config_from_json(j, ExperimentKind::boundary_layer);
    CHECK(c.example == ExperimentKind::boundary_layer);
    CHECK(c.epsilon_list == std::vector<double>{1e-2});
    CHECK(c.max_level == 4);
    CHECK(c.precond_mode == PrecondMode::bgs_single_sweep);
    CHECK(c.sigma == 6.0);
    CHECK(c.load_rule == LoadRule::weak);
    CHECK(c.box().y_min == 0.2);
    const ExperimentConfig back = config_from_json(config_to_json(c), ExperimentKind::boundary_layer);
    CHECK(config_to_json(back) == config_to_json(c));
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(config_from_json(json{{"epsilon", 1.0}}, ExperimentKind::smooth),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"example", "smooth"}}, ExperimentKind::interior_layer),
                    std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json::array(), ExperimentKind::smooth), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(json{{"precond_mode", "ilu"}}, ExperimentKind::smooth),
                    std::invalid_argument);
    CHECK_THROWS(config_from_json(json{{"max_level", "seven"}}, ExperimentKind::smooth));
  }
  SUBCASE("validation") {
    ExperimentConfig c = default_config(ExperimentKind::smooth);
    c.min_level = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = default_config(ExperimentKind::smooth);
    c.epsilon_list = {};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = default_config(ExperimentKind::smooth);
    c.precond_mode = PrecondMode::exact;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.max_level = kExactModeMaxLevel;
    CHECK_NOTHROW(c.validate());
    c.local_box = std::array<double, 4>{0.5, 0.4, 0.0, 1.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  }
  SUBCASE("file loading") {
    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    std::ofstream(dir / "good.json") << R"({"max_level": 3, "tol": 1e-8})";
    std::ofstream(dir / "bad.json") << "{ not json";
    CHECK(load_config(dir / "good.json", ExperimentKind::smooth).tol == 1e-8);
    CHECK_THROWS_AS(load_config(dir / "bad.json", ExperimentKind::smooth), std::runtime_error);
    CHECK_THROWS_AS(load_config(dir / "missing.json", ExperimentKind::smooth), std::runtime_error);
  }
}

TEST_CASE("golden csv columns") {
  CHECK(joined(contraction_csv_columns()) ==
        "epsilon,beta,level,m,cycle,contraction,iterations,diverged");
  CHECK(joined(convergence_csv_columns()) ==
        "epsilon,beta,level,h,dofs,iterations,converged,relres,true_relres,"
        "l2_y,l2_y_order,eps_y,eps_y_order,l2_p,l2_p_order,eps_p,eps_p_order,"
        "local_l2_y,local_l2_y_order,local_h1_y,local_h1_y_order,"
        "local_l2_p,local_l2_p_order,local_h1_p,local_h1_p_order");
}

TEST_CASE("contraction writers") {
  const std::vector<ContractionRow> rows = {
      {1e-3, 1.0, 2, 2, false, 0.25, 10, false},
      {1e-3, 1.0, 2, 4, false, 0.0625, 10, false},
      {1e-3, 1.0, 2, 2, true, 0.26, 10, false},
  };
  std::ostringstream csv;
  write_contraction_csv(rows, csv);
  CHECK(first_line(csv.str()) == joined(contraction_csv_columns()));
  CHECK(count_lines(csv.str()) == 4);
  CHECK(csv.str().find("transpose") != std::string::npos);

  std::ostringstream fwd, tr;
  write_contraction_md(rows, false, fwd);
  write_contraction_md(rows, true, tr);
  CHECK(fwd.str().find("| m=2 | m=4 |") != std::string::npos);
  CHECK(fwd.str().find("6.25e-02") != std::string::npos);
  CHECK(tr.str().find("2.60e-01") != std::string::npos);
  // columns come from the rows of the requested cycle only
  CHECK(tr.str().find("m=4") == std::string::npos);
}

TEST_CASE("convergence writers") {
  ConvergenceStudy st;
  for (int k = 1; k <= 3; ++k) {
    ConvergenceRow r;
    r.epsilon = 1e-3;
    r.beta = 1.0;
    r.dofs = 2 * 6 * (1 << (2 * k + 1));
    r.iterations = 10 + k;
    r.converged = k != 3;
    r.errors.level = k;
    r.errors.h = std::pow(0.5, k);
    r.errors.l2_y = std::pow(4.0, -k);
    r.errors.l2_p = r.errors.eps_y = r.errors.eps_p = std::pow(2.0, -k);
    r.errors.local_l2_y = r.errors.local_h1_y = r.errors.local_l2_p = r.errors.local_h1_p = 1.0;
    st.rows.push_back(r);
  }
  CHECK(st.iterations(1e-3, 1.0, 2) == 12);
  CHECK(st.iterations(1e-3, 1.0, 9) == -1);
  CHECK(st.report(1e-3, 1.0).levels.size() == 3);
  CHECK(st.report(1e-1, 1.0).levels.empty());

  std::ostringstream csv;
  write_convergence_csv(st, csv);
  CHECK(first_line(csv.str()) == joined(convergence_csv_columns()));
  CHECK(count_lines(csv.str()) == 4);
  CHECK(csv.str().find(",2.00,") != std::string::npos);

  std::ostringstream md;
  write_convergence_md(st, default_config(ExperimentKind::smooth), md);
  CHECK(md.str().find("### Global") != std::string::npos);
  CHECK(md.str().find("### Local, box [0.25,0.75]x[0.25,0.75]") != std::string::npos);
  CHECK(md.str().find("MINRES iterations (mg)") != std::string::npos);
  CHECK(md.str().find("13 (not converged)") != std::string::npos);
  CHECK(md.str().find("| 2.00 |") != std::string::npos);
}

TEST_CASE("solution field output") {
  const Mesh m = build_mesh(2);
  const ExampleSpec spec = example_spec(ExampleId::smooth, 1e-3);
  std::ostringstream os;
  emit_solution_field(m, Vector::Zero(m.num_dofs()), Vector::Zero(m.num_dofs()), spec.y, spec.p, os);
  const std::string s = os.str();
  CHECK(first_line(s) == "field,element,local,x,y,value");
  CHECK(count_lines(s) == 1 + 4 * 3 * m.num_elements());
  std::istringstream is(s);
  std::string line;
  std::getline(is, line);
  int zero_rows = 0;
  while (std::getline(is, line))
    if (line.rfind("y_h,", 0) == 0 || line.rfind("p_h,", 0) == 0) {
      CHECK(std::stod(line.substr(line.rfind(',') + 1)) == 0.0);
      ++zero_rows;
    }
  CHECK(zero_rows == 2 * 3 * m.num_elements());
}

TEST_CASE("boundary layer solve is close to the exact solution away from the layer") {
  ExperimentConfig cfg = default_config(ExperimentKind::boundary_layer);
  const SolveOutcome s = solve_example(ExampleId::boundary_layer, 1e-3, 1.0, 5, cfg);
  CHECK(s.krylov.converged);
  const LevelErrors e = measure_errors(s, 5, cfg);
  CHECK(e.local_l2_y < 1e-2);
  CHECK(e.local_l2_p < 1e-2);
  CHECK(e.local_l2_y < e.l2_y);
}

TEST_CASE("run_experiment writes a manifest and is deterministic") {
  SUBCASE("convergence") {
    const fs::path a = scratch("conv_a"), b = scratch("conv_b");
    ExperimentConfig ca = tiny(ExperimentKind::smooth, a), cb = tiny(ExperimentKind::smooth, b);
    ca.emit_field_level = 2;
    cb.emit_field_level = 2;
    const auto files = run_experiment(ca);
    run_experiment(cb);
    CHECK(files.size() == 4);
    for (const char* f : {"convergence.csv", "convergence.md", "solution_field_level2.csv", "manifest.json"})
      CHECK(fs::exists(a / f));
    CHECK(slurp(a / "convergence.csv") == slurp(b / "convergence.csv"));
    CHECK(slurp(a / "solution_field_level2.csv") == slurp(b / "solution_field_level2.csv"));
    const json man = json::parse(slurp(a / "manifest.json"));
    CHECK(man["tool"] == "dg-optctrl");
    CHECK(man["version"] == kVersion);
    CHECK(man["results"]["rows"] == 3);
    CHECK(man["results"]["unconverged"] == 0);
    CHECK(man["files"].size() == 3);
    CHECK(config_to_json(config_from_json(man["config"], ExperimentKind::smooth)) == man["config"]);
  }
  SUBCASE("contraction") {
    const fs::path a = scratch("ctr_a"), b = scratch("ctr_b");
    run_experiment(tiny(ExperimentKind::contraction, a));
    run_experiment(tiny(ExperimentKind::contraction, b));
    for (const char* f : {"contraction.csv", "contraction_forward.md", "contraction_transpose.md", "manifest.json"})
      CHECK(fs::exists(a / f));
    CHECK(slurp(a / "contraction.csv") == slurp(b / "contraction.csv"));
    // 3 levels x 2 smoothing counts x 2 cycles
    CHECK(count_lines(slurp(a / "contraction.csv")) == 1 + 12);
  }
}

TEST_CASE("command line tool") {
  const char* cli = std::getenv("DGOC_CLI");
  if (!cli) {
    MESSAGE("DGOC_CLI not set, skipping");
    return;
  }
  const fs::path dir = scratch("cli");
  fs::create_directories(dir);
  std::ofstream(dir / "cfg.json") << R"({"min_level": 1, "max_level": 5, "epsilon_list": [1e-1]})";
  const std::string base = std::string(cli) + " smooth --config " + (dir / "cfg.json").string();
  const std::string ok = base + " --eps 1e-9 --levels 2 --mode bgs --out " + (dir / "out").string() +
                         " > " + (dir / "log.txt").string();
  REQUIRE(std::system(ok.c_str()) == 0);
  const json man = json::parse(slurp(dir / "out" / "manifest.json"));
  CHECK(man["config"]["max_level"] == 2);
  CHECK(man["config"]["precond_mode"] == "bgs");
  CHECK(man["config"]["epsilon_list"] == json::array({1e-9}));
  CHECK(man["results"]["rows"] == 2);
  CHECK(slurp(dir / "log.txt").find("manifest.json") != std::string::npos);

  const std::string quiet = " > /dev/null 2>&1";
  CHECK(std::system((base + " --mode ilu" + quiet).c_str()) != 0);
  CHECK(std::system((std::string(cli) + " spiral" + quiet).c_str()) != 0);
  std::ofstream(dir / "typo.json") << R"({"max_levle": 3})";
  const int typo = std::system((std::string(cli) + " smooth --config " + (dir / "typo.json").string() + quiet).c_str());
  CHECK(WEXITSTATUS(typo) == 1);
}
