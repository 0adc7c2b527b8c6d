// dg-optctrl <contraction|smooth|boundary-layer|interior-layer> --config FILE [options]
#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "dgoc/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DG optimal control experiments"};
  std::string command, config_file, mode, out_dir;
  std::vector<double> eps, beta;
  int levels = 0;
  app.add_option("experiment", command, "contraction | smooth | boundary-layer | interior-layer")
      ->required()
      ->check(CLI::IsMember({"contraction", "smooth", "boundary-layer", "interior-layer"}));
  app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--eps", eps, "diffusion values (override epsilon_list)");
  app.add_option("--beta", beta, "regularization values (override beta_list)");
  app.add_option("--levels", levels, "finest level (overrides max_level)")
      ->check(CLI::PositiveNumber);
  app.add_option("--mode", mode, "preconditioner mode")
      ->check(CLI::IsMember({"mg", "bgs", "exact"}));
  app.add_option("--out", out_dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto kind = dgoc::parse_experiment(command);
    dgoc::ExperimentConfig cfg =
        config_file.empty() ? dgoc::default_config(kind) : dgoc::load_config(config_file, kind);
    if (!eps.empty()) cfg.epsilon_list = eps;
    if (!beta.empty()) cfg.beta_list = beta;
    if (levels > 0) {
      cfg.max_level = levels;
      cfg.min_level = std::min(cfg.min_level, levels);
    }
    if (!mode.empty()) cfg.precond_mode = dgoc::parse_precond_mode(mode);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    for (const auto& f : dgoc::run_experiment(cfg)) std::cout << f.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "dg-optctrl: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
