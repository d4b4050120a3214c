// zog: zeroth-order equilibrium finding experiments.
//
//   zog solve --game unit_demand --players 5 --items 5 --estimator jpspg --out runs/a
//   zog plot --x wall_time_s --out fig.svg runs/a/metrics.csv runs/b/metrics.csv
//
// Settings may also come from a flat key = value file passed with --config;
// command-line flags take precedence over the file.

#include <exception>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zog/errors.hpp"
#include "zog/harness.hpp"
#include "zog/plot.hpp"

namespace {

struct SolveFlag {
  const char* name;
  const char* help;
};

constexpr SolveFlag kSolveFlags[] = {
    {"game", "unit_demand, knapsack, sequential, goofspiel, quadratic or first_price"},
    {"players", "number of players"},
    {"items", "items (unit_demand)"},
    {"rounds", "rounds (sequential, goofspiel); 0 picks the game default"},
    {"hidden", "hidden layer width of each strategy network"},
    {"estimator", "spg or jpspg"},
    {"scheme", "sp, fd or cd"},
    {"dynamics", "sga, oga or eg"},
    {"optimizer", "adabelief or sgd"},
    {"lr", "stepsize / learning rate"},
    {"beta", "OGA optimism (defaults to lr)"},
    {"sigma", "perturbation scale"},
    {"batch", "perturbations per iteration"},
    {"iters", "training iterations"},
    {"trials", "independent seeded trials"},
    {"eval-every", "iterations between exploitability evaluations"},
    {"br-iters", "best-response training iterations"},
    {"br-lr", "best-response learning rate"},
    {"eval-samples", "game plays per utility estimate"},
    {"seed", "base seed"},
    {"eval-initial", "also evaluate the untrained profile (true/false)"},
    {"out", "output directory"},
};

int run_solve(const std::string& config_path, const std::map<std::string, std::string>& flags) {
  zog::ExperimentConfig cfg;
  if (!config_path.empty()) {
    for (const auto& [key, value] : zog::read_config_file(config_path)) {
      zog::apply_setting(cfg, key, value);
    }
  }
  for (const auto& [key, value] : flags) zog::apply_setting(cfg, key, value);
  cfg.validate();

  const auto result = zog::run_experiment(cfg);
  for (const auto& row : result.rows) {
    std::cout << "trial " << row.trial << " iter " << row.iteration << " evals "
              << row.utility_evals << " time " << zog::format_real(row.wall_time_s)
              << "s exploitability " << zog::format_real(row.exploitability_clamped) << "\n";
  }
  std::cout << "wrote " << cfg.out << "/metrics.csv\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeroth-order equilibrium finding with joint or per-player perturbations"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "train strategies and record exploitability");
  std::string config_path;
  solve->add_option("--config", config_path, "flat key = value settings file");
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  for (const auto& flag : kSolveFlags) {
    options[flag.name] = solve->add_option(std::string("--") + flag.name, values[flag.name],
                                           flag.help);
  }

  auto* plot = app.add_subcommand("plot", "plot mean exploitability with standard-error bands");
  std::string axis = "iteration";
  std::string plot_out;
  std::vector<std::string> csvs;
  plot->add_option("--x", axis, "x axis: iteration or wall_time_s")
      ->check(CLI::IsMember({"iteration", "wall_time_s"}));
  plot->add_option("--out", plot_out, "output SVG path")->required();
  plot->add_option("csv", csvs, "metrics CSV files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*solve) {
      std::map<std::string, std::string> given;
      for (const auto& [name, opt] : options) {
        if (opt->count() > 0) given[name] = values[name];
      }
      return run_solve(config_path, given);
    }
    zog::emit_plot(std::vector<std::filesystem::path>(csvs.begin(), csvs.end()),
                   axis == "iteration" ? zog::PlotAxis::kIteration : zog::PlotAxis::kWallTime,
                   plot_out);
    std::cout << "wrote " << plot_out << "\n";
    return 0;
  } catch (const zog::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
