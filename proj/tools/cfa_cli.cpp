#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfa/config.hpp"
#include "cfa/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "experiment config (JSON)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "override the config's experiment seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--workers", args.workers, "evaluation threads")
      ->check(CLI::PositiveNumber);
}

cfa::config::ExperimentConfig resolve(const CommonArgs& args) {
  auto config = args.config_path.empty()
                    ? cfa::config::default_energy_benchmark()
                    : cfa::config::load_config(args.config_path);
  if (args.seed_set) config.seed = args.seed;
  if (!args.out_dir.empty()) config.output_dir = args.out_dir;
  cfa::config::validate(config);
  return config;
}

int selftest() {
  // Noisy quadratic around 1: the tuner should land within 0.05 of the
  // analytic optimum.
  cfa::tuner::Objective objective = [](const std::vector<double>& theta,
                                       std::uint64_t seed, int n_paths) {
    cfa::Rng rng(seed);
    double sum = 0.0;
    for (int i = 0; i < n_paths; ++i) {
      double f = 0.0;
      for (double t : theta) f += (t - 1.0) * (t - 1.0);
      sum += f + 0.01 * rng.normal();
    }
    return sum / n_paths;
  };
  cfa::tuner::TuneSchedule schedule;
  schedule.iterations = 200;
  schedule.batch_paths = 4;
  schedule.validation_paths = 32;
  schedule.a = 0.5;
  auto result = cfa::tuner::tune(objective, {0.3}, schedule, 7);
  double err = std::abs(result.theta_star[0] - 1.0);
  std::cout << "selftest theta_star=" << result.theta_star[0]
            << " |error|=" << err << (err <= 0.05 ? " ok" : " FAIL") << "\n";
  return err <= 0.05 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parametric cost-function-approximation experiments"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<double> theta_star_arg;

  auto* sim = app.add_subcommand("simulate", "roll trajectories, write CSVs");
  add_common(sim, args);
  auto* tune = app.add_subcommand("tune", "SPSA-tune theta, write theta_star");
  add_common(tune, args);
  auto* eval = app.add_subcommand("evaluate", "evaluate the policy at theta0");
  add_common(eval, args);
  auto* compare =
      app.add_subcommand("compare", "paired comparison of theta_star vs theta=1");
  add_common(compare, args);
  compare->add_option("--theta", theta_star_arg,
                      "tuned theta (repeat per component); tunes first if absent");
  auto* self = app.add_subcommand("selftest", "built-in tuner sanity check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (self->parsed()) return selftest();

    auto config = resolve(args);
    const std::string out = config.output_dir;

    if (sim->parsed()) {
      if (config.problem == "energy") {
        for (const auto& p : cfa::runner::run_simulate(config, out))
          std::cout << "wrote " << p << "\n";
      } else {
        auto grid = cfa::runner::run_grid(config, out);
        std::cout << "theta_star " << grid.theta_star[0] << " objective "
                  << grid.best_objective << "\n";
      }
    } else if (tune->parsed()) {
      if (config.problem == "energy") {
        auto result = cfa::runner::run_tune(config, out, args.workers);
        std::cout << "theta_star";
        for (double v : result.theta_star) std::cout << ' ' << v;
        std::cout << "\nvalidation objective " << result.validation_objective
                  << "\n";
        if (result.aborted) {
          std::cerr << "tuning aborted: " << result.note << "\n";
          return 1;
        }
      } else {
        auto grid = cfa::runner::run_grid(config, out);
        std::cout << "theta_star " << grid.theta_star[0] << " objective "
                  << grid.best_objective << "\n";
      }
    } else if (eval->parsed()) {
      auto result = cfa::runner::run_evaluate(config, out, args.workers);
      std::cout << "mean " << result.mean << " stderr " << result.std_error
                << " over " << result.n_paths << " paths\n";
    } else if (compare->parsed()) {
      std::vector<double> theta = theta_star_arg;
      if (theta.empty())
        theta = cfa::runner::run_tune(config, out, args.workers).theta_star;
      auto report = cfa::runner::run_compare(config, theta, out, args.workers);
      std::cout << "baseline " << report.baseline.mean << " tuned "
                << report.tuned.mean << " improvement "
                << report.improvement_pct << "% p=" << report.p_value << "\n";
    }
  } catch (const cfa::config::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
