#include "cfa/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "cfa/bandit.hpp"
#include "cfa/lookahead.hpp"
#include "cfa/spath.hpp"
#include "cfa/stats.hpp"

namespace cfa::runner {

namespace {

std::ofstream open_out(const std::string& dir, const std::string& name,
                       std::string* path_out = nullptr) {
  std::filesystem::create_directories(dir);
  std::string path = dir + "/" + name;
  std::ofstream out(path, std::ios::binary);  // binary: byte-identical reruns
  if (!out) throw std::runtime_error("cannot write " + path);
  if (path_out) *path_out = path;
  return out;
}

energy::EnergyProblem make_problem(const config::ExperimentConfig& c) {
  return energy::EnergyProblem(c.energy);
}

lookahead::CfaPolicy make_policy(const config::ExperimentConfig& c,
                                 const std::vector<double>& theta) {
  return lookahead::CfaPolicy(
      config::expand_theta(c.theta_mode, c.energy.lookahead, theta), c.energy);
}

void require_energy(const config::ExperimentConfig& c, const char* op) {
  if (c.problem != "energy")
    throw std::runtime_error(std::string(op) + " needs problem = energy, config has " +
                             c.problem);
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string header_block(const config::ExperimentConfig& config) {
  std::string compact;
  {
    // Re-dump compactly via the config serializer (it emits indented JSON;
    // strip newlines so the whole config sits on one header line).
    std::string pretty = config::to_json_text(config);
    compact.reserve(pretty.size());
    for (char ch : pretty)
      if (ch != '\n') compact.push_back(ch);
  }
  std::ostringstream out;
  out << "# config: " << compact << "\n";
  out << "# seed: " << config.seed << "\n";
  return out.str();
}

config::ExperimentConfig parse_embedded_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  const std::string tag = "# config: ";
  while (std::getline(in, line))
    if (line.rfind(tag, 0) == 0)
      return config::parse_config(line.substr(tag.size()));
  throw std::runtime_error("no embedded config header in " + path);
}

tuner::Objective make_energy_objective(const config::ExperimentConfig& config,
                                       int workers) {
  config::validate(config);
  energy::EnergyProblem problem = make_problem(config);
  auto c = config;
  return [problem, c, workers](const std::vector<double>& theta,
                               std::uint64_t seed, int n_paths) {
    auto policy = make_policy(c, theta);
    return evaluate_policy(policy, problem, n_paths, seed, workers).mean;
  };
}

std::vector<std::string> run_simulate(const config::ExperimentConfig& config,
                                      const std::string& out_dir) {
  require_energy(config, "simulate");
  energy::EnergyProblem problem = make_problem(config);
  auto policy = make_policy(config, config.theta0);
  const std::uint64_t master = domain_seed(config.seed, SeedDomain::Simulate);
  const std::string header = header_block(config);

  std::vector<std::string> written;
  for (int i = 0; i < config.simulate_paths; ++i) {
    std::uint64_t seed = child_seed(master, i);
    auto path = generate_sample_path(problem, seed, problem.horizon());
    auto traj = simulate_policy(policy, problem, path, problem.initial_state());

    std::string file_path;
    auto out = open_out(out_dir, "trajectory_" + std::to_string(i) + ".csv",
                        &file_path);
    out << header << "# path_seed: " << seed << "\n";
    out << "t,battery,demand,wind,price,wind_to_demand,wind_to_battery,"
           "grid_to_demand,grid_to_battery,battery_to_demand,contribution,"
           "cumulative\n";
    double cum = 0.0;
    for (std::size_t t = 0; t < traj.decisions.size(); ++t) {
      const auto& s = traj.states[t];
      const auto& x = traj.decisions[t];
      cum += traj.costs[t];
      out << t << ',' << format_double(s.battery) << ','
          << format_double(s.demand) << ',' << format_double(s.wind) << ','
          << format_double(s.price) << ',' << format_double(x.wind_to_demand)
          << ',' << format_double(x.wind_to_battery) << ','
          << format_double(x.grid_to_demand) << ','
          << format_double(x.grid_to_battery) << ','
          << format_double(x.battery_to_demand) << ','
          << format_double(traj.costs[t]) << ',' << format_double(cum) << '\n';
    }
    written.push_back(file_path);
  }
  return written;
}

PolicyEvaluation run_evaluate(const config::ExperimentConfig& config,
                              const std::string& out_dir, int workers) {
  require_energy(config, "evaluate");
  energy::EnergyProblem problem = make_problem(config);
  auto policy = make_policy(config, config.theta0);
  const std::uint64_t master = domain_seed(config.seed, SeedDomain::Test);
  auto eval = evaluate_policy(policy, problem, config.eval_paths, master, workers);

  auto out = open_out(out_dir, "evaluation.csv");
  out << header_block(config);
  out << "# mean: " << format_double(eval.mean) << "\n";
  out << "# std_error: " << format_double(eval.std_error) << "\n";
  out << "path,cost\n";
  for (int i = 0; i < eval.n_paths; ++i)
    out << i << ',' << format_double(eval.path_costs[i]) << '\n';
  return eval;
}

tuner::TuneResult run_tune(const config::ExperimentConfig& config,
                           const std::string& out_dir, int workers) {
  require_energy(config, "tune");
  auto objective = make_energy_objective(config, workers);
  auto result = tuner::tune(objective, config.theta0, config.schedule, config.seed);

  auto trace = open_out(out_dir, "tune_trace.csv");
  trace << header_block(config) << tuner::trace_to_csv(result.trace);

  auto out = open_out(out_dir, "theta_star.txt");
  out << header_block(config);
  for (std::size_t i = 0; i < result.theta_star.size(); ++i)
    out << "theta_" << i << " = " << format_double(result.theta_star[i]) << "\n";
  out << "validation_objective = " << format_double(result.validation_objective)
      << "\n";
  if (result.aborted) out << "aborted = true\nnote = " << result.note << "\n";
  return result;
}

ComparisonReport run_compare(const config::ExperimentConfig& config,
                             const std::vector<double>& theta_star,
                             const std::string& out_dir, int workers) {
  require_energy(config, "compare");
  const std::uint64_t tune_master = domain_seed(config.seed, SeedDomain::Tune);
  const std::uint64_t validate_master =
      domain_seed(config.seed, SeedDomain::Validate);

  // Tuning evaluates on children of the tune-domain master, validation on
  // children of the validate-domain master; materialize both sets and fail
  // hard if they collide.
  std::set<std::uint64_t> tune_seeds;
  for (int n = 0; n <= config.schedule.iterations; ++n) {
    std::uint64_t eval_seed = child_seed(tune_master, n);
    for (int i = 0; i < config.schedule.batch_paths; ++i)
      tune_seeds.insert(child_seed(eval_seed, i));
  }
  for (int i = 0; i < config.eval_paths; ++i)
    if (tune_seeds.count(child_seed(validate_master, i)))
      throw std::runtime_error("tuning and validation path seeds overlap");

  energy::EnergyProblem problem = make_problem(config);
  const int dim = config::theta_dimension(config.theta_mode, config.energy.lookahead);
  auto baseline_policy = make_policy(config, std::vector<double>(dim, 1.0));
  auto tuned_policy = make_policy(config, theta_star);

  ComparisonReport report;
  report.theta_star = theta_star;
  report.baseline = evaluate_policy(baseline_policy, problem, config.eval_paths,
                                    validate_master, workers);
  report.tuned = evaluate_policy(tuned_policy, problem, config.eval_paths,
                                 validate_master, workers);
  auto test = stats::paired_t_test(report.tuned.path_costs,
                                   report.baseline.path_costs);
  report.t_stat = test.t_stat;
  report.p_value = test.p_one_sided;
  report.improvement_pct =
      100.0 * (report.baseline.mean - report.tuned.mean) / report.baseline.mean;

  auto out = open_out(out_dir, "compare.csv");
  out << header_block(config);
  out << "# theta_star:";
  for (double v : theta_star) out << ' ' << format_double(v);
  out << "\n# baseline_mean: " << format_double(report.baseline.mean)
      << "\n# tuned_mean: " << format_double(report.tuned.mean)
      << "\n# improvement_pct: " << format_double(report.improvement_pct)
      << "\n# t_stat: " << format_double(report.t_stat)
      << "\n# p_value_one_sided: " << format_double(report.p_value) << "\n";
  out << "path,baseline_cost,tuned_cost,difference\n";
  for (int i = 0; i < config.eval_paths; ++i)
    out << i << ',' << format_double(report.baseline.path_costs[i]) << ','
        << format_double(report.tuned.path_costs[i]) << ','
        << format_double(report.tuned.path_costs[i] -
                         report.baseline.path_costs[i])
        << '\n';
  return report;
}

tuner::GridResult run_grid(const config::ExperimentConfig& config,
                           const std::string& out_dir) {
  tuner::Objective objective;
  std::vector<double> grid;
  std::uint64_t master = domain_seed(config.seed, SeedDomain::Tune);
  int n_paths = 0;

  if (config.problem == "bandit") {
    const auto exp = config.bandit;
    // Rewards are maximized; negate so the shared grid search minimizes.
    objective = [exp](const std::vector<double>& theta, std::uint64_t seed,
                      int n) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        sum += bandit::simulate_bandit(exp.testbed, theta[0], child_seed(seed, i));
      return -sum / n;
    };
    grid = exp.theta_grid;
    n_paths = exp.n_seeds;
  } else if (config.problem == "shortest-path") {
    const auto exp = config.spath;
    objective = [exp](const std::vector<double>& theta, std::uint64_t seed,
                      int n) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        sum += spath::navigate_simulate(exp.graph, theta[0], exp.origin,
                                        exp.options, child_seed(seed, i))
                   .total();
      return sum / n;
    };
    grid = exp.theta_grid;
    n_paths = exp.n_seeds;
  } else {
    throw std::runtime_error("grid run supports bandit and shortest-path configs");
  }

  auto result = tuner::grid_search(objective, {grid}, master, n_paths);

  auto out = open_out(out_dir, "grid.csv");
  out << header_block(config);
  out << "# theta_star: " << format_double(result.theta_star[0]) << "\n";
  out << "theta,objective\n";
  for (const auto& [point, value] : result.table)
    out << format_double(point[0]) << ',' << format_double(value) << '\n';
  return result;
}

}  // namespace cfa::runner
