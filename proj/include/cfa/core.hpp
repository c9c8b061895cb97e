#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cfa/rng.hpp"

namespace cfa {

// A sequential decision problem: state, decision, exogenous information,
// transition, per-period contribution and a feasibility check.  The
// exogenous sampler sees only the period index; sample paths are generated
// ahead of the simulation, so realizations cannot depend on decisions.
template <typename P>
concept SequentialProblem = requires(const P& p, const typename P::State& s,
                                     const typename P::Decision& x,
                                     const typename P::Exogenous& w, Rng& rng,
                                     int t) {
  { p.horizon() } -> std::convertible_to<int>;
  { p.initial_state() } -> std::same_as<typename P::State>;
  { p.sample_exogenous(t, rng) } -> std::same_as<typename P::Exogenous>;
  { p.transition(s, x, w) } -> std::same_as<typename P::State>;
  { p.contribution(s, x) } -> std::convertible_to<double>;
  { p.check_decision(s, x) } -> std::same_as<std::vector<std::string>>;
};

template <typename W>
struct SamplePath {
  int horizon = 0;
  std::vector<W> realizations;  // realizations[t] arrives after decision t
  std::uint64_t seed = 0;
};

template <typename S, typename X>
struct Trajectory {
  std::vector<S> states;          // S_0 .. S_T
  std::vector<X> decisions;       // x_0 .. x_{T-1}
  std::vector<double> costs;      // per-period contributions
  double total_cost = 0.0;        // sum of costs, in period order
};

struct PolicyEvaluation {
  double mean = 0.0;
  double std_error = 0.0;
  std::vector<double> path_costs;
  int n_paths = 0;
  std::uint64_t master_seed = 0;
};

// Raised when a policy emits a decision the problem rejects.
class SimulationError : public std::runtime_error {
 public:
  SimulationError(int period, std::vector<std::string> violations)
      : std::runtime_error(format(period, violations)),
        period_(period),
        violations_(std::move(violations)) {}

  int period() const { return period_; }
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string format(int period, const std::vector<std::string>& v) {
    std::string msg =
        "infeasible decision at period " + std::to_string(period);
    for (const auto& s : v) msg += "; " + s;
    return msg;
  }
  int period_;
  std::vector<std::string> violations_;
};

template <SequentialProblem P>
SamplePath<typename P::Exogenous> generate_sample_path(const P& problem,
                                                       std::uint64_t seed,
                                                       int horizon) {
  if (horizon < 1) throw std::invalid_argument("sample path horizon must be >= 1");
  SamplePath<typename P::Exogenous> path;
  path.horizon = horizon;
  path.seed = seed;
  path.realizations.reserve(horizon);
  Rng rng(seed);
  for (int t = 0; t < horizon; ++t)
    path.realizations.push_back(problem.sample_exogenous(t, rng));
  return path;
}

template <SequentialProblem P, typename Policy>
Trajectory<typename P::State, typename P::Decision> simulate_policy(
    const Policy& policy, const P& problem,
    const SamplePath<typename P::Exogenous>& path,
    typename P::State initial_state) {
  const int horizon = problem.horizon();
  if (path.horizon < horizon)
    throw std::invalid_argument("sample path shorter than problem horizon");

  Trajectory<typename P::State, typename P::Decision> traj;
  traj.states.reserve(horizon + 1);
  traj.decisions.reserve(horizon);
  traj.costs.reserve(horizon);
  traj.states.push_back(std::move(initial_state));

  for (int t = 0; t < horizon; ++t) {
    const auto& state = traj.states.back();
    auto decision = policy(state);
    auto violations = problem.check_decision(state, decision);
    if (!violations.empty()) throw SimulationError(t, std::move(violations));
    double cost = problem.contribution(state, decision);
    auto next = problem.transition(state, decision, path.realizations[t]);
    traj.decisions.push_back(std::move(decision));
    traj.costs.push_back(cost);
    traj.total_cost += cost;
    traj.states.push_back(std::move(next));
  }
  return traj;
}

// Monte-Carlo estimate of the policy's expected total cost.  Path i always
// runs on child_seed(master_seed, i), so two policies evaluated with the
// same master seed see identical exogenous realizations (common random
// numbers).  Paths fan out over `workers` threads; results are merged in
// path-index order, so the output does not depend on scheduling.
template <SequentialProblem P, typename Policy>
PolicyEvaluation evaluate_policy(const Policy& policy, const P& problem,
                                 int n_paths, std::uint64_t master_seed,
                                 int workers = 1) {
  if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
  PolicyEvaluation eval;
  eval.n_paths = n_paths;
  eval.master_seed = master_seed;
  eval.path_costs.assign(n_paths, 0.0);

  std::vector<std::string> errors(n_paths);
  auto run_range = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      try {
        auto path = generate_sample_path(problem, child_seed(master_seed, i),
                                         problem.horizon());
        auto traj =
            simulate_policy(policy, problem, path, problem.initial_state());
        eval.path_costs[i] = traj.total_cost;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };

  if (workers <= 1 || n_paths == 1) {
    run_range(0, n_paths);
  } else {
    int n_workers = std::min(workers, n_paths);
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) {
      int begin = static_cast<int>(static_cast<std::int64_t>(n_paths) * w / n_workers);
      int end = static_cast<int>(static_cast<std::int64_t>(n_paths) * (w + 1) / n_workers);
      pool.emplace_back(run_range, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  for (int i = 0; i < n_paths; ++i)
    if (!errors[i].empty())
      throw std::runtime_error("path " + std::to_string(i) + ": " + errors[i]);

  double sum = 0.0;
  for (double c : eval.path_costs) sum += c;
  eval.mean = sum / n_paths;
  double ss = 0.0;
  for (double c : eval.path_costs) ss += (c - eval.mean) * (c - eval.mean);
  eval.std_error =
      n_paths > 1 ? std::sqrt(ss / (n_paths - 1)) / std::sqrt(double(n_paths))
                  : 0.0;
  return eval;
}

}  // namespace cfa
