#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "cfa/rng.hpp"

namespace cfa::tuner {

// Noisy objective: sample-average estimate of the tuning criterion at theta,
// using `n_paths` sample paths drawn from `seed`.  Identical (theta, seed,
// n_paths) must return identical values (common random numbers).
using Objective = std::function<double(const std::vector<double>& theta,
                                       std::uint64_t seed, int n_paths)>;

struct TuneSchedule {
  double a = 0.1;        // step size a_n = a / (n + A)^alpha
  double big_a = 10.0;
  double alpha = 0.602;
  double c = 0.1;        // perturbation c_n = c / n^gamma
  double gamma = 0.101;
  int iterations = 100;
  int batch_paths = 20;        // paths per objective evaluation while tuning
  int validation_paths = 200;  // paths for candidate re-evaluation
  double lo = 0.0;             // search box, component-wise
  double hi = 2.0;
  int smoothing_window = 5;    // iterates averaged when ranking candidates
  int validation_candidates = 5;
};

struct TuneIterate {
  std::vector<double> theta;
  double objective = 0.0;   // mean of the two perturbed evaluations
  double grad_norm = 0.0;
  std::uint64_t seed = 0;   // evaluation seed, shared by both perturbations
};

struct TuneTrace {
  std::vector<TuneIterate> iterates;
  std::vector<std::string> warnings;
};

struct TuneResult {
  std::vector<double> theta_star;
  double validation_objective = 0.0;
  TuneTrace trace;
  bool aborted = false;
  std::string note;
};

std::vector<double> project_box(std::vector<double> theta, double lo, double hi);

struct SpsaEval {
  double f_plus = 0.0;
  double f_minus = 0.0;
};

// Two-sided simultaneous-perturbation gradient estimate.  Both evaluations
// share `eval_seed`; the perturbation stays inside [lo, hi] by clamping the
// center point into [lo + c, hi - c] first.
std::vector<double> spsa_gradient(const Objective& objective,
                                  const std::vector<double>& theta, double c,
                                  Rng& delta_rng, std::uint64_t eval_seed,
                                  int n_paths, double lo, double hi,
                                  SpsaEval* eval = nullptr);

// Projected SPSA descent.  Returns the iterate with the best smoothed
// objective after re-evaluation on a fixed validation seed set, not merely
// the last one.
TuneResult tune(const Objective& objective, std::vector<double> theta0,
                const TuneSchedule& schedule, std::uint64_t master_seed);

// Central-difference gradient oracle, one seed-shared pair per coordinate.
std::vector<double> finite_difference_gradient(const Objective& objective,
                                               const std::vector<double>& theta,
                                               double h, std::uint64_t seed,
                                               int n_paths);

struct GridResult {
  std::vector<double> theta_star;
  double best_objective = 0.0;
  std::vector<std::pair<std::vector<double>, double>> table;
};

// Exhaustive search over the Cartesian product of `axes`, all points
// evaluated with the same seed (CRN); ties go to the earliest point.
GridResult grid_search(const Objective& objective,
                       const std::vector<std::vector<double>>& axes,
                       std::uint64_t master_seed, int n_paths);

// Writes a TuneTrace as CSV (iteration, theta components, objective,
// gradient norm, seed).
std::string trace_to_csv(const TuneTrace& trace);

}  // namespace cfa::tuner
