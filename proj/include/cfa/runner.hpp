#pragma once

#include <string>
#include <vector>

#include "cfa/config.hpp"
#include "cfa/core.hpp"
#include "cfa/tuner.hpp"

namespace cfa::runner {

// %.17g, enough digits to round-trip a double exactly.
std::string format_double(double v);

// Comment block prepended to every emitted file: the fully resolved config
// (compact JSON on one line) plus the experiment seed.  Any result file can
// be rerun from its own header.
std::string header_block(const config::ExperimentConfig& config);

// Recover the config embedded by header_block from an emitted file.
config::ExperimentConfig parse_embedded_config(const std::string& path);

// CRN objective for the energy problem: mean policy cost over n paths with
// child seeds of the given master.  theta is the tunable vector under the
// config's theta_mode.
tuner::Objective make_energy_objective(const config::ExperimentConfig& config,
                                       int workers = 1);

struct ComparisonReport {
  PolicyEvaluation baseline;  // theta = 1
  PolicyEvaluation tuned;
  std::vector<double> theta_star;
  double improvement_pct = 0.0;  // positive when the tuned policy is cheaper
  double t_stat = 0.0;
  double p_value = 0.0;  // one-sided, H1: tuned cheaper than baseline
};

// Roll one trajectory per requested seed and write trajectory_<i>.csv.
// Returns the paths written.
std::vector<std::string> run_simulate(const config::ExperimentConfig& config,
                                      const std::string& out_dir);

// Evaluate the policy at theta0 on eval_paths CRN paths; writes
// evaluation.csv with the per-path costs.
PolicyEvaluation run_evaluate(const config::ExperimentConfig& config,
                              const std::string& out_dir, int workers);

// SPSA-tune theta from theta0; writes theta_star.txt and tune_trace.csv.
tuner::TuneResult run_tune(const config::ExperimentConfig& config,
                           const std::string& out_dir, int workers);

// Paired comparison of theta_star against the theta = 1 baseline on
// validation-domain seeds (disjoint from tuning seeds by construction and
// checked here); writes compare.csv.
ComparisonReport run_compare(const config::ExperimentConfig& config,
                             const std::vector<double>& theta_star,
                             const std::string& out_dir, int workers);

// Bandit and shortest-path runs boil down to a grid search over theta;
// writes grid.csv and returns the table.
tuner::GridResult run_grid(const config::ExperimentConfig& config,
                           const std::string& out_dir);

}  // namespace cfa::runner
