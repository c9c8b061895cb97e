#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cfa/bandit.hpp"
#include "cfa/energy.hpp"
#include "cfa/lookahead.hpp"
#include "cfa/spath.hpp"
#include "cfa/tuner.hpp"

namespace cfa::config {

// Validation failure; message names the offending field.  The CLI maps this
// to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class ThetaMode {
  Tied,      // one theta for both demand and wind, all lags
  WindOnly,  // demand thetas pinned at 1, one theta for wind
  Full,      // one theta per (series, lag)
};

std::string theta_mode_name(ThetaMode mode);

struct BanditExperiment {
  cfa::bandit::BanditTestbed testbed;
  std::vector<double> theta_grid;
  int n_seeds = 200;
};

struct SpathExperiment {
  cfa::spath::StochasticGraph graph;
  int origin = 0;
  cfa::spath::NavigateOptions options;
  std::vector<double> theta_grid;
  int n_seeds = 200;
};

struct ExperimentConfig {
  std::string problem;  // "energy" | "bandit" | "shortest-path"
  std::uint64_t seed = 1;
  std::string output_dir = "out";

  energy::EnergyConfig energy;
  ThetaMode theta_mode = ThetaMode::Tied;
  std::vector<double> theta0;  // length must match theta_mode dimension
  tuner::TuneSchedule schedule;
  int eval_paths = 200;   // paths for evaluate/compare
  int simulate_paths = 1; // trajectories written by simulate

  BanditExperiment bandit;
  SpathExperiment spath;
};

// Dimension of the tunable parameter under the given mode.
int theta_dimension(ThetaMode mode, int lookahead);

// Expand a tunable vector into the per-lag ThetaVector the lookahead takes.
cfa::lookahead::ThetaVector expand_theta(ThetaMode mode, int lookahead,
                                         const std::vector<double>& theta);

// Parse from JSON text.  Unknown keys and type mismatches raise ConfigError
// naming the field.  Missing optional blocks fall back to defaults; missing
// required fields are errors.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// Serialize the fully resolved config back to JSON.  parse_config on the
// output reproduces the config exactly (doubles round-trip).
std::string to_json_text(const ExperimentConfig& config);

// The repo's default synthetic benchmark: T=168 hourly periods, H=24,
// diurnal demand and price, gusty wind.
ExperimentConfig default_energy_benchmark();

void validate(const ExperimentConfig& config);

}  // namespace cfa::config
