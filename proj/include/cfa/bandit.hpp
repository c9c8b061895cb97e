#pragma once

#include <cstdint>
#include <vector>

#include "cfa/rng.hpp"

namespace cfa::bandit {

// Per-arm running estimates.  stdev_of_mean is the sample standard
// deviation over that arm's observations divided by sqrt(count), so it
// shrinks as an arm is pulled more.
struct BanditBelief {
  std::vector<double> mean;
  std::vector<double> stdev_of_mean;
  std::vector<int> count;

  explicit BanditBelief(int arms)
      : mean(arms, 0.0), stdev_of_mean(arms, 0.0), count(arms, 0),
        sum_(arms, 0.0), sum_sq_(arms, 0.0) {}

  int arms() const { return static_cast<int>(mean.size()); }
  void observe(int arm, double reward);

 private:
  std::vector<double> sum_;
  std::vector<double> sum_sq_;
};

// Upper-confidence-bound arm choice: argmax of mean + theta * stdev_of_mean,
// ties to the lowest index.  Arms never sampled are forced first, in index
// order.
int ucb_policy(const BanditBelief& belief, double theta);

struct BanditTestbed {
  std::vector<double> true_means;
  double noise_sigma = 1.0;
  int horizon = 100;
};

// Cumulative reward of one UCB run; the first two sweeps pull every arm
// round-robin so sample standard deviations are defined.
double simulate_bandit(const BanditTestbed& testbed, double theta,
                       std::uint64_t seed);

struct BanditTuneResult {
  double theta_star = 0.0;
  std::vector<std::pair<double, double>> table;  // (theta, mean cumulative reward)
  std::vector<std::vector<double>> rewards_by_theta;  // CRN-paired per seed
};

// Mean cumulative reward per theta over `n_seeds` runs with common random
// numbers across thetas; best theta by highest mean (earliest on ties).
BanditTuneResult bandit_tune(const BanditTestbed& testbed,
                             const std::vector<double>& theta_grid,
                             int n_seeds, std::uint64_t master_seed);

}  // namespace cfa::bandit
