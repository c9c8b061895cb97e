#include "cfa/bandit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cfa::bandit {

void BanditBelief::observe(int arm, double reward) {
  sum_[arm] += reward;
  sum_sq_[arm] += reward * reward;
  int n = ++count[arm];
  mean[arm] = sum_[arm] / n;
  if (n >= 2) {
    double var = (sum_sq_[arm] - n * mean[arm] * mean[arm]) / (n - 1);
    if (var < 0.0) var = 0.0;
    stdev_of_mean[arm] = std::sqrt(var / n);
  } else {
    stdev_of_mean[arm] = 0.0;
  }
}

int ucb_policy(const BanditBelief& belief, double theta) {
  if (belief.arms() == 0) throw std::invalid_argument("no arms");
  for (int i = 0; i < belief.arms(); ++i)
    if (belief.count[i] == 0) return i;  // forced initialization
  int best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < belief.arms(); ++i) {
    double score = belief.mean[i] + theta * belief.stdev_of_mean[i];
    if (score > best_score) {  // strict: ties keep the lowest index
      best_score = score;
      best = i;
    }
  }
  return best;
}

double simulate_bandit(const BanditTestbed& testbed, double theta,
                       std::uint64_t seed) {
  const int arms = static_cast<int>(testbed.true_means.size());
  if (arms < 1) throw std::invalid_argument("testbed needs at least one arm");
  Rng rng(seed);
  BanditBelief belief(arms);
  double cumulative = 0.0;
  for (int t = 0; t < testbed.horizon; ++t) {
    int arm;
    if (t < 2 * arms) arm = t % arms;  // two round-robin sweeps
    else arm = ucb_policy(belief, theta);
    double reward = rng.normal(testbed.true_means[arm], testbed.noise_sigma);
    belief.observe(arm, reward);
    cumulative += reward;
  }
  return cumulative;
}

BanditTuneResult bandit_tune(const BanditTestbed& testbed,
                             const std::vector<double>& theta_grid,
                             int n_seeds, std::uint64_t master_seed) {
  if (theta_grid.empty()) throw std::invalid_argument("empty theta grid");
  if (n_seeds < 1) throw std::invalid_argument("n_seeds must be >= 1");
  BanditTuneResult result;
  result.rewards_by_theta.resize(theta_grid.size());
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < theta_grid.size(); ++k) {
    auto& rewards = result.rewards_by_theta[k];
    rewards.reserve(n_seeds);
    double total = 0.0;
    for (int i = 0; i < n_seeds; ++i) {
      double r = simulate_bandit(testbed, theta_grid[k],
                                 child_seed(master_seed, i));
      rewards.push_back(r);
      total += r;
    }
    double mean = total / n_seeds;
    result.table.emplace_back(theta_grid[k], mean);
    if (mean > best) {
      best = mean;
      result.theta_star = theta_grid[k];
    }
  }
  return result;
}

}  // namespace cfa::bandit
