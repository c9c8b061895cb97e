#include "cfa/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace cfa::tuner {

namespace {

void validate(const TuneSchedule& s, TuneTrace& trace) {
  if (s.a <= 0.0 || s.c <= 0.0)
    throw std::invalid_argument("schedule: a and c must be > 0");
  if (!(s.alpha > 0.5 && s.alpha <= 1.0))
    throw std::invalid_argument("schedule: alpha must be in (0.5, 1]");
  if (!(s.gamma > 0.0))
    throw std::invalid_argument("schedule: gamma must be > 0");
  if (s.iterations < 0)
    throw std::invalid_argument("schedule: iterations must be >= 0");
  if (s.lo > s.hi) throw std::invalid_argument("schedule: lo > hi");
  if (s.alpha - 2.0 * s.gamma <= 0.0)
    trace.warnings.push_back("schedule: alpha - 2*gamma <= 0; asymptotic "
                             "step/perturbation balance is off");
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

std::vector<double> project_box(std::vector<double> theta, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("project_box: lo > hi");
  for (double& t : theta) t = std::clamp(t, lo, hi);
  return theta;
}

std::vector<double> spsa_gradient(const Objective& objective,
                                  const std::vector<double>& theta, double c,
                                  Rng& delta_rng, std::uint64_t eval_seed,
                                  int n_paths, double lo, double hi,
                                  SpsaEval* eval) {
  if (c <= 0.0) throw std::invalid_argument("spsa_gradient: c must be > 0");
  const std::size_t d = theta.size();
  std::vector<double> delta(d);
  for (double& v : delta) v = static_cast<double>(delta_rng.rademacher());

  // Keep both perturbed points inside the box.
  double center_lo = lo + c <= hi - c ? lo + c : 0.5 * (lo + hi);
  double center_hi = lo + c <= hi - c ? hi - c : 0.5 * (lo + hi);
  std::vector<double> plus(d), minus(d);
  for (std::size_t i = 0; i < d; ++i) {
    double center = std::clamp(theta[i], center_lo, center_hi);
    plus[i] = center + c * delta[i];
    minus[i] = center - c * delta[i];
  }

  double f_plus = objective(plus, eval_seed, n_paths);
  double f_minus = objective(minus, eval_seed, n_paths);
  if (eval) *eval = {f_plus, f_minus};
  std::vector<double> grad(d);
  for (std::size_t i = 0; i < d; ++i)
    grad[i] = (f_plus - f_minus) / (2.0 * c * delta[i]);
  return grad;
}

TuneResult tune(const Objective& objective, std::vector<double> theta0,
                const TuneSchedule& schedule, std::uint64_t master_seed) {
  TuneResult result;
  validate(schedule, result.trace);
  for (double t : theta0)
    if (t < schedule.lo || t > schedule.hi)
      throw std::invalid_argument("tune: theta0 outside the box");

  const std::uint64_t tune_seed = domain_seed(master_seed, SeedDomain::Tune);
  const std::uint64_t validation_seed =
      domain_seed(master_seed, SeedDomain::Validate);
  Rng delta_rng(child_seed(tune_seed, 0));

  std::vector<double> theta = theta0;
  auto& iterates = result.trace.iterates;
  iterates.reserve(schedule.iterations);

  for (int n = 1; n <= schedule.iterations; ++n) {
    double a_n = schedule.a / std::pow(n + schedule.big_a, schedule.alpha);
    double c_n = schedule.c / std::pow(n, schedule.gamma);
    std::uint64_t eval_seed = child_seed(tune_seed, static_cast<std::uint64_t>(n));

    std::vector<double> grad;
    SpsaEval eval;
    try {
      grad = spsa_gradient(objective, theta, c_n, delta_rng, eval_seed,
                           schedule.batch_paths, schedule.lo, schedule.hi,
                           &eval);
    } catch (const std::exception& e) {
      result.aborted = true;
      result.note = std::string("objective failure at iteration ") +
                    std::to_string(n) + ": " + e.what();
      break;
    }
    bool nan = false;
    for (double g : grad) nan = nan || !std::isfinite(g);
    if (nan) {
      result.aborted = true;
      result.note = "non-finite gradient estimate at iteration " + std::to_string(n);
      break;
    }

    TuneIterate it;
    it.theta = theta;
    it.seed = eval_seed;
    it.grad_norm = norm2(grad);
    // Objective level seen by this iteration's paired evaluations.
    it.objective = 0.5 * (eval.f_plus + eval.f_minus);
    iterates.push_back(std::move(it));

    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] -= a_n * grad[i];
    theta = project_box(std::move(theta), schedule.lo, schedule.hi);
  }

  // Candidate selection: smooth the noisy per-iteration estimates over a
  // trailing window, shortlist the best few, then re-evaluate the shortlist
  // (plus the start and final iterates) on the held-out validation seeds.
  std::vector<std::vector<double>> candidates;
  candidates.push_back(theta0);
  candidates.push_back(theta);
  if (!iterates.empty()) {
    const int w = std::max(1, schedule.smoothing_window);
    std::vector<std::pair<double, std::size_t>> smoothed;
    for (std::size_t i = 0; i < iterates.size(); ++i) {
      double s = 0.0;
      int k = 0;
      for (std::size_t j = i >= static_cast<std::size_t>(w - 1) ? i - w + 1 : 0;
           j <= i; ++j, ++k)
        s += iterates[j].objective;
      smoothed.emplace_back(s / k, i);
    }
    std::sort(smoothed.begin(), smoothed.end());
    for (int k = 0; k < schedule.validation_candidates &&
                    k < static_cast<int>(smoothed.size()); ++k)
      candidates.push_back(iterates[smoothed[k].second].theta);
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& cand : candidates) {
    double f = objective(cand, validation_seed, schedule.validation_paths);
    if (f < best) {
      best = f;
      result.theta_star = cand;
    }
  }
  result.validation_objective = best;
  return result;
}

std::vector<double> finite_difference_gradient(const Objective& objective,
                                               const std::vector<double>& theta,
                                               double h, std::uint64_t seed,
                                               int n_paths) {
  if (h <= 0.0) throw std::invalid_argument("finite differences need h > 0");
  std::vector<double> grad(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) {
    std::uint64_t pair_seed = child_seed(seed, i);
    std::vector<double> plus = theta, minus = theta;
    plus[i] += h;
    minus[i] -= h;
    grad[i] = (objective(plus, pair_seed, n_paths) -
               objective(minus, pair_seed, n_paths)) / (2.0 * h);
  }
  return grad;
}

GridResult grid_search(const Objective& objective,
                       const std::vector<std::vector<double>>& axes,
                       std::uint64_t master_seed, int n_paths) {
  if (axes.empty()) throw std::invalid_argument("grid_search: no axes");
  for (const auto& axis : axes)
    if (axis.empty()) throw std::invalid_argument("grid_search: empty axis");

  GridResult result;
  result.best_objective = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<double> point(axes.size());
    for (std::size_t i = 0; i < axes.size(); ++i) point[i] = axes[i][idx[i]];
    double f = objective(point, master_seed, n_paths);
    result.table.emplace_back(point, f);
    if (f < result.best_objective) {  // strict: ties keep the earliest point
      result.best_objective = f;
      result.theta_star = point;
    }
    std::size_t k = axes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < axes[k].size()) break;
      idx[k] = 0;
      if (k == 0) return result;
    }
  }
}

std::string trace_to_csv(const TuneTrace& trace) {
  std::string out;
  if (trace.iterates.empty()) return "iteration,objective,grad_norm,seed\n";
  std::size_t d = trace.iterates.front().theta.size();
  out = "iteration";
  for (std::size_t i = 0; i < d; ++i) out += ",theta_" + std::to_string(i);
  out += ",objective,grad_norm,seed\n";
  char buf[64];
  for (std::size_t n = 0; n < trace.iterates.size(); ++n) {
    const auto& it = trace.iterates[n];
    out += std::to_string(n + 1);
    for (double t : it.theta) {
      std::snprintf(buf, sizeof(buf), ",%.17g", t);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,", it.objective, it.grad_norm);
    out += buf;
    out += std::to_string(it.seed) + "\n";
  }
  return out;
}

}  // namespace cfa::tuner
