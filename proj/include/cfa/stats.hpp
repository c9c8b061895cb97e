#pragma once

#include <span>

namespace cfa::stats {

double mean(std::span<const double> xs);
double sample_variance(std::span<const double> xs);

// Standard normal quantile (Acklam's rational approximation, |err| < 2e-9).
double normal_quantile(double p);

// Standard normal upper tail P(Z > z).
double normal_sf(double z);

// Student-t upper tail P(T > t) with `dof` degrees of freedom.
double student_t_sf(double t, double dof);

struct PairedTest {
  double mean_diff = 0.0;  // mean(a - b)
  double t_stat = 0.0;
  double p_one_sided = 1.0;  // P(mean diff < 0 by chance), H1: a < b
  double p_two_sided = 1.0;
};

// Paired comparison of per-path costs; H1 is "a is cheaper than b".
PairedTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace cfa::stats
