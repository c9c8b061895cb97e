#include "cfa/stats.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace cfa::stats {

double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile requires p in (0,1)");
  // Acklam's algorithm.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

// Regularized incomplete beta by continued fraction (Lentz's method).
double betacf(double a, double b, double x) {
  const double eps = 3e-14, fpmin = 1e-300;
  double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double cfrac = 1.0, dfrac = 1.0 - qab * x / qap;
  if (std::fabs(dfrac) < fpmin) dfrac = fpmin;
  dfrac = 1.0 / dfrac;
  double h = dfrac;
  for (int m = 1; m <= 300; ++m) {
    int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    dfrac = 1.0 + aa * dfrac;
    if (std::fabs(dfrac) < fpmin) dfrac = fpmin;
    cfrac = 1.0 + aa / cfrac;
    if (std::fabs(cfrac) < fpmin) cfrac = fpmin;
    dfrac = 1.0 / dfrac;
    h *= dfrac * cfrac;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    dfrac = 1.0 + aa * dfrac;
    if (std::fabs(dfrac) < fpmin) dfrac = fpmin;
    cfrac = 1.0 + aa / cfrac;
    if (std::fabs(cfrac) < fpmin) cfrac = fpmin;
    dfrac = 1.0 / dfrac;
    double del = dfrac * cfrac;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double ibeta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
              a * std::log(x) + b * std::log(1.0 - x);
  double front = std::exp(ln);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_sf(double t, double dof) {
  double x = dof / (dof + t * t);
  double p = 0.5 * ibeta(dof / 2.0, 0.5, x);
  return t >= 0.0 ? p : 1.0 - p;
}

PairedTest paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("paired test needs two equal series, n >= 2");
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  PairedTest test;
  test.mean_diff = mean(diff);
  double var = sample_variance(diff);
  double n = static_cast<double>(diff.size());
  if (var <= 0.0) {
    test.t_stat = 0.0;
    test.p_one_sided = test.mean_diff < 0.0 ? 0.0 : 1.0;
    test.p_two_sided = test.mean_diff == 0.0 ? 1.0 : 0.0;
    return test;
  }
  test.t_stat = test.mean_diff / std::sqrt(var / n);
  test.p_one_sided = 1.0 - student_t_sf(test.t_stat, n - 1.0);
  test.p_two_sided = 2.0 * student_t_sf(std::fabs(test.t_stat), n - 1.0);
  return test;
}

}  // namespace cfa::stats
