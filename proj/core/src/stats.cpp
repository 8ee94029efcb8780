#include "richardson/stats.hpp"

#include <algorithm>
#include <cmath>

#include "richardson/errors.hpp"

namespace richardson {

MeanCI mean_ci(const std::vector<double>& values) {
  if (values.empty()) throw InvalidInputError("mean_ci needs at least one value");
  MeanCI r;
  r.n = static_cast<std::int64_t>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  r.mean = sum / static_cast<double>(r.n);
  if (r.n > 1) {
    double ss = 0.0;
    for (double v : values) {
      double d = v - r.mean;
      ss += d * d;
    }
    r.std_error = std::sqrt(ss / (static_cast<double>(r.n) * static_cast<double>(r.n - 1)));
  }
  r.lo = r.mean - kZ95TwoSided * r.std_error;
  r.hi = r.mean + kZ95TwoSided * r.std_error;
  return r;
}

ProportionCI proportion_ci(std::int64_t hits, std::int64_t n) {
  if (n < 1 || hits < 0 || hits > n) throw InvalidInputError("bad proportion counts");
  ProportionCI r;
  r.hits = hits;
  r.n = n;
  r.p = static_cast<double>(hits) / static_cast<double>(n);
  r.std_error = std::sqrt(r.p * (1.0 - r.p) / static_cast<double>(n));
  r.lo = r.p - kZ95TwoSided * r.std_error;
  r.hi = r.p + kZ95TwoSided * r.std_error;
  return r;
}

double two_proportion_z(std::int64_t hits1, std::int64_t n1, std::int64_t hits2,
                        std::int64_t n2) {
  double p1 = static_cast<double>(hits1) / static_cast<double>(n1);
  double p2 = static_cast<double>(hits2) / static_cast<double>(n2);
  double var = p1 * (1.0 - p1) / static_cast<double>(n1) +
               p2 * (1.0 - p2) / static_cast<double>(n2);
  if (var == 0.0) return p1 == p2 ? 0.0 : (p1 > p2 ? 1e300 : -1e300);
  return (p1 - p2) / std::sqrt(var);
}

double ks_statistic_exp1(std::vector<double> values) {
  if (values.empty()) throw InvalidInputError("KS statistic needs data");
  std::sort(values.begin(), values.end());
  const auto n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    double cdf = 1.0 - std::exp(-values[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(cdf - lo, hi - cdf));
  }
  return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidInputError("KS statistic needs data");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  while (i < a.size() && j < b.size()) {
    double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
  double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt((static_cast<double>(n) + static_cast<double>(m)) /
                       (static_cast<double>(n) * static_cast<double>(m)));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidInputError("normal_quantile needs p in (0,1)");
  // Acklam's rational approximation.
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
  const double plow = 0.02425;
  double q;
  double r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw InvalidInputError("correlation needs two equal samples of size >= 2");
  }
  const auto n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double da = a[i] - ma;
    double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace richardson
