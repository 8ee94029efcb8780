#ifndef RICHARDSON_STATS_HPP
#define RICHARDSON_STATS_HPP

#include <cstdint>
#include <vector>

namespace richardson {

inline constexpr double kZ95TwoSided = 1.959963984540054;
inline constexpr double kZ95OneSided = 1.6448536269514722;

struct MeanCI {
  std::int64_t n = 0;
  double mean = 0.0;
  double std_error = 0.0;
  double lo = 0.0;  // 95% two-sided normal-approximation interval
  double hi = 0.0;
};

MeanCI mean_ci(const std::vector<double>& values);

struct ProportionCI {
  std::int64_t hits = 0;
  std::int64_t n = 0;
  double p = 0.0;
  double std_error = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

ProportionCI proportion_ci(std::int64_t hits, std::int64_t n);

// z statistic for H0: p1 = p2 against p1 > p2 (unpooled Wald form).
double two_proportion_z(std::int64_t hits1, std::int64_t n1, std::int64_t hits2,
                        std::int64_t n2);

// Kolmogorov-Smirnov distance between the empirical CDF and Exp(1).
double ks_statistic_exp1(std::vector<double> values);

// Two-sample Kolmogorov-Smirnov distance.
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

// Critical D for the two-sample test at significance alpha.
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

// Inverse standard normal CDF (Acklam's rational approximation, |err| ~ 1e-9).
double normal_quantile(double p);

// Pearson correlation of two equal-length samples.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace richardson

#endif
