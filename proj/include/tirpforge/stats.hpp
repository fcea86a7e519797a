#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tirpforge {

/// Significance levels with tabulated critical values.
inline constexpr double kSupportedAlphas[] = {0.10, 0.05, 0.01};

/// Throws UsageError for alphas other than 0.10, 0.05, 0.01.
void validate_alpha(double alpha);

/// Two-sample KS coefficient c(alpha): 1.22, 1.36, 1.63.
double ks_coefficient(double alpha);

/// Two-sided standard-normal critical value for alpha.
double z_critical(double alpha);

/// Base-2 entropy of a Bernoulli(p) variable.
double binary_entropy(double p);

/// H(class) - H(class | feature) in bits for a boolean feature and a
/// two-valued class. Throws UsageError on size mismatch or fewer than two
/// distinct labels.
double information_gain(const std::vector<bool>& feature, std::span<const int> labels);

struct KsResult {
  double d_statistic = 0.0;
  double critical_d = 0.0;
  double alpha = 0.05;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  bool reject = false;
};

/// Exact sup |ECDF1 - ECDF2| with the classical critical value
/// c(alpha) * sqrt((n1 + n2) / (n1 * n2)). Throws UsageError on empty input.
KsResult ks_two_sample(std::span<const double> sample1, std::span<const double> sample2,
                       double alpha);

struct ProportionTestResult {
  std::size_t x1 = 0, n1 = 0, x2 = 0, n2 = 0;
  double z = 0.0;
  bool significant = false;
};

/// Pooled two-proportion z test without continuity correction. A pooled
/// proportion of 0 or 1 yields z = 0.
ProportionTestResult proportion_test(std::size_t x1, std::size_t n1, std::size_t x2,
                                     std::size_t n2, double alpha);

/// Round-half-up percentage of `part` in `whole`; 0 when whole is 0.
long percent_rounded(std::size_t part, std::size_t whole);

}  // namespace tirpforge
