#include "tirpforge/stats.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tirpforge/errors.hpp"

namespace tirpforge {

namespace {

int alpha_slot(double alpha) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(alpha - kSupportedAlphas[i]) < 1e-12) return i;
  }
  return -1;
}

}  // namespace

void validate_alpha(double alpha) {
  if (alpha_slot(alpha) < 0) throw UsageError("alpha must be one of 0.10, 0.05, 0.01");
}

double ks_coefficient(double alpha) {
  static constexpr double kC[] = {1.22, 1.36, 1.63};
  validate_alpha(alpha);
  return kC[alpha_slot(alpha)];
}

double z_critical(double alpha) {
  static constexpr double kZ[] = {1.6448536269514722, 1.959963984540054, 2.5758293035489004};
  validate_alpha(alpha);
  return kZ[alpha_slot(alpha)];
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double information_gain(const std::vector<bool>& feature, std::span<const int> labels) {
  if (feature.size() != labels.size()) {
    throw UsageError("feature and label vectors differ in length");
  }
  std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2) throw UsageError("information gain needs two distinct classes");
  if (classes.size() > 2) throw UsageError("information gain supports exactly two classes");
  const int positive = *classes.rbegin();

  // counts[f][c]: feature value f, class c (1 = positive).
  double counts[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    counts[feature[i] ? 1 : 0][labels[i] == positive ? 1 : 0] += 1;
  }
  const double n = static_cast<double>(labels.size());
  const double class_entropy = binary_entropy((counts[0][1] + counts[1][1]) / n);
  double conditional = 0.0;
  for (const auto& part : counts) {
    const double size = part[0] + part[1];
    if (size == 0) continue;
    conditional += size / n * binary_entropy(part[1] / size);
  }
  return std::max(0.0, class_entropy - conditional);
}

KsResult ks_two_sample(std::span<const double> sample1, std::span<const double> sample2,
                       double alpha) {
  if (sample1.empty() || sample2.empty()) throw UsageError("KS test needs two non-empty samples");
  std::vector<double> a(sample1.begin(), sample1.end());
  std::vector<double> b(sample2.begin(), sample2.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());

  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }

  KsResult out;
  out.d_statistic = d;
  out.alpha = alpha;
  out.n1 = a.size();
  out.n2 = b.size();
  out.critical_d = ks_coefficient(alpha) * std::sqrt((na + nb) / (na * nb));
  out.reject = out.d_statistic > out.critical_d;
  return out;
}

ProportionTestResult proportion_test(std::size_t x1, std::size_t n1, std::size_t x2,
                                     std::size_t n2, double alpha) {
  if (n1 == 0 || n2 == 0) throw UsageError("proportion test needs non-zero group sizes");
  if (x1 > n1 || x2 > n2) throw UsageError("proportion test counts exceed group sizes");
  const double crit = z_critical(alpha);
  ProportionTestResult out{x1, n1, x2, n2, 0.0, false};
  const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  if (pooled > 0.0 && pooled < 1.0) {
    const double se = std::sqrt(pooled * (1.0 - pooled) *
                                (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    out.z = (p1 - p2) / se;
  }
  out.significant = std::abs(out.z) > crit;
  return out;
}

long percent_rounded(std::size_t part, std::size_t whole) {
  if (whole == 0) return 0;
  return static_cast<long>((200 * part + whole) / (2 * whole));
}

}  // namespace tirpforge
