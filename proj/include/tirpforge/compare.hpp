#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tirpforge/miner.hpp"
#include "tirpforge/stats.hpp"

namespace tirpforge {

/// Which TIRPs feed the two KS samples: the shared ones only, or every
/// distinct TIRP with support 0 where a class did not mine it.
enum class KsDomain { Shared, Union };

KsDomain parse_ks_domain(std::string_view name);
std::string_view ks_domain_name(KsDomain domain);

struct StatsConfig {
  double alpha = 0.05;
  KsDomain ks_domain = KsDomain::Shared;
  std::uint64_t split_seed = 0;
  /// IG-ranked patterns kept in the report.
  std::size_t top_n = 50;
  std::size_t threads = 1;
};

/// Mining output of one class plus the intervals it was mined from.
struct ClassMining {
  std::string label;
  MinerConfig config;
  std::vector<MinedPattern> patterns;
  CohortIntervals cohort;
};

struct ProportionSummary {
  std::string name;
  std::string description;
  std::size_t tested = 0;
  std::size_t different = 0;
  long percent = 0;
};

struct PatternTest {
  std::string tirp;
  ProportionTestResult result;
};

struct RankedPattern {
  std::size_t rank = 0;  // competition ranking: ties share a rank
  std::string tirp;
  std::size_t k = 0;
  double information_gain = 0.0;
  double support_a = 0.0;
  double support_b = 0.0;
};

struct LengthSplit {
  std::size_t distinct = 0, shared = 0, exclusive_a = 0, exclusive_b = 0;
};

struct CohortComparisonReport {
  std::string label_a, label_b;
  std::size_t size_a = 0, size_b = 0;
  std::size_t tirps_a = 0, tirps_b = 0;
  LengthSplit all, single, multi;  // every k, k = 1, k >= 2
  MinerConfig mining;
  StatsConfig stats;
  std::optional<KsResult> ks;  // empty when a KS sample is empty
  /// between classes, within class A halves, within class B halves
  std::array<ProportionSummary, 3> proportion_tests;
  std::vector<PatternTest> between, within_a, within_b;
  std::vector<RankedPattern> top;
};

/// Shared/exclusive split, KS over support vectors, per-TIRP proportion tests
/// between classes and between seeded 50/50 halves of each class (supports
/// recounted, not re-mined), and information-gain ranking of every TIRP by
/// presence over both cohorts.
///
/// Throws DataError when the two mining configurations differ or an entity
/// belongs to both cohorts.
CohortComparisonReport compare_cohorts(const ClassMining& a, const ClassMining& b,
                                       const StatsConfig& cfg);

nlohmann::json report_to_json(const CohortComparisonReport& report);

/// Seeded 50/50 split: returns a permutation of [0, n); the first n/2 entries
/// form the first half.
std::vector<std::size_t> split_halves(std::size_t n, std::uint64_t seed);

}  // namespace tirpforge
