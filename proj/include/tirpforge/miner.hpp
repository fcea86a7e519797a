#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "tirpforge/relations.hpp"
#include "tirpforge/tirp.hpp"
#include "tirpforge/types.hpp"

namespace tirpforge {

struct MinerConfig {
  double min_support = 0.10;
  RelationConfig relations;
  std::size_t max_pattern_len = 5;
  /// Worker threads; results do not depend on it.
  std::size_t threads = 1;
};

/// Throws UsageError unless 0 < min_support <= 1, max_pattern_len >= 1 and
/// the relation config is valid.
void validate(const MinerConfig& cfg);

/// Same mining semantics (threads are ignored).
bool same_mining_config(const MinerConfig& a, const MinerConfig& b);

/// Horizontal support threshold test shared by every mining path.
bool meets_support(std::size_t supporting_entities, std::size_t cohort_size, double min_support);

struct SupportStats {
  std::size_t entities = 0;
  double horizontal_support = 0.0;
  std::size_t instances = 0;

  friend bool operator==(const SupportStats&, const SupportStats&) = default;
};

struct MinedPattern {
  Tirp tirp;
  SupportStats stats;

  friend bool operator==(const MinedPattern&, const MinedPattern&) = default;
};

/// One cohort: every entity id (including entities without intervals, which
/// still count toward the cohort size) and its intervals sorted by
/// (start, end, symbol).
struct CohortIntervals {
  std::vector<std::string> entities;
  std::vector<std::vector<SymbolicInterval>> intervals;

  std::size_t size() const { return entities.size(); }

  /// Groups intervals by entity over the given (deduplicated, sorted) entity
  /// list. Throws DataError for intervals of entities outside the list.
  static CohortIntervals build(std::vector<std::string> entity_ids,
                               const std::vector<SymbolicInterval>& intervals);
};

/// Frequent TIRPs with 1 <= k <= max_pattern_len, sorted by tirp_less.
///
/// Pairs of intervals are indexed per entity by (symbol, relation, symbol)
/// and frequent 2-TIRPs seed a depth-first extension that appends one
/// interval at a time. Relations between earlier intervals and the new one
/// are constrained by the transitivity table; every candidate is counted
/// against the real instances.
std::vector<MinedPattern> mine(const CohortIntervals& cohort, const MinerConfig& cfg);

/// Exact support of one pattern: entities with at least one instance, and the
/// total number of instances.
SupportStats support(const Tirp& tirp, const CohortIntervals& cohort, const RelationConfig& cfg);

/// Brute-force oracle. Enumerates every ordered interval tuple. Refuses
/// (UsageError) inputs beyond kBruteForceMax* limits.
std::vector<MinedPattern> enumerate_bruteforce(const CohortIntervals& cohort,
                                               const MinerConfig& cfg);

inline constexpr std::size_t kBruteForceMaxEntities = 20;
inline constexpr std::size_t kBruteForceMaxIntervals = 12;
inline constexpr std::size_t kBruteForceMaxLen = 4;

/// Pre-indexed cohort for repeated instance searches.
class CohortIndex {
 public:
  CohortIndex(const CohortIntervals& cohort, RelationConfig cfg);

  std::size_t size() const { return entities_.size(); }

  /// Pattern symbols translated to this index; empty when some symbol never
  /// occurs in the cohort.
  std::vector<int> resolve(const Tirp& tirp) const;

  /// Instances of `tirp` in entity `e`, counting at most `limit`.
  std::size_t count_instances(std::size_t e, const Tirp& tirp, const std::vector<int>& resolved,
                              std::size_t limit = std::numeric_limits<std::size_t>::max()) const;

  bool contains(std::size_t e, const Tirp& tirp, const std::vector<int>& resolved) const {
    return count_instances(e, tirp, resolved, 1) > 0;
  }

 private:
  struct Entity {
    std::vector<Interval> spans;
    std::vector<int> symbols;
    std::map<int, std::vector<std::uint32_t>> by_symbol;
  };

  std::size_t search(const Entity& ent, const Tirp& tirp, const std::vector<int>& resolved,
                     std::vector<std::uint32_t>& chosen, std::size_t limit) const;

  RelationConfig cfg_;
  std::map<Symbol, int> symbol_ids_;
  std::vector<Entity> entities_;
};

}  // namespace tirpforge
