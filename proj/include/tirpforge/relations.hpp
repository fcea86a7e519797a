#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

#include "tirpforge/types.hpp"

namespace tirpforge {

/// The seven Allen relations that can hold between two intervals A <= B in
/// (start, end) order. Declaration order is the serialization and sort order.
enum class Relation : std::uint8_t {
  Before = 0,
  Meets,
  Overlaps,
  FinishedBy,
  Contains,
  Starts,
  Equals,
};

inline constexpr std::size_t kRelationCount = 7;
inline constexpr std::array<Relation, kRelationCount> kAllRelations = {
    Relation::Before,   Relation::Meets,  Relation::Overlaps, Relation::FinishedBy,
    Relation::Contains, Relation::Starts, Relation::Equals};

/// Serialized codes: `<`, `m`, `o`, `f`, `c`, `s`, `=`.
char relation_code(Relation r);
std::optional<Relation> relation_from_code(char code);

struct RelationConfig {
  Minutes epsilon = 0;
  Minutes max_gap = 720;

  friend bool operator==(const RelationConfig&, const RelationConfig&) = default;
};

/// Throws UsageError unless 0 <= epsilon < max_gap.
void validate(const RelationConfig& cfg);

/// Small bitset over Relation.
class RelationSet {
 public:
  constexpr RelationSet() = default;
  constexpr explicit RelationSet(std::uint8_t bits) : bits_(bits) {}
  constexpr RelationSet(std::initializer_list<Relation> rs) {
    for (Relation r : rs) insert(r);
  }

  constexpr void insert(Relation r) { bits_ |= bit(r); }
  constexpr bool contains(Relation r) const { return (bits_ & bit(r)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::uint8_t bits() const { return bits_; }
  int size() const;
  /// The only member, if this set is a singleton.
  std::optional<Relation> single() const;

  constexpr RelationSet operator|(RelationSet o) const { return RelationSet(bits_ | o.bits_); }
  constexpr RelationSet operator&(RelationSet o) const { return RelationSet(bits_ & o.bits_); }
  friend constexpr bool operator==(RelationSet, RelationSet) = default;

 private:
  static constexpr std::uint8_t bit(Relation r) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(r));
  }
  std::uint8_t bits_ = 0;
};

/// Relation between A and B, or nullopt when none applies (B starts more than
/// max_gap after A ends, or no flexible clause matches when epsilon > 0).
///
/// Requires A <= B by (start, end). Clauses are tried in the order EQUALS,
/// STARTS, FINISHED_BY, CONTAINS, OVERLAPS, MEETS, BEFORE; "x ~ y" means
/// |x - y| <= epsilon.
std::optional<Relation> classify_relation(Interval a, Interval b, const RelationConfig& cfg);
std::optional<Relation> classify_relation(const SymbolicInterval& a, const SymbolicInterval& b,
                                          const RelationConfig& cfg);

using TransitivityTable = std::array<std::array<RelationSet, kRelationCount>, kRelationCount>;

/// Exact composition at epsilon = 0: the relations rel(A, C) realizable for
/// ordered A <= B <= C with rel(A, B) = r1 and rel(B, C) = r2.
const TransitivityTable& transitivity_table();

/// Superset of the composition for any epsilon > 0.
const TransitivityTable& widened_transitivity_table();

/// Table the miner prunes with for the given configuration.
const TransitivityTable& pruning_table(const RelationConfig& cfg);

RelationSet compose(Relation r1, Relation r2);

}  // namespace tirpforge
