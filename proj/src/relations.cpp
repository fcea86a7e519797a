#include "tirpforge/relations.hpp"

#include <bit>
#include <cassert>
#include <cstdlib>
#include <string>

#include "tirpforge/errors.hpp"

namespace tirpforge {

char relation_code(Relation r) {
  static constexpr std::array<char, kRelationCount> kCodes = {'<', 'm', 'o', 'f', 'c', 's', '='};
  return kCodes[static_cast<std::size_t>(r)];
}

std::optional<Relation> relation_from_code(char code) {
  for (Relation r : kAllRelations) {
    if (relation_code(r) == code) return r;
  }
  return std::nullopt;
}

void validate(const RelationConfig& cfg) {
  if (cfg.epsilon < 0) throw UsageError("epsilon must be >= 0");
  if (cfg.max_gap <= 0) throw UsageError("max_gap must be > 0");
  if (cfg.epsilon >= cfg.max_gap) throw UsageError("epsilon must be smaller than max_gap");
}

int RelationSet::size() const { return std::popcount(bits_); }

std::optional<Relation> RelationSet::single() const {
  if (size() != 1) return std::nullopt;
  return static_cast<Relation>(std::countr_zero(bits_));
}

std::optional<Relation> classify_relation(Interval a, Interval b, const RelationConfig& cfg) {
  assert(a <= b && "classify_relation requires lexicographically ordered intervals");
  const Minutes eps = cfg.epsilon;
  auto near = [eps](Minutes x, Minutes y) { return std::llabs(x - y) <= eps; };

  const bool same_start = near(a.start, b.start);
  const bool same_end = near(a.end, b.end);
  if (same_start && same_end) return Relation::Equals;
  if (same_start && a.end < b.end - eps) return Relation::Starts;
  if (same_end && a.start < b.start - eps) return Relation::FinishedBy;
  if (a.start < b.start - eps && b.end < a.end - eps) return Relation::Contains;
  if (a.start < b.start - eps && b.start < a.end - eps && a.end < b.end - eps) {
    return Relation::Overlaps;
  }
  if (near(a.end, b.start)) return Relation::Meets;
  const Minutes gap = b.start - a.end;
  if (gap > eps && gap <= cfg.max_gap) return Relation::Before;
  return std::nullopt;
}

std::optional<Relation> classify_relation(const SymbolicInterval& a, const SymbolicInterval& b,
                                          const RelationConfig& cfg) {
  return classify_relation(a.span(), b.span(), cfg);
}

namespace {

// Generated by exhaustive enumeration of ordered integer interval triples
// (endpoints 0..8, epsilon 0, unbounded gap). tests/test_relations.cpp
// re-derives every cell.
constexpr std::uint8_t kExact[kRelationCount][kRelationCount] = {
    // clang-format off
    // <     m     o     f     c     s     =
    {0x01, 0x01, 0x01, 0x01, 0x01, 0x01, 0x01},  // <
    {0x01, 0x01, 0x01, 0x01, 0x01, 0x02, 0x02},  // m
    {0x01, 0x01, 0x07, 0x07, 0x1f, 0x04, 0x04},  // o
    {0x01, 0x02, 0x04, 0x08, 0x10, 0x06, 0x08},  // f
    {0x1f, 0x1c, 0x1c, 0x10, 0x10, 0x1c, 0x10},  // c
    {0x01, 0x01, 0x07, 0x07, 0x1f, 0x20, 0x20},  // s
    {0x01, 0x02, 0x04, 0x08, 0x10, 0x20, 0x40},  // =
    // clang-format on
};

// Union of the enumerated compositions for epsilon 1..4 (endpoints 0..24,
// unbounded gap). Stable under larger grids; see tests/test_relations.cpp.
constexpr std::uint8_t kWidened[kRelationCount][kRelationCount] = {
    // clang-format off
    {0x01, 0x01, 0x01, 0x01, 0x01, 0x01, 0x01},
    {0x01, 0x03, 0x03, 0x0b, 0x0b, 0x03, 0x0b},
    {0x01, 0x03, 0x07, 0x0f, 0x1f, 0x06, 0x0e},
    {0x0b, 0x0f, 0x0e, 0x1f, 0x18, 0x0f, 0x1f},
    {0x1f, 0x1e, 0x1c, 0x18, 0x10, 0x1e, 0x18},
    {0x01, 0x03, 0x07, 0x0f, 0x1f, 0x27, 0x6f},
    {0x0b, 0x0f, 0x0e, 0x1f, 0x18, 0x6f, 0x7f},
    // clang-format on
};

TransitivityTable to_table(const std::uint8_t (&cells)[kRelationCount][kRelationCount]) {
  TransitivityTable table{};
  for (std::size_t i = 0; i < kRelationCount; ++i) {
    for (std::size_t j = 0; j < kRelationCount; ++j) table[i][j] = RelationSet(cells[i][j]);
  }
  return table;
}

}  // namespace

const TransitivityTable& transitivity_table() {
  static const TransitivityTable table = to_table(kExact);
  return table;
}

const TransitivityTable& widened_transitivity_table() {
  static const TransitivityTable table = to_table(kWidened);
  return table;
}

const TransitivityTable& pruning_table(const RelationConfig& cfg) {
  return cfg.epsilon == 0 ? transitivity_table() : widened_transitivity_table();
}

RelationSet compose(Relation r1, Relation r2) {
  return transitivity_table()[static_cast<std::size_t>(r1)][static_cast<std::size_t>(r2)];
}

}  // namespace tirpforge
