#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tirpforge {

/// Whole minutes from a per-dataset epoch.
using Minutes = std::int64_t;

struct Sample {
  std::string entity_id;
  std::string concept_id;
  Minutes t = 0;
  double value = 0.0;

  friend bool operator==(const Sample&, const Sample&) = default;
};

enum class Kind : std::uint8_t { State = 0, Gradient = 1 };

/// One-letter code used in canonical TIRP strings ("S" / "G").
char kind_code(Kind kind);
std::optional<Kind> kind_from_code(std::string_view code);
/// Long name used in the intervals CSV ("State" / "Gradient").
std::string_view kind_name(Kind kind);
std::optional<Kind> kind_from_name(std::string_view name);

inline constexpr std::array<std::string_view, 3> kDefaultStateLabels = {"Low", "Normal", "High"};
inline constexpr std::array<std::string_view, 3> kGradientLabels = {"Decreasing", "Stable",
                                                                    "Increasing"};
/// Rank given to labels that are not part of any declared label set.
inline constexpr std::uint8_t kUnrankedLabel = 0xff;

/// An abstraction symbol, e.g. BodyTemperature / State / High.
///
/// Symbols are totally ordered by (concept, kind, label rank, label text); the
/// rank is the label's position in its declared label set. This order breaks
/// ties between intervals sharing (start, end).
struct Symbol {
  std::string concept_id;
  Kind kind = Kind::State;
  std::uint8_t rank = kUnrankedLabel;
  std::string label;

  friend bool operator==(const Symbol&, const Symbol&) = default;
  friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    if (auto c = a.concept_id <=> b.concept_id; c != 0) return c;
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    if (auto c = a.rank <=> b.rank; c != 0) return c;
    return a.label <=> b.label;
  }
};

/// Closed time span [start, end]; start == end is a legal point interval.
struct Interval {
  Minutes start = 0;
  Minutes end = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

struct SymbolicInterval {
  std::string entity_id;
  Symbol symbol;
  Minutes start = 0;
  Minutes end = 0;

  Interval span() const { return {start, end}; }
  friend bool operator==(const SymbolicInterval&, const SymbolicInterval&) = default;
};

/// Lexicographic interval order: (start, end, symbol).
inline bool interval_less(const SymbolicInterval& a, const SymbolicInterval& b) {
  if (a.start != b.start) return a.start < b.start;
  if (a.end != b.end) return a.end < b.end;
  return a.symbol < b.symbol;
}

struct AbstractionRule {
  std::string concept_id;
  std::string unit;
  double normal_low = 0.0;
  double normal_high = 0.0;
  double gradient_delta = 0.0;
  Minutes interp_max_gap = 240;
  std::array<std::string, 3> state_labels = {"Low", "Normal", "High"};

  bool has_custom_labels() const;
};

/// Concept -> abstraction rule. Concepts are unique.
struct KnowledgeBase {
  std::map<std::string, AbstractionRule> rules;
  std::optional<std::string> source;

  const AbstractionRule* find(std::string_view concept_id) const;
};

/// Resolves label ranks so symbols parsed from text order the same way as
/// symbols produced by the abstraction step.
class LabelCatalog {
 public:
  LabelCatalog() = default;
  explicit LabelCatalog(const KnowledgeBase& kb);

  Symbol make_symbol(std::string concept_id, Kind kind, std::string label) const;

 private:
  std::map<std::string, std::array<std::string, 3>, std::less<>> custom_state_labels_;
};

}  // namespace tirpforge
