#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tirpforge/relations.hpp"
#include "tirpforge/types.hpp"

namespace tirpforge {

/// Index of pair (i, j), i < j, in a row-major upper-triangular half-matrix
/// over k items.
constexpr std::size_t half_matrix_index(std::size_t k, std::size_t i, std::size_t j) {
  return i * k - i * (i + 1) / 2 + (j - i - 1);
}

constexpr std::size_t half_matrix_size(std::size_t k) { return k * (k - 1) / 2; }

/// Time-interval relation pattern: k symbols in instance order plus the
/// pairwise relations as a row-major upper-triangular half-matrix.
struct Tirp {
  std::vector<Symbol> symbols;
  std::vector<Relation> relations;

  std::size_t size() const { return symbols.size(); }
  Relation relation(std::size_t i, std::size_t j) const {
    return relations[half_matrix_index(size(), i, j)];
  }
  /// Pattern without its last symbol and that symbol's relation column.
  Tirp prefix() const;

  friend bool operator==(const Tirp&, const Tirp&) = default;
};

/// Output order: (k, symbol sequence, relations in declaration order).
bool tirp_less(const Tirp& a, const Tirp& b);

/// `Concept.Kind.Label` symbols joined by `|`, then `;`, then the relation
/// codes joined by `,`, e.g. `BT.S.High|HR.S.High;m`.
std::string canonical_string(const Tirp& tirp);
std::string symbol_string(const Symbol& s);

/// Inverse of canonical_string; label ranks come from `catalog`. Throws
/// DataError on malformed text.
Tirp parse_tirp(std::string_view text, const LabelCatalog& catalog = {});

/// Shape check (k >= 1 and k(k-1)/2 relations).
bool well_formed(const Tirp& tirp);

/// Every triple i < j < l satisfies rel(i, l) in table[rel(i, j)][rel(j, l)].
bool half_matrix_consistent(const Tirp& tirp, const TransitivityTable& table);

}  // namespace tirpforge
