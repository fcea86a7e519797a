#include "tirpforge/tirp.hpp"

#include <algorithm>

#include "csv.hpp"
#include "tirpforge/errors.hpp"

namespace tirpforge {

Tirp Tirp::prefix() const {
  const std::size_t k = size();
  Tirp out;
  if (k == 0) return out;
  out.symbols.assign(symbols.begin(), symbols.end() - 1);
  for (std::size_t i = 0; i + 1 < k - 1; ++i) {
    for (std::size_t j = i + 1; j < k - 1; ++j) out.relations.push_back(relation(i, j));
  }
  return out;
}

bool tirp_less(const Tirp& a, const Tirp& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  if (a.symbols != b.symbols) return a.symbols < b.symbols;
  return a.relations < b.relations;
}

std::string symbol_string(const Symbol& s) {
  std::string out = s.concept_id;
  out += '.';
  out += kind_code(s.kind);
  out += '.';
  out += s.label;
  return out;
}

std::string canonical_string(const Tirp& tirp) {
  std::string out;
  for (std::size_t i = 0; i < tirp.symbols.size(); ++i) {
    if (i > 0) out += '|';
    out += symbol_string(tirp.symbols[i]);
  }
  out += ';';
  for (std::size_t i = 0; i < tirp.relations.size(); ++i) {
    if (i > 0) out += ',';
    out += relation_code(tirp.relations[i]);
  }
  return out;
}

Tirp parse_tirp(std::string_view text, const LabelCatalog& catalog) {
  auto fail = [&](const std::string& why) -> DataError {
    return DataError("malformed TIRP '" + std::string(text) + "': " + why);
  };
  const auto semi = text.find(';');
  if (semi == std::string_view::npos) throw fail("missing ';'");
  const auto symbol_part = text.substr(0, semi);
  const auto relation_part = text.substr(semi + 1);
  if (symbol_part.empty()) throw fail("no symbols");

  Tirp tirp;
  for (auto item : csv::split(symbol_part, '|')) {
    const auto last = item.rfind('.');
    if (last == std::string_view::npos || last == 0) throw fail("symbol without kind/label");
    const auto mid = item.rfind('.', last - 1);
    if (mid == std::string_view::npos || mid == 0) throw fail("symbol without concept");
    auto kind = kind_from_code(item.substr(mid + 1, last - mid - 1));
    if (!kind) throw fail("unknown kind code");
    const auto label = item.substr(last + 1);
    if (label.empty()) throw fail("empty label");
    tirp.symbols.push_back(
        catalog.make_symbol(std::string(item.substr(0, mid)), *kind, std::string(label)));
  }
  if (!relation_part.empty()) {
    for (auto code : csv::split(relation_part, ',')) {
      if (code.size() != 1) throw fail("bad relation code");
      auto r = relation_from_code(code.front());
      if (!r) throw fail("unknown relation code");
      tirp.relations.push_back(*r);
    }
  }
  if (!well_formed(tirp)) throw fail("relation count does not match k(k-1)/2");
  return tirp;
}

bool well_formed(const Tirp& tirp) {
  return !tirp.symbols.empty() && tirp.relations.size() == half_matrix_size(tirp.size());
}

bool half_matrix_consistent(const Tirp& tirp, const TransitivityTable& table) {
  const std::size_t k = tirp.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      for (std::size_t l = j + 1; l < k; ++l) {
        const auto r1 = static_cast<std::size_t>(tirp.relation(i, j));
        const auto r2 = static_cast<std::size_t>(tirp.relation(j, l));
        if (!table[r1][r2].contains(tirp.relation(i, l))) return false;
      }
    }
  }
  return true;
}

}  // namespace tirpforge
