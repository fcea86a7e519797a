#include "tirpforge/miner.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "tirpforge/errors.hpp"
#include "tirpforge/parallel.hpp"

namespace tirpforge {

void validate(const MinerConfig& cfg) {
  if (!(cfg.min_support > 0.0 && cfg.min_support <= 1.0)) {
    throw UsageError("min_support must be in (0, 1]");
  }
  if (cfg.max_pattern_len < 1) throw UsageError("max pattern length must be >= 1");
  validate(cfg.relations);
}

bool same_mining_config(const MinerConfig& a, const MinerConfig& b) {
  return a.min_support == b.min_support && a.relations == b.relations &&
         a.max_pattern_len == b.max_pattern_len;
}

bool meets_support(std::size_t supporting_entities, std::size_t cohort_size, double min_support) {
  if (cohort_size == 0 || supporting_entities == 0) return false;
  const double fraction =
      static_cast<double>(supporting_entities) / static_cast<double>(cohort_size);
  return fraction >= min_support - 1e-12;
}

CohortIntervals CohortIntervals::build(std::vector<std::string> entity_ids,
                                       const std::vector<SymbolicInterval>& intervals) {
  std::sort(entity_ids.begin(), entity_ids.end());
  entity_ids.erase(std::unique(entity_ids.begin(), entity_ids.end()), entity_ids.end());
  CohortIntervals out;
  out.intervals.resize(entity_ids.size());
  for (const auto& iv : intervals) {
    auto it = std::lower_bound(entity_ids.begin(), entity_ids.end(), iv.entity_id);
    if (it == entity_ids.end() || *it != iv.entity_id) {
      throw DataError("interval for entity '" + iv.entity_id + "' outside the cohort");
    }
    out.intervals[static_cast<std::size_t>(it - entity_ids.begin())].push_back(iv);
  }
  for (auto& list : out.intervals) std::sort(list.begin(), list.end(), interval_less);
  out.entities = std::move(entity_ids);
  return out;
}

namespace {

using SymbolId = std::uint32_t;

struct EncodedEntity {
  std::vector<Interval> spans;
  std::vector<SymbolId> symbols;
};

struct Encoded {
  std::vector<Symbol> symbols;  // id -> symbol, ascending
  std::vector<EncodedEntity> entities;
};

Encoded encode(const CohortIntervals& cohort) {
  Encoded enc;
  for (const auto& list : cohort.intervals) {
    for (const auto& iv : list) enc.symbols.push_back(iv.symbol);
  }
  std::sort(enc.symbols.begin(), enc.symbols.end());
  enc.symbols.erase(std::unique(enc.symbols.begin(), enc.symbols.end()), enc.symbols.end());

  enc.entities.resize(cohort.size());
  for (std::size_t e = 0; e < cohort.size(); ++e) {
    auto sorted = cohort.intervals[e];
    std::sort(sorted.begin(), sorted.end(), interval_less);
    auto& ent = enc.entities[e];
    for (const auto& iv : sorted) {
      auto it = std::lower_bound(enc.symbols.begin(), enc.symbols.end(), iv.symbol);
      ent.spans.push_back(iv.span());
      ent.symbols.push_back(static_cast<SymbolId>(it - enc.symbols.begin()));
    }
  }
  return enc;
}

// Column-major index of pair (i, j), i < j: extending a pattern appends a column.
constexpr std::size_t column_index(std::size_t i, std::size_t j) { return j * (j - 1) / 2 + i; }

std::vector<Relation> columns_to_rows(const std::vector<Relation>& columns, std::size_t k) {
  std::vector<Relation> rows(columns.size());
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t i = 0; i < j; ++i) rows[half_matrix_index(k, i, j)] = columns[column_index(i, j)];
  }
  return rows;
}

struct RawPattern {
  std::vector<SymbolId> symbols;
  std::vector<Relation> relations;  // row-major
  SupportStats stats;
};

bool raw_less(const RawPattern& a, const RawPattern& b) {
  if (a.symbols.size() != b.symbols.size()) return a.symbols.size() < b.symbols.size();
  if (a.symbols != b.symbols) return a.symbols < b.symbols;
  return a.relations < b.relations;
}

std::vector<MinedPattern> finish(std::vector<RawPattern> raw, const Encoded& enc) {
  std::sort(raw.begin(), raw.end(), raw_less);
  std::vector<MinedPattern> out;
  out.reserve(raw.size());
  for (auto& r : raw) {
    MinedPattern p;
    p.tirp.relations = std::move(r.relations);
    for (SymbolId s : r.symbols) p.tirp.symbols.push_back(enc.symbols[s]);
    p.stats = r.stats;
    out.push_back(std::move(p));
  }
  return out;
}

SupportStats make_stats(std::size_t entities, std::size_t instances, std::size_t cohort) {
  return {entities, static_cast<double>(entities) / static_cast<double>(cohort), instances};
}

/// Frequent (symbol, relation, symbol) triples.
class PairSet {
 public:
  explicit PairSet(std::size_t symbol_count) : n_(symbol_count) {
    if (n_ * n_ * kRelationCount <= (std::size_t{1} << 26)) dense_.assign(n_ * n_ * kRelationCount, 0);
  }

  void insert(std::uint64_t key) {
    if (!dense_.empty()) {
      dense_[key] = 1;
    } else {
      sparse_.insert(key);
    }
  }
  bool contains(std::uint64_t key) const {
    return dense_.empty() ? sparse_.contains(key) : dense_[key] != 0;
  }
  std::uint64_t key(SymbolId a, Relation r, SymbolId b) const {
    return (static_cast<std::uint64_t>(a) * n_ + b) * kRelationCount + static_cast<std::uint64_t>(r);
  }

 private:
  std::size_t n_;
  std::vector<char> dense_;
  std::unordered_set<std::uint64_t> sparse_;
};

struct Group {
  std::uint32_t entity;
  std::vector<std::uint32_t> flat;  // k interval indices per instance
};

struct Node {
  std::vector<SymbolId> symbols;
  std::vector<Relation> columns;
  std::vector<Group> groups;

  std::size_t instance_count() const {
    std::size_t n = 0;
    for (const auto& g : groups) n += g.flat.size();
    return n / symbols.size();
  }
};

/// Per-entity adjacency over frequent pairs: for interval a, the later
/// intervals b and rel(a, b) such that (sym a, rel, sym b) is frequent.
struct Adjacency {
  std::vector<std::uint32_t> offsets;
  std::vector<std::pair<std::uint32_t, Relation>> edges;
};

class Lego {
 public:
  Lego(const Encoded& enc, const MinerConfig& cfg, const PairSet& pairs,
       const std::vector<Adjacency>& adjacency)
      : enc_(enc),
        cfg_(cfg),
        pairs_(pairs),
        adjacency_(adjacency),
        table_(pruning_table(cfg.relations)),
        exact_table_(cfg.relations.epsilon == 0) {}

  void extend(const Node& node, std::vector<RawPattern>& out) const {
    const std::size_t k = node.symbols.size();
    struct Bucket {
      Node child;
    };
    std::unordered_map<std::string, std::size_t> index;
    std::vector<Bucket> buckets;
    std::vector<Relation> column(k);
    std::string key;

    for (const Group& g : node.groups) {
      const EncodedEntity& ent = enc_.entities[g.entity];
      const Adjacency& adj = adjacency_[g.entity];
      for (std::size_t off = 0; off < g.flat.size(); off += k) {
        const std::uint32_t* inst = &g.flat[off];
        const std::uint32_t last = inst[k - 1];
        for (std::uint32_t e = adj.offsets[last]; e < adj.offsets[last + 1]; ++e) {
          const auto [b, r] = adj.edges[e];
          if (!relate_to_new(node, ent, inst, b, r, column)) continue;

          key.assign(reinterpret_cast<const char*>(&ent.symbols[b]), sizeof(SymbolId));
          for (Relation c : column) key.push_back(static_cast<char>(c));
          auto [it, inserted] = index.try_emplace(key, buckets.size());
          if (inserted) {
            Bucket bucket;
            bucket.child.symbols = node.symbols;
            bucket.child.symbols.push_back(ent.symbols[b]);
            bucket.child.columns = node.columns;
            bucket.child.columns.insert(bucket.child.columns.end(), column.begin(), column.end());
            buckets.push_back(std::move(bucket));
          }
          Node& child = buckets[it->second].child;
          if (child.groups.empty() || child.groups.back().entity != g.entity) {
            child.groups.push_back({g.entity, {}});
          }
          auto& flat = child.groups.back().flat;
          flat.insert(flat.end(), inst, inst + k);
          flat.push_back(b);
        }
      }
    }

    const std::size_t cohort = enc_.entities.size();
    for (auto& bucket : buckets) {
      Node& child = bucket.child;
      if (!meets_support(child.groups.size(), cohort, cfg_.min_support)) continue;
      out.push_back({child.symbols, columns_to_rows(child.columns, k + 1),
                     make_stats(child.groups.size(), child.instance_count(), cohort)});
      if (k + 1 < cfg_.max_pattern_len) extend(child, out);
      child = Node{};
    }
  }

 private:
  // Fills column[i] = rel(i, new) for the instance, walking from the last
  // interval backwards. rel(i, new) must lie in table[rel(i, i+1)][rel(i+1, new)];
  // at epsilon 0 a singleton other than BEFORE fixes it without classifying.
  bool relate_to_new(const Node& node, const EncodedEntity& ent, const std::uint32_t* inst,
                     std::uint32_t b, Relation last_rel, std::vector<Relation>& column) const {
    const std::size_t k = node.symbols.size();
    column[k - 1] = last_rel;
    for (std::size_t i = k - 1; i-- > 0;) {
      const auto r_i_next = static_cast<std::size_t>(node.columns[column_index(i, i + 1)]);
      const RelationSet allowed = table_[r_i_next][static_cast<std::size_t>(column[i + 1])];
      std::optional<Relation> rel;
      if (exact_table_) {
        if (auto only = allowed.single(); only && *only != Relation::Before) rel = only;
      }
      if (!rel) {
        rel = classify_relation(ent.spans[inst[i]], ent.spans[b], cfg_.relations);
        if (!rel) return false;
        if (!allowed.contains(*rel)) {
          throw InvariantError("transitivity table does not admit an observed relation");
        }
      }
      if (!pairs_.contains(pairs_.key(ent.symbols[inst[i]], *rel, ent.symbols[b]))) return false;
      column[i] = *rel;
    }
    return true;
  }

  const Encoded& enc_;
  const MinerConfig& cfg_;
  const PairSet& pairs_;
  const std::vector<Adjacency>& adjacency_;
  const TransitivityTable& table_;
  bool exact_table_;
};

}  // namespace

std::vector<MinedPattern> mine(const CohortIntervals& cohort, const MinerConfig& cfg) {
  validate(cfg);
  const std::size_t n_entities = cohort.size();
  if (n_entities == 0) return {};
  const Encoded enc = encode(cohort);
  const std::size_t n_symbols = enc.symbols.size();
  std::vector<RawPattern> raw;

  // 1-TIRPs.
  std::vector<std::size_t> symbol_entities(n_symbols, 0), symbol_instances(n_symbols, 0);
  std::vector<std::size_t> last_seen(n_symbols, SIZE_MAX);
  for (std::size_t e = 0; e < n_entities; ++e) {
    for (SymbolId s : enc.entities[e].symbols) {
      ++symbol_instances[s];
      if (last_seen[s] != e) {
        last_seen[s] = e;
        ++symbol_entities[s];
      }
    }
  }
  std::vector<char> frequent_symbol(n_symbols, 0);
  for (SymbolId s = 0; s < n_symbols; ++s) {
    if (!meets_support(symbol_entities[s], n_entities, cfg.min_support)) continue;
    frequent_symbol[s] = 1;
    raw.push_back({{s}, {}, make_stats(symbol_entities[s], symbol_instances[s], n_entities)});
  }
  if (cfg.max_pattern_len < 2) return finish(std::move(raw), enc);

  // Karma: index every related pair of frequent-symbol intervals.
  struct PairRecord {
    std::uint32_t a, b;
    Relation r;
  };
  struct PairCount {
    std::size_t last_entity = SIZE_MAX;
    std::size_t entities = 0;
  };
  PairSet pairs(n_symbols);
  std::vector<std::vector<PairRecord>> entity_pairs(n_entities);
  std::unordered_map<std::uint64_t, PairCount> pair_counts;
  for (std::size_t e = 0; e < n_entities; ++e) {
    const auto& ent = enc.entities[e];
    const std::size_t n = ent.spans.size();
    for (std::uint32_t a = 0; a < n; ++a) {
      if (!frequent_symbol[ent.symbols[a]]) continue;
      for (std::uint32_t b = a + 1; b < n; ++b) {
        // Starts are sorted, so once the gap exceeds max_gap nothing later relates.
        if (ent.spans[b].start - ent.spans[a].end > cfg.relations.max_gap) break;
        if (!frequent_symbol[ent.symbols[b]]) continue;
        auto r = classify_relation(ent.spans[a], ent.spans[b], cfg.relations);
        if (!r) continue;
        entity_pairs[e].push_back({a, b, *r});
        auto& count = pair_counts[pairs.key(ent.symbols[a], *r, ent.symbols[b])];
        if (count.last_entity != e) {
          count.last_entity = e;
          ++count.entities;
        }
      }
    }
  }
  for (const auto& [key, count] : pair_counts) {
    if (meets_support(count.entities, n_entities, cfg.min_support)) pairs.insert(key);
  }
  pair_counts.clear();

  // 2-TIRP nodes and the per-entity adjacency used for extension.
  std::vector<Node> roots;
  std::unordered_map<std::uint64_t, std::size_t> root_index;
  std::vector<Adjacency> adjacency(n_entities);
  for (std::size_t e = 0; e < n_entities; ++e) {
    const auto& ent = enc.entities[e];
    auto& adj = adjacency[e];
    adj.offsets.assign(ent.spans.size() + 1, 0);
    for (const auto& p : entity_pairs[e]) {
      const auto key = pairs.key(ent.symbols[p.a], p.r, ent.symbols[p.b]);
      if (!pairs.contains(key)) continue;
      ++adj.offsets[p.a + 1];
      auto [it, inserted] = root_index.try_emplace(key, roots.size());
      if (inserted) roots.push_back({{ent.symbols[p.a], ent.symbols[p.b]}, {p.r}, {}});
      Node& node = roots[it->second];
      if (node.groups.empty() || node.groups.back().entity != e) {
        node.groups.push_back({static_cast<std::uint32_t>(e), {}});
      }
      node.groups.back().flat.push_back(p.a);
      node.groups.back().flat.push_back(p.b);
    }
    std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
    adj.edges.resize(adj.offsets.back());
    std::vector<std::uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (const auto& p : entity_pairs[e]) {
      if (!pairs.contains(pairs.key(ent.symbols[p.a], p.r, ent.symbols[p.b]))) continue;
      adj.edges[fill[p.a]++] = {p.b, p.r};
    }
    entity_pairs[e] = {};
  }

  for (const auto& node : roots) {
    raw.push_back({node.symbols, node.columns,
                   make_stats(node.groups.size(), node.instance_count(), n_entities)});
  }

  // Lego: extend every 2-TIRP subtree independently.
  if (cfg.max_pattern_len > 2) {
    const Lego lego(enc, cfg, pairs, adjacency);
    std::vector<std::vector<RawPattern>> subtree(roots.size());
    parallel_for(roots.size(), cfg.threads,
                 [&](std::size_t i) { lego.extend(roots[i], subtree[i]); });
    for (auto& part : subtree) {
      raw.insert(raw.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
    }
  }
  return finish(std::move(raw), enc);
}

std::vector<MinedPattern> enumerate_bruteforce(const CohortIntervals& cohort,
                                               const MinerConfig& cfg) {
  validate(cfg);
  if (cohort.size() > kBruteForceMaxEntities) {
    throw UsageError("brute-force oracle refuses more than " +
                     std::to_string(kBruteForceMaxEntities) + " entities");
  }
  if (cfg.max_pattern_len > kBruteForceMaxLen) {
    throw UsageError("brute-force oracle refuses patterns longer than " +
                     std::to_string(kBruteForceMaxLen));
  }
  for (const auto& list : cohort.intervals) {
    if (list.size() > kBruteForceMaxIntervals) {
      throw UsageError("brute-force oracle refuses entities with more than " +
                       std::to_string(kBruteForceMaxIntervals) + " intervals");
    }
  }
  if (cohort.size() == 0) return {};

  const Encoded enc = encode(cohort);
  using Key = std::pair<std::vector<SymbolId>, std::vector<Relation>>;
  struct Tally {
    std::size_t last_entity = SIZE_MAX;
    std::size_t entities = 0;
    std::size_t instances = 0;
  };
  std::map<Key, Tally> tallies;

  for (std::size_t e = 0; e < enc.entities.size(); ++e) {
    const auto& ent = enc.entities[e];
    const std::size_t n = ent.spans.size();
    for (std::size_t k = 1; k <= std::min(cfg.max_pattern_len, n); ++k) {
      std::vector<std::size_t> idx(k);
      std::iota(idx.begin(), idx.end(), 0);
      while (true) {
        Key key;
        bool related = true;
        for (std::size_t i = 0; i < k && related; ++i) {
          key.first.push_back(ent.symbols[idx[i]]);
          for (std::size_t j = i + 1; j < k; ++j) {
            auto r = classify_relation(ent.spans[idx[i]], ent.spans[idx[j]], cfg.relations);
            if (!r) {
              related = false;
              break;
            }
            key.second.push_back(*r);
          }
        }
        if (related) {
          auto& t = tallies[key];
          ++t.instances;
          if (t.last_entity != e) {
            t.last_entity = e;
            ++t.entities;
          }
        }
        // Next k-combination of [0, n).
        std::size_t pos = k;
        while (pos > 0 && idx[pos - 1] == n - k + pos - 1) --pos;
        if (pos == 0) break;
        ++idx[pos - 1];
        for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
  }

  std::vector<RawPattern> raw;
  for (auto& [key, t] : tallies) {
    if (!meets_support(t.entities, cohort.size(), cfg.min_support)) continue;
    raw.push_back({key.first, key.second, make_stats(t.entities, t.instances, cohort.size())});
  }
  return finish(std::move(raw), enc);
}

CohortIndex::CohortIndex(const CohortIntervals& cohort, RelationConfig cfg) : cfg_(cfg) {
  for (const auto& list : cohort.intervals) {
    for (const auto& iv : list) symbol_ids_.try_emplace(iv.symbol, 0);
  }
  int next = 0;
  for (auto& [symbol, id] : symbol_ids_) id = next++;

  entities_.resize(cohort.size());
  for (std::size_t e = 0; e < cohort.size(); ++e) {
    auto sorted = cohort.intervals[e];
    std::sort(sorted.begin(), sorted.end(), interval_less);
    auto& ent = entities_[e];
    for (std::uint32_t i = 0; i < sorted.size(); ++i) {
      const int id = symbol_ids_.at(sorted[i].symbol);
      ent.spans.push_back(sorted[i].span());
      ent.symbols.push_back(id);
      ent.by_symbol[id].push_back(i);
    }
  }
}

std::vector<int> CohortIndex::resolve(const Tirp& tirp) const {
  std::vector<int> out;
  out.reserve(tirp.size());
  for (const auto& s : tirp.symbols) {
    auto it = symbol_ids_.find(s);
    if (it == symbol_ids_.end()) return {};
    out.push_back(it->second);
  }
  return out;
}

std::size_t CohortIndex::count_instances(std::size_t e, const Tirp& tirp,
                                         const std::vector<int>& resolved,
                                         std::size_t limit) const {
  if (resolved.empty() || resolved.size() != tirp.size() || limit == 0) return 0;
  std::vector<std::uint32_t> chosen;
  chosen.reserve(tirp.size());
  return search(entities_[e], tirp, resolved, chosen, limit);
}

std::size_t CohortIndex::search(const Entity& ent, const Tirp& tirp,
                                const std::vector<int>& resolved,
                                std::vector<std::uint32_t>& chosen, std::size_t limit) const {
  const std::size_t p = chosen.size();
  if (p == tirp.size()) return 1;
  auto it = ent.by_symbol.find(resolved[p]);
  if (it == ent.by_symbol.end()) return 0;
  const auto& candidates = it->second;
  auto start = candidates.begin();
  if (p > 0) start = std::upper_bound(candidates.begin(), candidates.end(), chosen.back());

  std::size_t total = 0;
  for (auto c = start; c != candidates.end(); ++c) {
    const Interval& next = ent.spans[*c];
    bool beyond_gap = false;
    bool match = true;
    for (std::size_t i = 0; i < p; ++i) {
      const Interval& prev = ent.spans[chosen[i]];
      if (next.start - prev.end > cfg_.max_gap) {
        beyond_gap = true;
        break;
      }
      auto r = classify_relation(prev, next, cfg_);
      if (!r || *r != tirp.relation(i, p)) {
        match = false;
        break;
      }
    }
    if (beyond_gap) break;
    if (!match) continue;
    chosen.push_back(*c);
    total += search(ent, tirp, resolved, chosen, limit - total);
    chosen.pop_back();
    if (total >= limit) break;
  }
  return total;
}

SupportStats support(const Tirp& tirp, const CohortIntervals& cohort, const RelationConfig& cfg) {
  SupportStats stats;
  if (cohort.size() == 0) return stats;
  const CohortIndex index(cohort, cfg);
  const auto resolved = index.resolve(tirp);
  for (std::size_t e = 0; e < index.size(); ++e) {
    const std::size_t n = index.count_instances(e, tirp, resolved);
    if (n > 0) ++stats.entities;
    stats.instances += n;
  }
  stats.horizontal_support = static_cast<double>(stats.entities) / static_cast<double>(cohort.size());
  return stats;
}

}  // namespace tirpforge
