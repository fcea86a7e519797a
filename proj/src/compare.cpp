#include "tirpforge/compare.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include <nlohmann/json.hpp>

#include "tirpforge/errors.hpp"
#include "tirpforge/parallel.hpp"
#include "tirpforge/rng.hpp"

namespace tirpforge {

KsDomain parse_ks_domain(std::string_view name) {
  if (name == "shared") return KsDomain::Shared;
  if (name == "union") return KsDomain::Union;
  throw UsageError("unknown KS domain '" + std::string(name) + "' (expected shared|union)");
}

std::string_view ks_domain_name(KsDomain domain) {
  return domain == KsDomain::Shared ? "shared" : "union";
}

std::vector<std::size_t> split_halves(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, SeedStream::Split));
  rng.shuffle(order);
  return order;
}

namespace {

struct UnionEntry {
  const Tirp* tirp = nullptr;
  std::string canonical;
  const SupportStats* in_a = nullptr;
  const SupportStats* in_b = nullptr;
};

void count_split(LengthSplit& split, const UnionEntry& u) {
  ++split.distinct;
  if (u.in_a && u.in_b) {
    ++split.shared;
  } else if (u.in_a) {
    ++split.exclusive_a;
  } else {
    ++split.exclusive_b;
  }
}

// Entity-presence vector of every union TIRP over A's then B's entities. A
// TIRP can only occur where its prefix occurs, so prefixes filter the search.
std::vector<std::vector<char>> presence_matrix(const std::vector<UnionEntry>& entries,
                                               const CohortIntervals& combined,
                                               const RelationConfig& rel_cfg,
                                               std::size_t threads) {
  const CohortIndex index(combined, rel_cfg);
  const std::size_t n = combined.size();
  std::vector<std::vector<char>> presence(entries.size());

  std::map<std::string_view, std::size_t> by_canonical;
  for (std::size_t i = 0; i < entries.size(); ++i) by_canonical.emplace(entries[i].canonical, i);
  std::vector<std::ptrdiff_t> prefix_of(entries.size(), -1);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].tirp->size() < 2) continue;
    const std::string prefix = canonical_string(entries[i].tirp->prefix());
    if (auto it = by_canonical.find(prefix); it != by_canonical.end()) {
      prefix_of[i] = static_cast<std::ptrdiff_t>(it->second);
    }
  }

  // Entries are in tirp_less order, so all k-TIRPs precede the (k+1)-TIRPs.
  std::size_t begin = 0;
  while (begin < entries.size()) {
    std::size_t end = begin;
    const std::size_t k = entries[begin].tirp->size();
    while (end < entries.size() && entries[end].tirp->size() == k) ++end;
    parallel_for(end - begin, threads, [&](std::size_t off) {
      const std::size_t i = begin + off;
      const Tirp& tirp = *entries[i].tirp;
      const auto resolved = index.resolve(tirp);
      auto& row = presence[i];
      row.assign(n, 0);
      const std::vector<char>* prefix =
          prefix_of[i] >= 0 ? &presence[static_cast<std::size_t>(prefix_of[i])] : nullptr;
      for (std::size_t e = 0; e < n; ++e) {
        if (prefix && !(*prefix)[e]) continue;
        row[e] = index.contains(e, tirp, resolved) ? 1 : 0;
      }
    });
    begin = end;
  }
  return presence;
}

std::vector<PatternTest> within_class_tests(const ClassMining& cls,
                                            const std::map<std::string_view, std::size_t>& row_of,
                                            const std::vector<std::vector<char>>& presence,
                                            std::size_t offset, std::uint64_t seed,
                                            double alpha) {
  std::vector<PatternTest> out;
  const std::size_t n = cls.cohort.size();
  if (n < 2) return out;
  const auto order = split_halves(n, seed);
  const std::size_t half = n / 2;
  std::vector<char> first_half(n, 0);
  for (std::size_t i = 0; i < half; ++i) first_half[order[i]] = 1;

  for (const auto& p : cls.patterns) {
    const std::string canonical = canonical_string(p.tirp);
    const auto& row = presence[row_of.at(canonical)];
    std::size_t x1 = 0, x2 = 0;
    for (std::size_t e = 0; e < n; ++e) {
      if (!row[offset + e]) continue;
      if (first_half[e]) {
        ++x1;
      } else {
        ++x2;
      }
    }
    out.push_back({canonical, proportion_test(x1, half, x2, n - half, alpha)});
  }
  return out;
}

ProportionSummary summarize(std::string name, std::string description,
                            const std::vector<PatternTest>& tests) {
  ProportionSummary s{std::move(name), std::move(description), tests.size(), 0, 0};
  for (const auto& t : tests) s.different += t.result.significant ? 1 : 0;
  s.percent = percent_rounded(s.different, s.tested);
  return s;
}

}  // namespace

CohortComparisonReport compare_cohorts(const ClassMining& a, const ClassMining& b,
                                       const StatsConfig& cfg) {
  validate_alpha(cfg.alpha);
  if (!same_mining_config(a.config, b.config)) {
    throw DataError("mining configurations of '" + a.label + "' and '" + b.label + "' differ");
  }

  CohortComparisonReport report;
  report.label_a = a.label;
  report.label_b = b.label;
  report.size_a = a.cohort.size();
  report.size_b = b.cohort.size();
  report.tirps_a = a.patterns.size();
  report.tirps_b = b.patterns.size();
  report.mining = a.config;
  report.stats = cfg;

  // Union of both pattern sets in canonical order.
  std::map<std::string, UnionEntry> merged;
  for (const auto& p : a.patterns) {
    auto& u = merged[canonical_string(p.tirp)];
    u.tirp = &p.tirp;
    u.in_a = &p.stats;
  }
  for (const auto& p : b.patterns) {
    auto& u = merged[canonical_string(p.tirp)];
    if (!u.tirp) u.tirp = &p.tirp;
    u.in_b = &p.stats;
  }
  std::vector<UnionEntry> entries;
  entries.reserve(merged.size());
  for (auto& [canonical, u] : merged) {
    u.canonical = canonical;
    entries.push_back(u);
  }
  std::stable_sort(entries.begin(), entries.end(), [](const UnionEntry& x, const UnionEntry& y) {
    return tirp_less(*x.tirp, *y.tirp);
  });
  std::map<std::string_view, std::size_t> row_of;
  for (std::size_t i = 0; i < entries.size(); ++i) row_of.emplace(entries[i].canonical, i);

  for (const auto& u : entries) {
    count_split(report.all, u);
    count_split(u.tirp->size() == 1 ? report.single : report.multi, u);
  }

  // Global: KS over per-TIRP supports.
  std::vector<double> ks_a, ks_b;
  for (const auto& u : entries) {
    const bool shared = u.in_a && u.in_b;
    if (cfg.ks_domain == KsDomain::Shared && !shared) continue;
    ks_a.push_back(u.in_a ? u.in_a->horizontal_support : 0.0);
    ks_b.push_back(u.in_b ? u.in_b->horizontal_support : 0.0);
  }
  if (!ks_a.empty()) report.ks = ks_two_sample(ks_a, ks_b, cfg.alpha);

  // Local: proportion test per shared TIRP.
  if (report.size_a > 0 && report.size_b > 0) {
    for (const auto& u : entries) {
      if (!(u.in_a && u.in_b)) continue;
      report.between.push_back({u.canonical, proportion_test(u.in_a->entities, report.size_a,
                                                             u.in_b->entities, report.size_b,
                                                             cfg.alpha)});
    }
  }

  // Presence over A then B, for the split controls and information gain.
  CohortIntervals combined;
  combined.entities = a.cohort.entities;
  combined.intervals = a.cohort.intervals;
  combined.entities.insert(combined.entities.end(), b.cohort.entities.begin(),
                           b.cohort.entities.end());
  combined.intervals.insert(combined.intervals.end(), b.cohort.intervals.begin(),
                            b.cohort.intervals.end());
  {
    auto ids = combined.entities;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw DataError("an entity belongs to both '" + a.label + "' and '" + b.label + "'");
    }
  }
  const auto presence = presence_matrix(entries, combined, a.config.relations, cfg.threads);

  report.within_a = within_class_tests(a, row_of, presence, 0, cfg.split_seed, cfg.alpha);
  report.within_b = within_class_tests(b, row_of, presence, report.size_a,
                                       cfg.split_seed ^ 0x9e3779b97f4a7c15ULL, cfg.alpha);

  report.proportion_tests = {
      summarize("between", a.label + " vs. " + b.label, report.between),
      summarize("within_a", "Only " + a.label + " (50% vs. 50%)", report.within_a),
      summarize("within_b", "Only " + b.label + " (50% vs. 50%)", report.within_b)};

  // Information gain of every TIRP's presence vector.
  if (report.size_a > 0 && report.size_b > 0) {
    std::vector<int> labels(combined.size(), 0);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(report.size_a), 1);
    std::vector<RankedPattern> ranked;
    ranked.reserve(entries.size());
    std::vector<bool> feature(combined.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      std::size_t in_a = 0, in_b = 0;
      for (std::size_t e = 0; e < combined.size(); ++e) {
        feature[e] = presence[i][e] != 0;
        if (feature[e]) ++(e < report.size_a ? in_a : in_b);
      }
      RankedPattern r;
      r.tirp = entries[i].canonical;
      r.k = entries[i].tirp->size();
      r.information_gain = information_gain(feature, labels);
      r.support_a = static_cast<double>(in_a) / static_cast<double>(report.size_a);
      r.support_b = static_cast<double>(in_b) / static_cast<double>(report.size_b);
      ranked.push_back(std::move(r));
    }
    // entries are already in canonical pattern order, so stable_sort keeps it for ties.
    std::stable_sort(ranked.begin(), ranked.end(), [](const RankedPattern& x, const RankedPattern& y) {
      return x.information_gain > y.information_gain;
    });
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      ranked[i].rank = (i > 0 && ranked[i].information_gain == ranked[i - 1].information_gain)
                           ? ranked[i - 1].rank
                           : i + 1;
    }
    if (ranked.size() > cfg.top_n) ranked.resize(cfg.top_n);
    report.top = std::move(ranked);
  }
  return report;
}

nlohmann::json report_to_json(const CohortComparisonReport& r) {
  using nlohmann::json;
  auto split_json = [](const LengthSplit& s) {
    return json{{"distinct", s.distinct},
                {"shared", s.shared},
                {"exclusive_a", s.exclusive_a},
                {"exclusive_b", s.exclusive_b}};
  };
  json out;
  out["classes"] = {{"a", {{"label", r.label_a}, {"entities", r.size_a}, {"tirps", r.tirps_a}}},
                    {"b", {{"label", r.label_b}, {"entities", r.size_b}, {"tirps", r.tirps_b}}}};
  out["config"] = {{"min_support", r.mining.min_support},
                   {"epsilon", r.mining.relations.epsilon},
                   {"max_gap", r.mining.relations.max_gap},
                   {"max_len", r.mining.max_pattern_len},
                   {"alpha", r.stats.alpha},
                   {"ks_domain", ks_domain_name(r.stats.ks_domain)},
                   {"split_seed", r.stats.split_seed}};
  out["totals"] = split_json(r.all);
  out["totals"]["k1"] = split_json(r.single);
  out["totals"]["k2plus"] = split_json(r.multi);
  if (r.ks) {
    out["ks"] = {{"domain", ks_domain_name(r.stats.ks_domain)},
                 {"d", r.ks->d_statistic},
                 {"critical_d", r.ks->critical_d},
                 {"alpha", r.ks->alpha},
                 {"n1", r.ks->n1},
                 {"n2", r.ks->n2},
                 {"reject", r.ks->reject}};
  } else {
    out["ks"] = nullptr;
  }
  out["proportion_tests"] = json::array();
  for (const auto& p : r.proportion_tests) {
    out["proportion_tests"].push_back({{"test", p.name},
                                       {"description", p.description},
                                       {"tested", p.tested},
                                       {"different", p.different},
                                       {"percent", p.percent}});
  }
  out["top_patterns"] = json::array();
  for (const auto& t : r.top) {
    out["top_patterns"].push_back({{"rank", t.rank},
                                   {"tirp", t.tirp},
                                   {"k", t.k},
                                   {"ig", t.information_gain},
                                   {"support_a", t.support_a},
                                   {"support_b", t.support_b}});
  }
  return out;
}

}  // namespace tirpforge
