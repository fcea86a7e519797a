#include <doctest.h>

#include <set>

#include "oracles.hpp"
#include "tirpforge/errors.hpp"
#include "tirpforge/miner.hpp"

using namespace tirpforge;

namespace {

Symbol sym(const std::string& concept_id, const std::string& label = "High",
           Kind kind = Kind::State) {
  return LabelCatalog().make_symbol(concept_id, kind, label);
}

SymbolicInterval iv(const std::string& e, const Symbol& s, Minutes a, Minutes b) {
  return {e, s, a, b};
}

MinerConfig config(double min_support, Minutes eps = 0, std::size_t max_len = 5,
                   Minutes max_gap = 720) {
  MinerConfig cfg;
  cfg.min_support = min_support;
  cfg.relations = {eps, max_gap};
  cfg.max_pattern_len = max_len;
  return cfg;
}

std::set<std::string> keys(const std::vector<MinedPattern>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(canonical_string(p.tirp));
  return out;
}

// Anti-monotonicity and half-matrix consistency over a full mining output.
std::size_t structural_violations(const std::vector<MinedPattern>& out, const MinerConfig& cfg,
                                  std::size_t cohort_size) {
  std::map<std::string, double> support;
  for (const auto& p : out) support[canonical_string(p.tirp)] = p.stats.horizontal_support;
  std::size_t bad = 0;
  for (const auto& p : out) {
    if (!half_matrix_consistent(p.tirp, pruning_table(cfg.relations))) ++bad;
    if (p.stats.instances < p.stats.entities) ++bad;
    if (std::abs(p.stats.horizontal_support -
                 static_cast<double>(p.stats.entities) / static_cast<double>(cohort_size)) >
        1e-12)
      ++bad;
    if (p.tirp.size() < 2) continue;
    auto it = support.find(canonical_string(p.tirp.prefix()));
    if (it == support.end() || it->second < p.stats.horizontal_support) ++bad;
  }
  return bad;
}

}  // namespace

TEST_CASE("single interval gives a single 1-TIRP") {
  const auto bt = sym("BT");
  const auto cohort = CohortIntervals::build({"p"}, {iv("p", bt, 0, 60)});
  const auto out = mine(cohort, config(0.1));
  REQUIRE(out.size() == 1);
  CHECK(canonical_string(out[0].tirp) == "BT.S.High;");
  CHECK(out[0].stats == SupportStats{1, 1.0, 1});
  CHECK(enumerate_bruteforce(cohort, config(0.1, 0, 4)) == out);
}

TEST_CASE("meets pair") {
  const auto cohort =
      CohortIntervals::build({"p"}, {iv("p", sym("BT"), 0, 60), iv("p", sym("HR"), 60, 120)});
  const auto out = mine(cohort, config(0.1));
  CHECK(keys(out) == std::set<std::string>{"BT.S.High;", "HR.S.High;", "BT.S.High|HR.S.High;m"});
  for (const auto& p : out) CHECK(p.stats.horizontal_support == 1.0);
  CHECK(out.back().tirp.size() == 2);
  CHECK(enumerate_bruteforce(cohort, config(0.1, 0, 4)) == out);
}

TEST_CASE("empty cohort and empty input") {
  CHECK(mine(CohortIntervals{}, config(0.1)).empty());
  CHECK(enumerate_bruteforce(CohortIntervals{}, config(0.1, 0, 4)).empty());
  const auto cohort = CohortIntervals::build({"a", "b"}, {});
  CHECK(mine(cohort, config(0.1)).empty());
}

TEST_CASE("support counts entities once") {
  const auto bt = sym("BT");
  const auto hr = sym("HR", "Increasing", Kind::Gradient);
  // four instances of BT < HR in one entity
  const auto single = CohortIntervals::build(
      {"p"}, {iv("p", bt, 0, 10), iv("p", bt, 20, 30), iv("p", hr, 40, 50), iv("p", hr, 35, 36)});
  Tirp t{{bt, hr}, {Relation::Before}};
  const auto s = support(t, single, {0, 720});
  CHECK(s.entities == 1);
  CHECK(s.horizontal_support == 1.0);
  CHECK(s.instances == 4);

  Tirp absent{{hr, bt}, {Relation::Before}};
  CHECK(support(absent, single, {0, 720}).horizontal_support == 0.0);

  const auto four = CohortIntervals::build(
      {"a", "b", "c", "d"},
      {iv("a", bt, 0, 10), iv("a", hr, 20, 30), iv("b", bt, 0, 10), iv("b", hr, 100, 130),
       iv("c", hr, 0, 10), iv("c", bt, 20, 30), iv("d", bt, 0, 50), iv("d", hr, 10, 20)});
  const Tirp pair{{bt, hr}, {Relation::Before}};
  CHECK(support(pair, four, {0, 720}).horizontal_support == 0.5);
  CHECK(support(pair, four, {0, 50}).horizontal_support == 0.25);
}

TEST_CASE("same-symbol repeats use distinct intervals") {
  const auto bt = sym("BT");
  const auto cohort = CohortIntervals::build({"p"}, {iv("p", bt, 0, 10), iv("p", bt, 20, 30)});
  const auto out = mine(cohort, config(0.5));
  CHECK(keys(out) == std::set<std::string>{"BT.S.High;", "BT.S.High|BT.S.High;<"});
  CHECK(out[0].stats.instances == 2);
  CHECK(out[1].stats.instances == 1);
}

TEST_CASE("oracle equivalence on seeded random cohorts") {
  std::size_t runs = 0, patterns = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    for (Minutes eps : {0, 2}) {
      const double min_support = seed % 2 ? 0.1 : 0.3;
      oracle::RandomCohortSpec spec;
      spec.entities = 1 + seed % 10;
      const auto cohort = oracle::random_cohort(seed * 31 + eps, spec);
      const auto cfg = config(min_support, eps, 4, 25);
      const auto fast = mine(cohort, cfg);
      const auto slow = enumerate_bruteforce(cohort, cfg);
      INFO("seed " << seed << " eps " << eps);
      CHECK(fast == slow);
      CHECK(structural_violations(fast, cfg, cohort.size()) == 0);
      ++runs;
      patterns += fast.size();
    }
  }
  CHECK(runs == 240);
  CHECK(patterns > 1000);
}

TEST_CASE("oracle equivalence with 20 entities at support 0.2") {
  oracle::RandomCohortSpec spec;
  spec.entities = 20;
  spec.max_intervals = 10;
  for (std::uint64_t seed = 500; seed < 510; ++seed) {
    const auto cohort = oracle::random_cohort(seed, spec);
    const auto cfg = config(0.2, 0, 4);
    CHECK(mine(cohort, cfg) == enumerate_bruteforce(cohort, cfg));
  }
}

TEST_CASE("brute force refuses oversized input") {
  oracle::RandomCohortSpec spec;
  spec.entities = kBruteForceMaxEntities + 1;
  spec.max_intervals = 1;
  CHECK_THROWS_AS(enumerate_bruteforce(oracle::random_cohort(1, spec), config(0.5)), UsageError);
  CHECK_THROWS_AS(enumerate_bruteforce(CohortIntervals{}, config(0.5, 0, 5)), UsageError);
  std::vector<SymbolicInterval> many;
  for (int i = 0; i < 13; ++i) many.push_back(iv("p", sym("BT"), i, i));
  CHECK_THROWS_AS(enumerate_bruteforce(CohortIntervals::build({"p"}, many), config(0.5, 0, 3)),
                  UsageError);
}

TEST_CASE("miner config validation") {
  CHECK_THROWS_AS(validate(config(0.0)), UsageError);
  CHECK_THROWS_AS(validate(config(1.5)), UsageError);
  CHECK_THROWS_AS(validate(config(0.5, 0, 0)), UsageError);
  CHECK_THROWS_AS(validate(config(0.5, 10, 3, 10)), UsageError);
  CHECK_NOTHROW(validate(config(1.0)));
  CHECK(meets_support(30, 300, 0.1));
  CHECK_FALSE(meets_support(29, 300, 0.1));
  CHECK_THROWS_AS(CohortIntervals::build({"a"}, {iv("b", sym("BT"), 0, 1)}), DataError);
}

TEST_CASE("determinism across thread counts and runs") {
  oracle::RandomCohortSpec spec;
  spec.entities = 60;
  spec.max_intervals = 25;
  spec.symbols = 6;
  spec.horizon = 100;
  const auto cohort = oracle::random_cohort(77, spec);
  auto cfg = config(0.15, 1, 5, 40);
  const auto base = mine(cohort, cfg);
  CHECK(base.size() > 100);
  for (std::size_t threads : {2u, 3u, 8u}) {
    cfg.threads = threads;
    CHECK(mine(cohort, cfg) == base);
  }
  cfg.threads = 1;
  CHECK(mine(cohort, cfg) == base);
  CHECK(structural_violations(base, cfg, cohort.size()) == 0);
  for (std::size_t i = 1; i < base.size(); ++i) CHECK(tirp_less(base[i - 1].tirp, base[i].tirp));
}

TEST_CASE("threshold and length monotonicity") {
  oracle::RandomCohortSpec spec;
  spec.entities = 40;
  spec.max_intervals = 15;
  const auto cohort = oracle::random_cohort(123, spec);
  std::set<std::string> previous;
  for (double s : {0.5, 0.3, 0.2, 0.1}) {
    const auto cur = keys(mine(cohort, config(s, 0, 4)));
    for (const auto& k : previous) CHECK(cur.contains(k));
    previous = cur;
  }
  std::set<std::string> shorter;
  for (std::size_t len = 1; len <= 5; ++len) {
    const auto out = mine(cohort, config(0.2, 0, len));
    for (const auto& p : out) CHECK(p.tirp.size() <= len);
    const auto cur = keys(out);
    for (const auto& k : shorter) CHECK(cur.contains(k));
    shorter = cur;
  }
}

TEST_CASE("min_support 1.0 keeps only universal patterns") {
  const auto bt = sym("BT"), hr = sym("HR"), rr = sym("RR");
  const auto cohort = CohortIntervals::build(
      {"a", "b"}, {iv("a", bt, 0, 10), iv("a", hr, 10, 20), iv("a", rr, 30, 40),
                   iv("b", bt, 5, 15), iv("b", hr, 15, 25)});
  CHECK(keys(mine(cohort, config(1.0))) ==
        std::set<std::string>{"BT.S.High;", "HR.S.High;", "BT.S.High|HR.S.High;m"});
}

TEST_CASE("canonical string round-trip") {
  CHECK(canonical_string(Tirp{{sym("BT")}, {}}) == "BT.S.High;");
  const Tirp three{{sym("BT"), sym("HR", "Increasing", Kind::Gradient), sym("WBC")},
                   {Relation::Overlaps, Relation::Before, Relation::Meets}};
  CHECK(canonical_string(three) == "BT.S.High|HR.G.Increasing|WBC.S.High;o,<,m");
  CHECK(parse_tirp(canonical_string(three)) == three);
  CHECK(parse_tirp("Concept.with.dots.S.Low;").symbols[0].concept_id == "Concept.with.dots");

  oracle::RandomCohortSpec spec;
  spec.entities = 30;
  const auto out = mine(oracle::random_cohort(9, spec), config(0.1, 0, 5, 30));
  for (const auto& p : out) CHECK(parse_tirp(canonical_string(p.tirp)) == p.tirp);

  for (const char* bad : {"", "BT.S.High", "BT.X.High;", "BT.S.High|HR.S.High;", "BT.S.High;m",
                          "BT.S.High|HR.S.High;q", "BT.High;"}) {
    CHECK_THROWS_AS(parse_tirp(bad), DataError);
  }
}

TEST_CASE("half-matrix indexing") {
  for (std::size_t k = 2; k <= 6; ++k) {
    std::size_t expected = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) CHECK(half_matrix_index(k, i, j) == expected++);
    CHECK(expected == half_matrix_size(k));
  }
  const Tirp t{{sym("A"), sym("B"), sym("C")},
               {Relation::Before, Relation::Before, Relation::Meets}};
  CHECK(t.prefix() == Tirp{{sym("A"), sym("B")}, {Relation::Before}});
  CHECK(half_matrix_consistent(t, transitivity_table()));
  const Tirp inconsistent{{sym("A"), sym("B"), sym("C")},
                          {Relation::Meets, Relation::Equals, Relation::Meets}};
  CHECK_FALSE(half_matrix_consistent(inconsistent, transitivity_table()));
}
