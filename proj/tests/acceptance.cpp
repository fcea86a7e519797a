// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>

#include "kb_golden.hpp"
#include "oracles.hpp"
#include "pipeline_util.hpp"
#include "tirpforge/kbta.hpp"
#include "tirpforge/knowledge_base.hpp"
#include "tirpforge/stats.hpp"

using namespace tirpforge;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every mining output produced below, for the structural criterion.
struct MiningRun {
  std::vector<MinedPattern> patterns;
  MinerConfig config;
  std::size_t cohort_size;
};
std::vector<MiningRun> g_runs;

Outcome oracle_equivalence() {
  std::size_t runs = 0, mismatches = 0, patterns = 0;
  oracle::RandomCohortSpec spec;
  spec.entities = 10;
  spec.max_intervals = 12;
  spec.symbols = 4;
  spec.horizon = 40;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto cohort = oracle::random_cohort(seed, spec);
    for (Minutes eps : {0, 2}) {
      for (double sup : {0.1, 0.3}) {
        MinerConfig cfg;
        cfg.min_support = sup;
        cfg.relations = {eps, 25};
        cfg.max_pattern_len = 4;
        const auto fast = mine(cohort, cfg);
        if (fast != enumerate_bruteforce(cohort, cfg)) ++mismatches;
        patterns += fast.size();
        g_runs.push_back({fast, cfg, cohort.size()});
        ++runs;
      }
    }
  }
  return {runs >= 200 && mismatches == 0,
          std::to_string(runs) + " instances, " + std::to_string(patterns) + " TIRPs, " +
              std::to_string(mismatches) + " mismatches"};
}

Outcome transitivity() {
  const auto brute = oracle::brute_force_compose(8, [](Interval a, Interval b) {
    return classify_relation(a, b, RelationConfig{0, 1000});
  });
  std::size_t bad = 0;
  for (int r1 = 0; r1 < 7; ++r1) {
    for (int r2 = 0; r2 < 7; ++r2) {
      const auto set = compose(static_cast<Relation>(r1), static_cast<Relation>(r2));
      for (int r3 = 0; r3 < 7; ++r3) {
        const bool want = (brute[r1][r2] >> r3) & 1u;
        if (set.contains(static_cast<Relation>(r3)) != want) {
          ++bad;
          break;
        }
      }
    }
  }
  return {bad == 0, std::to_string(49 - bad) + "/49 cells match"};
}

Outcome allen() {
  std::size_t pairs = 0, bad = 0;
  const auto ivs = oracle::grid_intervals(6);
  const RelationConfig cfg{0, 1000};
  for (const auto& a : ivs) {
    for (const auto& b : ivs) {
      if (std::tie(b.start, b.end) < std::tie(a.start, a.end)) continue;
      ++pairs;
      const auto got = classify_relation(a, b, cfg);
      if (!got || got != oracle::textbook_relation(a, b) || got != classify_relation(a, b, cfg))
        ++bad;
    }
  }
  return {bad == 0, std::to_string(pairs) + " ordered pairs, " + std::to_string(bad) + " disagreements"};
}

Outcome kbta_golden() {
  const auto kb = load_kb(pipeline::kKbPath);
  std::size_t bad = kb.rules.size() == 26 ? 0 : 1;
  for (const auto& row : kb_golden::kRows) {
    const auto* r = kb.find(row.concept_id);
    if (!r || r->normal_low != row.low || r->normal_high != row.high ||
        r->gradient_delta != row.delta || r->interp_max_gap != row.gap)
      ++bad;
  }
  const std::string example = TIRPFORGE_SOURCE_DIR "/data/example";
  const auto dir = oracle::scratch_dir("acceptance_golden");
  AbstractOptions ab;
  ab.events = example + "/events.csv";
  ab.kb = pipeline::kKbPath;
  ab.windows = example + "/reference_times.csv";
  ab.lab_concepts = TIRPFORGE_SOURCE_DIR "/kb/lab_concepts.txt";
  ab.time_format = TimeFormat::Rfc3339;
  ab.out = (dir / "intervals.csv").string();
  run_abstract(ab);
  const bool same =
      oracle::read_file(ab.out) == oracle::read_file(example + "/intervals.golden.csv");
  return {bad == 0 && same, std::to_string(26 - std::min<std::size_t>(bad, 26)) +
                                "/26 KB rows, example intervals " +
                                (same ? "byte-identical" : "DIFFER")};
}

Outcome stats_closed_forms() {
  std::vector<std::string> failed;
  auto near = [&](const char* what, double got, double want) {
    if (std::abs(got - want) >= 1e-9) failed.push_back(what);
  };
  const std::vector<int> labels = {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1};
  std::vector<bool> f(20, false);
  for (int i = 0; i < 8; ++i) f[i] = true;
  f[10] = f[11] = true;
  near("ig", information_gain(f, labels), 0.2780719051126377);
  near("z", proportion_test(30, 100, 10, 100, 0.05).z, 3.5355339059327373);
  near("z2", proportion_test(45, 150, 60, 140, 0.05).z, -2.276525933396645);
  near("ks", ks_two_sample(std::vector<double>{1, 2, 3, 4, 5}, std::vector<double>{3, 4, 5, 6, 7, 8}, 0.05).d_statistic, 0.5);
  near("ks_ties",
       ks_two_sample(std::vector<double>{0.1, 0.4, 0.4, 0.9, 1.3, 2.0},
                     std::vector<double>{0.4, 0.5, 0.7, 2.5}, 0.05).d_statistic, 0.25);
  const std::vector<double> h(100, 0.5);
  near("critical_d", ks_two_sample(h, h, 0.05).critical_d, 0.19233304448274094);
  if (ks_two_sample(h, h, 0.05).d_statistic != 0.0) failed.push_back("ks_identical");
  if (ks_two_sample(std::vector<double>{1, 2, 3}, std::vector<double>{4, 5}, 0.05).d_statistic != 1.0) failed.push_back("ks_disjoint");
  std::string detail = "8 checks";
  for (const auto& f2 : failed) detail += ", failed " + f2;
  return {failed.empty(), detail};
}

Outcome planted_discrimination() {
  const std::string planted = "BodyTemperature.S.High|HeartRate.S.High;m";
  const auto kb = load_kb(pipeline::kKbPath);
  const LabelCatalog catalog(kb);
  const auto tirp = parse_tirp(planted, catalog);
  const auto key = canonical_string(tirp);
  std::size_t support_ok = 0, between_ok = 0, within_ok = 0, rank_ok = 0;
  double min_support = 1.0;
  std::size_t worst_rank = 0;
  const std::size_t seeds = 20;
  for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
    const auto dir = oracle::scratch_dir("acceptance_planted");
    const auto cfg = pipeline::synth_config(seed, 300, 300, {{planted, 0.6, 0.1}}, 20.0);
    const auto out = pipeline::run_library(dir, cfg, 4, pipeline::default_mining(0.1, 3), seed);
    const auto& rep = out.comparison;

    const auto case_mined = load_mined(out.case_mined.string(), catalog);
    const auto control_mined = load_mined(out.control_mined.string(), catalog);
    g_runs.push_back({case_mined.patterns, case_mined.config, case_mined.entities});
    g_runs.push_back({control_mined.patterns, control_mined.config, control_mined.entities});

    double sup = 0;
    for (const auto& p : case_mined.patterns)
      if (p.tirp == tirp) sup = p.stats.horizontal_support;
    min_support = std::min(min_support, sup);
    if (sup >= 0.55) ++support_ok;

    auto significant_in = [&](const std::vector<PatternTest>& tests) -> std::optional<bool> {
      for (const auto& t : tests)
        if (t.tirp == key) return t.result.significant;
      return std::nullopt;
    };
    if (significant_in(rep.between).value_or(false)) ++between_ok;
    const auto wa = significant_in(rep.within_a);
    const auto wb = significant_in(rep.within_b);
    if (wa && !*wa && !wb.value_or(false)) ++within_ok;

    std::size_t rank = 0;
    for (const auto& t : rep.top)
      if (t.tirp == key) rank = t.rank;
    if (rank >= 1 && rank <= 5) ++rank_ok;
    worst_rank = std::max(worst_rank, rank == 0 ? 999 : rank);
  }
  std::ostringstream d;
  d << "support>=0.55 " << support_ok << "/" << seeds << " (min " << std::setprecision(4)
    << min_support << "), between significant " << between_ok << "/" << seeds
    << ", within non-significant " << within_ok << "/" << seeds << ", IG rank<=5 " << rank_ok
    << "/" << seeds << " (worst " << worst_rank << ")";
  return {support_ok == seeds && between_ok == seeds && within_ok >= 18 && rank_ok == seeds,
          d.str()};
}

// Every (k-1)-subpattern obtained by dropping one interval is present with
// at least the same support; every half-matrix is transitivity-consistent.
Outcome structure() {
  std::size_t patterns = 0, violations = 0;
  for (const auto& run : g_runs) {
    std::map<std::string, double> support;
    for (const auto& p : run.patterns) support[canonical_string(p.tirp)] = p.stats.horizontal_support;
    for (const auto& p : run.patterns) {
      ++patterns;
      const auto& t = p.tirp;
      if (!half_matrix_consistent(t, pruning_table(run.config.relations))) ++violations;
      if (std::abs(p.stats.horizontal_support - static_cast<double>(p.stats.entities) /
                                                     static_cast<double>(run.cohort_size)) > 1e-12)
        ++violations;
      if (t.size() < 2) continue;
      for (std::size_t drop = 0; drop < t.size(); ++drop) {
        Tirp sub;
        for (std::size_t i = 0; i < t.size(); ++i)
          if (i != drop) sub.symbols.push_back(t.symbols[i]);
        for (std::size_t i = 0; i < t.size(); ++i)
          for (std::size_t j = i + 1; j < t.size(); ++j)
            if (i != drop && j != drop) sub.relations.push_back(t.relation(i, j));
        const auto it = support.find(canonical_string(sub));
        if (it == support.end() || it->second < p.stats.horizontal_support) ++violations;
      }
    }
  }
  return {violations == 0 && patterns > 0, std::to_string(g_runs.size()) + " runs, " +
                                               std::to_string(patterns) + " TIRPs, " +
                                               std::to_string(violations) + " violations"};
}

Outcome determinism() {
  const auto cfg = pipeline::synth_config(
      11, 150, 150, {{"HeartRate.S.High|RespiratoryRate.G.Increasing;o", 0.6, 0.1}});
  const auto a = pipeline::run_cli_pipeline(oracle::scratch_dir("acceptance_det_a"), cfg, "1");
  const auto b = pipeline::run_cli_pipeline(oracle::scratch_dir("acceptance_det_b"), cfg, "1");
  const auto c = pipeline::run_cli_pipeline(oracle::scratch_dir("acceptance_det_c"), cfg, "8");
  if (a.rfind("FAILED", 0) == 0) return {false, a};
  return {a == b && a == c, std::to_string(a.size()) + " bytes; repeat " +
                                (a == b ? "identical" : "DIFFERS") + ", threads 1 vs 8 " +
                                (a == c ? "identical" : "DIFFERS")};
}

Outcome report_shape() {
  const auto dir = oracle::scratch_dir("acceptance_report");
  const auto out = pipeline::run_library(
      dir, pipeline::synth_config(5, 120, 120, {{"PH.S.Low|Lactate.S.High;<", 0.5, 0.2}}));
  const auto json = nlohmann::json::parse(oracle::read_file(out.report));
  const auto& rows = json.at("proportion_tests");
  bool ok = rows.size() == 3;
  const char* names[] = {"between", "within_a", "within_b"};
  for (std::size_t i = 0; ok && i < 3; ++i) {
    const auto& r = rows[i];
    ok = r.at("test") == names[i] && r.contains("tested") && r.contains("different") &&
         r.contains("percent");
    if (!ok) break;
    const auto tested = r.at("tested").get<std::size_t>();
    const auto diff = r.at("different").get<std::size_t>();
    const long want =
        tested == 0 ? 0 : static_cast<long>(std::floor(100.0 * diff / tested + 0.5));
    ok = r.at("percent").get<long>() == want;
  }
  std::ostringstream csv;
  run_report({out.report.string(), 10, TableFormat::Csv}, csv);
  const auto text = csv.str();
  const auto table = text.substr(text.find("test,description"));
  ok = ok && table.rfind("test,description,tested,different,percent\n", 0) == 0 &&
       std::count(table.begin(), table.end(), '\n') == 4;
  return {ok, "3 rows (between, within_a, within_b) with tested/different/percent"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", 120, oracle_equivalence},
      {2, "transitivity table", 10, transitivity},
      {3, "Allen classification", 0, allen},
      {4, "KB and abstraction golden", 0, kbta_golden},
      {5, "statistics closed forms", 0, stats_closed_forms},
      {6, "planted pattern discrimination", 300, planted_discrimination},
      {7, "anti-monotonicity and consistency", 0, structure},
      {8, "end-to-end determinism", 0, determinism},
      {9, "report shape", 0, report_shape},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0 && secs >= c.limit_s) {
      o.pass = false;
      o.detail += ", over time limit";
    }
    if (!o.pass) ++failures;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << c.id << " (" << c.name
              << "): " << o.detail << " [" << std::fixed << std::setprecision(2) << secs
              << " s]" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
