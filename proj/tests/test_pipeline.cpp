#include <doctest.h>

#include <set>

#include "pipeline_util.hpp"
#include "tirpforge/errors.hpp"
#include "tirpforge/knowledge_base.hpp"
#include "tirpforge/synth.hpp"

using namespace tirpforge;
namespace fs = std::filesystem;

namespace {

std::size_t count_lines(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

const std::string kExample = TIRPFORGE_SOURCE_DIR "/data/example";

// Random realizable pattern over distinct KB concepts: random grid intervals
// (length >= 1, distinct endpoints pairs) classified at eps 0.
Tirp random_planted_tirp(Rng& rng, const KnowledgeBase& kb, std::size_t k) {
  const LabelCatalog catalog(kb);
  std::vector<std::string> concepts;
  for (const auto& [c, rule] : kb.rules) concepts.push_back(c);
  rng.shuffle(concepts);
  static const char* kStates[] = {"Low", "Normal", "High"};
  static const char* kGradients[] = {"Decreasing", "Stable", "Increasing"};

  std::vector<SymbolicInterval> ivs;
  std::set<std::pair<Minutes, Minutes>> used;
  for (std::size_t i = 0; i < k; ++i) {
    const bool gradient = rng.below(2) == 1;
    const auto* rule = kb.find(concepts[i]);
    std::string label = gradient ? kGradients[rng.below(3)] : kStates[rng.below(3)];
    if (!gradient && rule->has_custom_labels()) label = rule->state_labels[rng.below(3)];
    Minutes s = 0, e = 0;
    do {
      s = rng.between(0, 6);
      e = s + rng.between(1, 3);
    } while (used.contains({s, e}));
    used.insert({s, e});
    ivs.push_back({"x", catalog.make_symbol(concepts[i],
                                            gradient ? Kind::Gradient : Kind::State, label),
                   s, e});
  }
  std::sort(ivs.begin(), ivs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.start, a.end) < std::tie(b.start, b.end);
  });
  Tirp t;
  for (const auto& iv : ivs) t.symbols.push_back(iv.symbol);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      t.relations.push_back(*classify_relation(ivs[i], ivs[j], RelationConfig{0, 1000}));
  return t;
}

}  // namespace

TEST_CASE("synth with no entities writes header-only files") {
  const auto dir = oracle::scratch_dir("synth_empty");
  run_synth(pipeline::write_config(dir, pipeline::synth_config(1, 0, 0, {})).string(),
            (dir / "out").string());
  CHECK(oracle::read_file(dir / "out/events.csv") == "entity_id,concept,timestamp,value\n");
  CHECK(oracle::read_file(dir / "out/labels.csv") == "entity_id,class\n");
  CHECK(oracle::read_file(dir / "out/reference_times.csv") ==
        "entity_id,admission_time,reference_time\n");
}

TEST_CASE("synth is deterministic per seed") {
  const auto dir = oracle::scratch_dir("synth_seed");
  const std::vector<pipeline::Planted> planted = {{"BodyTemperature.S.High;", 0.5, 0.2}};
  auto run = [&](std::uint64_t seed, const std::string& name) {
    const auto out = dir / name;
    fs::create_directories(out);
    run_synth(pipeline::write_config(out, pipeline::synth_config(seed, 30, 30, planted)).string(),
              (out / "data").string());
    return oracle::read_file(out / "data/events.csv") + oracle::read_file(out / "data/labels.csv");
  };
  const auto a = run(3, "a");
  CHECK(a == run(3, "b"));
  CHECK(a != run(4, "c"));
  CHECK(count_lines(oracle::read_file(dir / "a/data/labels.csv")) == 61);
}

TEST_CASE("planted patterns are recovered at their planted rate") {
  const auto kb = load_kb(pipeline::kKbPath);
  const LabelCatalog catalog(kb);
  Rng rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    const auto tirp = random_planted_tirp(rng, kb, 2 + trial % 2);
    const auto text = canonical_string(tirp);
    INFO(text);
    const double case_rate = trial == 0 ? 1.0 : 0.3 + 0.1 * trial;
    const auto dir = oracle::scratch_dir("closure_" + std::to_string(trial));
    const auto out = pipeline::run_library(
        dir, pipeline::synth_config(100 + trial, 200, 200, {{text, case_rate, 0.1}}), 2,
        pipeline::default_mining(0.05, tirp.size()));
    const auto mined = load_mined(out.case_mined.string(), catalog);
    CHECK(mined.entities == 200);
    const auto it = std::find_if(mined.patterns.begin(), mined.patterns.end(),
                                 [&](const MinedPattern& p) { return p.tirp == tirp; });
    REQUIRE(it != mined.patterns.end());
    CHECK(it->stats.horizontal_support >= case_rate - 0.05);
    if (case_rate == 1.0) CHECK(it->stats.horizontal_support == 1.0);
  }
}

TEST_CASE("plan_layout reproduces the requested relations") {
  const auto kb = load_kb(pipeline::kKbPath);
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto tirp = random_planted_tirp(rng, kb, 2 + trial % 3);
    const auto layout = plan_layout(tirp, 12);
    REQUIRE(layout.size() == tirp.size());
    for (std::size_t i = 0; i < tirp.size(); ++i) {
      if (tirp.symbols[i].kind == Kind::Gradient) CHECK(layout[i].end > layout[i].start);
      for (std::size_t j = i + 1; j < tirp.size(); ++j)
        CHECK(classify_relation(layout[i], layout[j], RelationConfig{0, 1000}) ==
              tirp.relation(i, j));
    }
  }
}

TEST_CASE("unrealizable planted patterns are rejected") {
  const auto dir = oracle::scratch_dir("synth_bad");
  auto load = [&](const std::vector<pipeline::Planted>& planted, nlohmann::json extra = {}) {
    auto doc = pipeline::synth_config(1, 10, 10, planted);
    for (auto& [k, v] : extra.items()) doc[k] = v;
    return load_synth_config(pipeline::write_config(dir, doc).string());
  };
  CHECK_NOTHROW(load({{"HeartRate.S.High|BodyTemperature.S.High;<", 0.5, 0.1}}));
  // same concept twice in one pattern
  CHECK_THROWS_AS(load({{"HeartRate.S.High|HeartRate.G.Increasing;o", 0.5, 0.1}}), UsageError);
  // concept shared between patterns
  CHECK_THROWS_AS(load({{"HeartRate.S.High;", 0.5, 0.1}, {"HeartRate.G.Stable;", 0.5, 0.1}}),
                  UsageError);
  CHECK_THROWS_AS(load({{"HeartRate.S.High;", 1.5, 0.1}}), UsageError);
  try {
    load({{"HeartRate.S.High|BodyTemperature.S.High|PH.S.Low;<,<,<", 0.5, 0.1}},
         {{"horizon", 60}});
    FAIL("expected an error");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("unrealizable") != std::string::npos);
    CHECK(std::string(e.what()).find("HeartRate.S.High") != std::string::npos);
  }
  CHECK_THROWS_AS(load({{"Nope.S.High;", 0.5, 0.1}}), UsageError);
}

TEST_CASE("example dataset reproduces the golden intervals through the CLI") {
  const auto dir = oracle::scratch_dir("cli_golden");
  const auto r = pipeline::run_cli(
      {"abstract", "--events", kExample + "/events.csv", "--kb", pipeline::kKbPath, "--windows",
       kExample + "/reference_times.csv", "--lab-concepts",
       TIRPFORGE_SOURCE_DIR "/kb/lab_concepts.txt", "--time-format", "rfc3339", "--out",
       (dir / "intervals.csv").string()},
      dir);
  REQUIRE(r.exit_code == 0);
  CHECK(oracle::read_file(dir / "intervals.csv") ==
        oracle::read_file(kExample + "/intervals.golden.csv"));
  CHECK(r.err.find("Weight") != std::string::npos);
  CHECK(r.out.rfind("concept,intervals\n", 0) == 0);
}

TEST_CASE("abstract on an empty log writes only the header") {
  const auto dir = oracle::scratch_dir("abstract_empty");
  oracle::write_file(dir / "events.csv", "entity_id,concept,timestamp,value\n");
  AbstractOptions ab;
  ab.events = (dir / "events.csv").string();
  ab.kb = pipeline::kKbPath;
  ab.out = (dir / "out.csv").string();
  const auto summary = run_abstract(ab);
  CHECK(summary.entities == 0);
  CHECK(oracle::read_file(dir / "out.csv") == "entity_id,concept,kind,label,start,end\n");

  ab.lab_concepts = TIRPFORGE_SOURCE_DIR "/kb/lab_concepts.txt";
  CHECK_THROWS_AS(run_abstract(ab), UsageError);
}

TEST_CASE("mine writes one file per class") {
  const auto dir = oracle::scratch_dir("mine_classes");
  oracle::RandomCohortSpec spec;
  spec.entities = 12;
  spec.max_intervals = 8;
  const auto cohort = oracle::random_cohort(31, spec);
  std::vector<SymbolicInterval> all;
  std::map<std::string, std::string> labels;
  for (std::size_t e = 0; e < cohort.size(); ++e) {
    all.insert(all.end(), cohort.intervals[e].begin(), cohort.intervals[e].end());
    labels[cohort.entities[e]] = e % 3 == 0 ? "a" : "b";
  }
  {
    std::ofstream out(dir / "intervals.csv");
    write_intervals(out, all);
    std::ofstream lab(dir / "labels.csv");
    write_labels(lab, labels);
  }
  MineOptions mi;
  mi.intervals = (dir / "intervals.csv").string();
  mi.labels = (dir / "labels.csv").string();
  mi.config = pipeline::default_mining(0.25, 4);
  mi.out_dir = (dir / "mined").string();
  const auto outputs = run_mine(mi);
  REQUIRE(outputs.size() == 2);

  // each class file equals the brute-force enumeration of that class
  const auto classes = partition_by_class(labels, load_intervals(mi.intervals));
  for (const auto& o : outputs) {
    const auto mined = load_mined(o.path);
    CHECK(mined.label == o.label);
    CHECK(mined.entities == classes.at(o.label).size());
    CHECK(same_mining_config(mined.config, mi.config));
    CHECK(mined.patterns == enumerate_bruteforce(classes.at(o.label), mi.config));
  }

  // single class
  std::map<std::string, std::string> one;
  for (const auto& [e, c] : labels) one[e] = "only";
  {
    std::ofstream lab(dir / "one.csv");
    write_labels(lab, one);
  }
  mi.labels = (dir / "one.csv").string();
  mi.out_dir = (dir / "single").string();
  const auto single = run_mine(mi);
  REQUIRE(single.size() == 1);
  CHECK(fs::exists(dir / "single/only.jsonl"));
  CHECK(std::distance(fs::directory_iterator(dir / "single"), fs::directory_iterator{}) == 1);

  // an entity with intervals but no label
  labels.erase(cohort.entities[1]);
  {
    std::ofstream lab(dir / "missing.csv");
    write_labels(lab, labels);
  }
  mi.labels = (dir / "missing.csv").string();
  if (!cohort.intervals[1].empty()) {
    try {
      run_mine(mi);
      FAIL("expected an error");
    } catch (const DataError& e) {
      CHECK(std::string(e.what()).find(cohort.entities[1]) != std::string::npos);
    }
  }
}

TEST_CASE("CLI exit codes") {
  const auto dir = oracle::scratch_dir("cli_exit");
  CHECK(pipeline::run_cli({"--help"}, dir).exit_code == 0);
  CHECK(pipeline::run_cli({}, dir).exit_code == 1);
  CHECK(pipeline::run_cli({"mine", "--bogus"}, dir).exit_code == 1);

  oracle::write_file(dir / "bad.csv", "entity_id,concept,timestamp,value\np,HeartRate,x,1\n");
  const auto bad = pipeline::run_cli({"abstract", "--events", (dir / "bad.csv").string(), "--kb",
                                      pipeline::kKbPath, "--out", (dir / "o.csv").string()},
                                     dir);
  CHECK(bad.exit_code == 2);
  CHECK(bad.err.find("bad.csv:2") != std::string::npos);

  oracle::write_file(dir / "report.json", "{\"proportion_tests\": []}");
  CHECK(pipeline::run_cli({"report", "--in", (dir / "report.json").string()}, dir).exit_code == 2);
  CHECK(pipeline::run_cli({"--threads", "x", "report", "--in", "y"}, dir).exit_code == 1);
  CHECK(pipeline::run_cli({"report", "--in", (dir / "report.json").string()}, dir,
                          "TIRP_FORGE_THREADS=notanumber")
            .exit_code == 1);
}

TEST_CASE("discriminate rejects mismatched mining runs") {
  const auto dir = oracle::scratch_dir("disc_mismatch");
  const auto cfg = pipeline::synth_config(9, 20, 20, {{"HeartRate.S.High;", 0.5, 0.1}});
  const auto out = pipeline::run_library(dir, cfg);

  const auto r = pipeline::run_cli(
      {"mine", "--intervals", out.intervals.string(), "--labels", (dir / "data/labels.csv").string(),
       "--min-support", "0.3", "--out-dir", (dir / "other").string()},
      dir);
  REQUIRE(r.exit_code == 0);
  const auto d = pipeline::run_cli(
      {"discriminate", "--mined-a", out.case_mined.string(), "--mined-b",
       (dir / "other/control.jsonl").string(), "--labels", (dir / "data/labels.csv").string(),
       "--intervals", out.intervals.string(), "--out", (dir / "r.json").string()},
      dir);
  CHECK(d.exit_code == 2);
  CHECK_FALSE(fs::exists(dir / "r.json"));
}

TEST_CASE("report tables") {
  const auto dir = oracle::scratch_dir("report_tables");
  const std::string planted = "BodyTemperature.S.High|HeartRate.S.High;m";
  const auto out =
      pipeline::run_library(dir, pipeline::synth_config(8, 100, 100, {{planted, 0.7, 0.1}}));
  const auto json = nlohmann::json::parse(oracle::read_file(out.report));

  // top 0: the pattern table is just its header
  std::ostringstream csv;
  run_report({out.report.string(), 0, TableFormat::Csv}, csv);
  std::istringstream lines(csv.str());
  std::vector<std::string> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(line);
  REQUIRE(rows.size() == 6);
  CHECK(rows[0] == "rank,tirp,ig,support_case,support_control");
  CHECK(rows[1].empty());
  CHECK(rows[2] == "test,description,tested,different,percent");
  CHECK(rows[3].rfind("between,case vs. control,", 0) == 0);
  CHECK(rows[4].rfind("within_a,Only case (50% vs. 50%),", 0) == 0);
  CHECK(rows[5].rfind("within_b,Only control (50% vs. 50%),", 0) == 0);

  // the planted row shows a much higher case support
  std::ostringstream text;
  run_report({out.report.string(), 50, TableFormat::Text}, text);
  CHECK(text.str().find(planted) != std::string::npos);
  bool found = false;
  for (const auto& p : json.at("top_patterns")) {
    if (p.at("tirp") != planted) continue;
    found = true;
    CHECK(p.at("support_a").get<double>() == doctest::Approx(0.7));
    CHECK(p.at("support_a").get<double>() > 3 * p.at("support_b").get<double>());
  }
  CHECK(found);
  CHECK(oracle::read_file(dir / "report.txt") == [&] {
    std::ostringstream t;
    run_report({out.report.string(), 50, TableFormat::Text}, t);
    return t.str();
  }());

  // malformed reports
  auto broken = json;
  broken["proportion_tests"].erase(0);
  oracle::write_file(dir / "broken.json", broken.dump());
  std::ostringstream sink;
  CHECK_THROWS_AS(run_report({(dir / "broken.json").string(), 10, TableFormat::Text}, sink),
                  DataError);
  oracle::write_file(dir / "garbage.json", "{not json");
  CHECK_THROWS_AS(run_report({(dir / "garbage.json").string(), 10, TableFormat::Text}, sink),
                  DataError);
}

TEST_CASE("pipeline output does not depend on the thread count") {
  const auto cfg = pipeline::synth_config(
      17, 60, 60, {{"HeartRate.S.High|BodyTemperature.G.Increasing;o", 0.6, 0.1}});
  const auto one = pipeline::run_cli_pipeline(oracle::scratch_dir("threads_1"), cfg, "1");
  const auto many = pipeline::run_cli_pipeline(oracle::scratch_dir("threads_8"), cfg, "8");
  REQUIRE(one.rfind("FAILED", 0) != 0);
  CHECK(one == many);
  CHECK(one == pipeline::run_cli_pipeline(oracle::scratch_dir("threads_1b"), cfg, "1"));
}
