#include "tirpforge/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tirpforge/errors.hpp"
#include "tirpforge/io.hpp"
#include "tirpforge/kbta.hpp"
#include "tirpforge/knowledge_base.hpp"
#include "tirpforge/parallel.hpp"
#include "tirpforge/synth.hpp"
#include "tirpforge/window.hpp"

namespace tirpforge {

namespace {

std::ofstream open_output(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
    if (ec) throw UsageError("cannot create " + parent.string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  return out;
}

std::string file_safe(const std::string& label) {
  std::string out = label;
  for (char& c : out) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
                    c == '-' || c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return out;
}

std::string listing(const std::vector<std::string>& items) {
  std::string out;
  const std::size_t shown = std::min<std::size_t>(items.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) out += (i ? ", " : "") + items[i];
  if (items.size() > shown) out += ", ... (" + std::to_string(items.size()) + " total)";
  return out;
}

LabelCatalog catalog_for(const std::optional<std::string>& kb) {
  return kb ? LabelCatalog(load_kb(*kb)) : LabelCatalog();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& rows,
                 TableFormat format) {
  if (format == TableFormat::Csv) {
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
    return;
  }
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()));
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += "  ";
      line += row[i];
      if (i + 1 < row.size()) line.append(width[i] - row[i].size(), ' ');
    }
    out << line << '\n';
  }
}

}  // namespace

std::vector<SymbolicInterval> abstract_log(const EventLog& log, const KnowledgeBase& kb,
                                           std::size_t threads, std::set<std::string>* skipped) {
  std::vector<const std::pair<const std::string, EventLog::EntityEvents>*> entities;
  for (const auto& entry : log.entities()) entities.push_back(&entry);

  std::vector<std::vector<SymbolicInterval>> parts(entities.size());
  std::vector<std::vector<std::string>> missing(entities.size());
  parallel_for(entities.size(), threads, [&](std::size_t i) {
    parts[i] = abstract_entity(entities[i]->first, entities[i]->second, kb, &missing[i]);
  });

  std::vector<SymbolicInterval> out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out.insert(out.end(), std::make_move_iterator(parts[i].begin()),
               std::make_move_iterator(parts[i].end()));
    if (skipped) skipped->insert(missing[i].begin(), missing[i].end());
  }
  return out;
}

std::map<std::string, CohortIntervals> partition_by_class(
    const std::map<std::string, std::string>& labels,
    const std::vector<SymbolicInterval>& intervals) {
  std::vector<std::string> unlabelled;
  std::map<std::string, std::vector<SymbolicInterval>> by_class;
  std::map<std::string, std::vector<std::string>> members;
  for (const auto& [entity, cls] : labels) {
    members[cls].push_back(entity);
    by_class[cls];
  }
  for (const auto& iv : intervals) {
    auto it = labels.find(iv.entity_id);
    if (it == labels.end()) {
      if (unlabelled.empty() || unlabelled.back() != iv.entity_id) {
        unlabelled.push_back(iv.entity_id);
      }
      continue;
    }
    by_class[it->second].push_back(iv);
  }
  if (!unlabelled.empty()) {
    std::sort(unlabelled.begin(), unlabelled.end());
    unlabelled.erase(std::unique(unlabelled.begin(), unlabelled.end()), unlabelled.end());
    throw DataError("entities with intervals but no label: " + listing(unlabelled));
  }
  std::map<std::string, CohortIntervals> out;
  for (auto& [cls, ids] : members) {
    out.emplace(cls, CohortIntervals::build(std::move(ids), by_class[cls]));
  }
  return out;
}

AbstractSummary run_abstract(const AbstractOptions& opts) {
  const KnowledgeBase kb = load_kb(opts.kb);
  EventLog log = load_events(opts.events, opts.time_format);
  if (opts.windows) {
    WindowConfig window;
    window.times = load_reference_times(*opts.windows, opts.time_format, log.epoch_seconds);
    window.window_len = opts.window_min;
    if (opts.lab_concepts) window.lab_concepts = load_concept_list(*opts.lab_concepts);
    log = window_extract(log, window);
  } else if (opts.lab_concepts) {
    throw UsageError("--lab-concepts requires --windows");
  }

  AbstractSummary summary;
  const auto intervals = abstract_log(log, kb, opts.threads, &summary.skipped_concepts);
  summary.entities = log.entities().size();
  summary.intervals = intervals.size();
  for (const auto& iv : intervals) ++summary.per_concept[iv.symbol.concept_id];

  auto out = open_output(opts.out);
  write_intervals(out, intervals);
  return summary;
}

std::vector<MineOutput> run_mine(const MineOptions& opts) {
  validate(opts.config);
  const auto catalog = catalog_for(opts.kb);
  const auto intervals = load_intervals(opts.intervals, catalog);
  const auto labels = load_labels(opts.labels);
  const auto cohorts = partition_by_class(labels, intervals);

  std::vector<MineOutput> outputs;
  for (const auto& [cls, cohort] : cohorts) {
    const auto patterns = mine(cohort, opts.config);
    MineOutput o{cls, (std::filesystem::path(opts.out_dir) / (file_safe(cls) + ".jsonl")).string(),
                 cohort.size(), patterns.size()};
    auto out = open_output(o.path);
    write_mined(out, cls, cohort.size(), opts.config, patterns);
    outputs.push_back(std::move(o));
  }
  return outputs;
}

CohortComparisonReport run_discriminate(const DiscriminateOptions& opts) {
  const auto catalog = catalog_for(opts.kb);
  MinedFile a = load_mined(opts.mined_a, catalog);
  MinedFile b = load_mined(opts.mined_b, catalog);
  if (!same_mining_config(a.config, b.config)) {
    throw DataError("mining configurations differ between " + opts.mined_a + " and " +
                    opts.mined_b);
  }
  const auto intervals = load_intervals(opts.intervals, catalog);
  const auto labels = load_labels(opts.labels);
  auto cohorts = partition_by_class(labels, intervals);

  auto class_mining = [&](MinedFile& file, const std::string& path) {
    auto it = cohorts.find(file.label);
    if (it == cohorts.end()) {
      throw DataError(path + ": class '" + file.label + "' has no labelled entities");
    }
    if (it->second.size() != file.entities) {
      throw DataError(path + ": header lists " + std::to_string(file.entities) +
                      " entities but the labels file has " + std::to_string(it->second.size()));
    }
    return ClassMining{file.label, file.config, std::move(file.patterns), it->second};
  };
  const ClassMining ca = class_mining(a, opts.mined_a);
  const ClassMining cb = class_mining(b, opts.mined_b);
  if (ca.label == cb.label) throw DataError("both mining outputs are for class '" + ca.label + "'");

  auto report = compare_cohorts(ca, cb, opts.stats);
  const auto json = report_to_json(report);
  {
    auto out = open_output(opts.out);
    out << json.dump(2) << '\n';
  }
  auto text_path = std::filesystem::path(opts.out);
  text_path.replace_extension(".txt");
  if (text_path == std::filesystem::path(opts.out)) text_path += ".txt";
  auto text = open_output(text_path.string());
  write_report_tables(text, json, report.top.size());
  return report;
}

void write_report_tables(std::ostream& out, const nlohmann::json& report, std::size_t top,
                         TableFormat format) {
  try {
    const auto& classes = report.at("classes");
    const auto label_a = classes.at("a").at("label").get<std::string>();
    const auto label_b = classes.at("b").at("label").get<std::string>();

    std::vector<std::vector<std::string>> rows = {
        {"rank", "tirp", "ig", "support_" + label_a, "support_" + label_b}};
    const auto& patterns = report.at("top_patterns");
    for (std::size_t i = 0; i < patterns.size() && i < top; ++i) {
      const auto& p = patterns[i];
      rows.push_back({std::to_string(p.at("rank").get<std::size_t>()),
                      p.at("tirp").get<std::string>(), fixed(p.at("ig").get<double>(), 6),
                      fixed(p.at("support_a").get<double>(), 4),
                      fixed(p.at("support_b").get<double>(), 4)});
    }
    write_table(out, rows, format);
    out << '\n';

    const auto& tests = report.at("proportion_tests");
    if (!tests.is_array() || tests.size() != 3) {
      throw DataError("report must hold exactly three proportion tests");
    }
    rows = {{"test", "description", "tested", "different", "percent"}};
    for (const auto& t : tests) {
      rows.push_back({t.at("test").get<std::string>(), t.at("description").get<std::string>(),
                      std::to_string(t.at("tested").get<std::size_t>()),
                      std::to_string(t.at("different").get<std::size_t>()),
                      std::to_string(t.at("percent").get<long>()) + "%"});
    }
    write_table(out, rows, format);

    if (format == TableFormat::Text) {
      const auto& ks = report.at("ks");
      out << '\n';
      if (ks.is_null()) {
        out << "KS: not computed (empty sample)\n";
      } else {
        out << "KS (" << ks.at("domain").get<std::string>()
            << "): D = " << fixed(ks.at("d").get<double>(), 6)
            << ", critical D = " << fixed(ks.at("critical_d").get<double>(), 6)
            << ", alpha = " << fixed(ks.at("alpha").get<double>(), 2)
            << (ks.at("reject").get<bool>() ? ", distributions differ\n"
                                            : ", no significant difference\n");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

void run_report(const ReportOptions& opts, std::ostream& out) {
  std::ifstream in(opts.in);
  if (!in) throw DataError("cannot open " + opts.in);
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(opts.in + ": " + e.what());
  }
  write_report_tables(out, report, opts.top, opts.format);
}

void run_synth(const std::string& config_path, const std::string& out_dir) {
  write_synth(synthesize(load_synth_config(config_path)), out_dir);
}

}  // namespace tirpforge
