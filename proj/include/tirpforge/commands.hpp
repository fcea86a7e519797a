#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tirpforge/compare.hpp"
#include "tirpforge/events.hpp"
#include "tirpforge/miner.hpp"

namespace tirpforge {

/// Abstracts every entity of the log, in entity order. Concepts missing from
/// the KB are collected in `skipped`.
std::vector<SymbolicInterval> abstract_log(const EventLog& log, const KnowledgeBase& kb,
                                           std::size_t threads = 1,
                                           std::set<std::string>* skipped = nullptr);

/// Groups intervals into one cohort per class. Every labelled entity is a
/// member of its class even without intervals. Throws DataError listing
/// entities that have intervals but no label.
std::map<std::string, CohortIntervals> partition_by_class(
    const std::map<std::string, std::string>& labels,
    const std::vector<SymbolicInterval>& intervals);

struct AbstractOptions {
  std::string events;
  std::string kb;
  std::optional<std::string> windows;
  Minutes window_min = 720;
  std::optional<std::string> lab_concepts;
  TimeFormat time_format = TimeFormat::Minutes;
  std::string out;
  std::size_t threads = 1;
};

struct AbstractSummary {
  std::size_t entities = 0;
  std::size_t intervals = 0;
  std::map<std::string, std::size_t> per_concept;
  std::set<std::string> skipped_concepts;
};

AbstractSummary run_abstract(const AbstractOptions& opts);

struct MineOptions {
  std::string intervals;
  std::string labels;
  std::optional<std::string> kb;  // only used for custom label ranks
  MinerConfig config;
  std::string out_dir;
};

struct MineOutput {
  std::string label;
  std::string path;
  std::size_t entities = 0;
  std::size_t patterns = 0;
};

/// Writes `<out_dir>/<class>.jsonl` for every class, in class order.
std::vector<MineOutput> run_mine(const MineOptions& opts);

struct DiscriminateOptions {
  std::string mined_a;
  std::string mined_b;
  std::string labels;
  std::string intervals;
  std::optional<std::string> kb;
  StatsConfig stats;
  std::string out;
};

/// Writes the report JSON to `out` and the text tables next to it
/// (`.txt` instead of `.json`).
CohortComparisonReport run_discriminate(const DiscriminateOptions& opts);

enum class TableFormat { Text, Csv };

/// Top-`top` pattern table followed by the three-row proportion table.
/// Throws DataError on a malformed report.
void write_report_tables(std::ostream& out, const nlohmann::json& report, std::size_t top,
                         TableFormat format = TableFormat::Text);

struct ReportOptions {
  std::string in;
  std::size_t top = 10;
  TableFormat format = TableFormat::Text;
};

void run_report(const ReportOptions& opts, std::ostream& out);

void run_synth(const std::string& config_path, const std::string& out_dir);

}  // namespace tirpforge
