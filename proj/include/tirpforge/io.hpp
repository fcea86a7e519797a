#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "tirpforge/miner.hpp"
#include "tirpforge/types.hpp"
#include "tirpforge/window.hpp"

namespace tirpforge {

/// Intervals CSV: `entity_id,concept,kind,label,start,end`.
void write_intervals(std::ostream& out, const std::vector<SymbolicInterval>& intervals);
std::vector<SymbolicInterval> load_intervals(const std::string& path,
                                             const LabelCatalog& catalog = {});

/// Labels CSV: `entity_id,class`. Returns entity -> class.
std::map<std::string, std::string> load_labels(const std::string& path);
void write_labels(std::ostream& out, const std::map<std::string, std::string>& labels);

void write_reference_times(std::ostream& out, const std::map<std::string, EntityTimes>& times);

/// Parsed mining output of one class.
struct MinedFile {
  std::string label;
  std::size_t entities = 0;
  MinerConfig config;
  std::vector<MinedPattern> patterns;
};

/// JSON Lines: a header object `{"header": {class, entities, min_support,
/// epsilon, max_gap, max_len}}` followed by one
/// `{"tirp", "k", "support", "entities", "instances"}` object per pattern.
void write_mined(std::ostream& out, const std::string& label, std::size_t cohort_size,
                 const MinerConfig& cfg, const std::vector<MinedPattern>& patterns);
MinedFile load_mined(const std::string& path, const LabelCatalog& catalog = {});

}  // namespace tirpforge
