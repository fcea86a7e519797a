#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "tirpforge/events.hpp"

namespace tirpforge {

struct EntityTimes {
  Minutes admission = 0;
  Minutes reference = 0;
};

/// Per-entity extraction window ending at the reference time.
///
/// Concepts in `lab_concepts` are gathered from admission; everything else is
/// gathered only in [reference - window_len, reference]. Both ends inclusive.
struct WindowConfig {
  std::map<std::string, EntityTimes> times;
  Minutes window_len = 720;
  std::set<std::string> lab_concepts;
};

/// Loads `entity_id,admission_time,reference_time`. Timestamps use the same
/// format and epoch as the events they will be applied to.
std::map<std::string, EntityTimes> load_reference_times(const std::string& path, TimeFormat format,
                                                        std::optional<std::int64_t> epoch_seconds);

/// One concept per line; blank lines and `#` comments are ignored.
std::set<std::string> load_concept_list(const std::string& path);

/// Keeps only the samples inside each entity's window. Throws DataError for
/// entities without reference times and for invalid window settings.
EventLog window_extract(const EventLog& events, const WindowConfig& cfg);

}  // namespace tirpforge
