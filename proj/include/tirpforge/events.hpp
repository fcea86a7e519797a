#pragma once

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tirpforge/types.hpp"

namespace tirpforge {

enum class TimeFormat { Rfc3339, Minutes };

TimeFormat parse_time_format(std::string_view name);

/// Seconds since the Unix epoch for an RFC 3339 timestamp such as
/// `2017-03-01T17:50:00Z` or `2017-03-01 17:50:00.5+02:00`.
std::optional<std::int64_t> parse_rfc3339_seconds(std::string_view text);

struct Observation {
  Minutes t = 0;
  double value = 0.0;
};

/// Samples grouped by entity and concept, each series sorted by time.
class EventLog {
 public:
  using Series = std::vector<Observation>;
  using EntityEvents = std::map<std::string, Series>;  // concept -> series

  /// Adds one sample; callers are responsible for sorting via finalize().
  void add(const Sample& s);
  /// Sorts every series by time. Throws DataError on duplicate timestamps.
  void finalize();

  const std::map<std::string, EntityEvents>& entities() const { return entities_; }
  const EntityEvents* find(std::string_view entity_id) const;
  std::size_t size() const;
  bool empty() const { return size() == 0; }

  /// Flattened samples in (entity, concept, t) order.
  std::vector<Sample> samples() const;

  /// Seconds-based epoch that RFC 3339 timestamps were rebased to, if any.
  std::optional<std::int64_t> epoch_seconds;

 private:
  std::map<std::string, EntityEvents> entities_;
};

/// Loads an events CSV (`entity_id,concept,timestamp,value`).
///
/// RFC 3339 timestamps are floored to whole minutes and rebased so the
/// dataset's earliest timestamp is minute 0; integer-minute timestamps are
/// kept verbatim. Throws DataError with file:line context on malformed rows,
/// non-finite values, and duplicate (entity, concept, t) rows.
EventLog load_events(const std::string& path, TimeFormat format);

/// Writes events in the integer-minutes format.
void write_events(std::ostream& out, const EventLog& log);

/// Converts a timestamp field to minutes using the log's epoch (RFC 3339) or
/// verbatim (minutes).
Minutes convert_timestamp(std::string_view field, TimeFormat format,
                          std::optional<std::int64_t> epoch_seconds);

}  // namespace tirpforge
