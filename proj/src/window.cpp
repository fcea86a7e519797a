#include "tirpforge/window.hpp"

#include <fstream>

#include "csv.hpp"
#include "tirpforge/errors.hpp"

namespace tirpforge {

std::map<std::string, EntityTimes> load_reference_times(const std::string& path, TimeFormat format,
                                                        std::optional<std::int64_t> epoch_seconds) {
  csv::Reader reader(path, "entity_id,admission_time,reference_time");
  std::map<std::string, EntityTimes> out;
  std::vector<std::string_view> f;
  while (reader.next(f, 3)) {
    EntityTimes times;
    try {
      times.admission = convert_timestamp(f[1], format, epoch_seconds);
      times.reference = convert_timestamp(f[2], format, epoch_seconds);
    } catch (const DataError& e) {
      reader.fail(e.what());
    }
    if (times.reference < times.admission) reader.fail("reference_time precedes admission_time");
    if (!out.emplace(std::string(f[0]), times).second) {
      reader.fail("entity '" + std::string(f[0]) + "' listed twice");
    }
  }
  return out;
}

std::set<std::string> load_concept_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto s = csv::trim(line);
    if (s.empty() || s.front() == '#') continue;
    out.emplace(s);
  }
  return out;
}

EventLog window_extract(const EventLog& events, const WindowConfig& cfg) {
  if (cfg.window_len <= 0) throw DataError("window length must be positive");
  EventLog out;
  out.epoch_seconds = events.epoch_seconds;
  for (const auto& [entity, concepts] : events.entities()) {
    auto it = cfg.times.find(entity);
    if (it == cfg.times.end()) {
      throw DataError("entity '" + entity + "' has no reference time");
    }
    const EntityTimes& t = it->second;
    if (t.reference < t.admission) {
      throw DataError("entity '" + entity + "': reference time precedes admission");
    }
    for (const auto& [name, series] : concepts) {
      const bool lab = cfg.lab_concepts.contains(name);
      const Minutes lo = lab ? t.admission : t.reference - cfg.window_len;
      for (const auto& o : series) {
        if (o.t >= lo && o.t <= t.reference) out.add({entity, name, o.t, o.value});
      }
    }
  }
  return out;
}

}  // namespace tirpforge
