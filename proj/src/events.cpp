#include "tirpforge/events.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <tuple>

#include "csv.hpp"
#include "tirpforge/errors.hpp"

namespace tirpforge {

TimeFormat parse_time_format(std::string_view name) {
  if (name == "rfc3339") return TimeFormat::Rfc3339;
  if (name == "minutes") return TimeFormat::Minutes;
  throw UsageError("unknown time format '" + std::string(name) + "' (expected rfc3339|minutes)");
}

namespace {

std::optional<int> digits(std::string_view s, std::size_t pos, std::size_t n) {
  if (pos + n > s.size()) return std::nullopt;
  int v = 0;
  for (std::size_t i = pos; i < pos + n; ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    v = v * 10 + (s[i] - '0');
  }
  return v;
}

}  // namespace

std::optional<std::int64_t> parse_rfc3339_seconds(std::string_view s) {
  using namespace std::chrono;
  // YYYY-MM-DDTHH:MM:SS
  if (s.size() < 19 || s[4] != '-' || s[7] != '-' || s[13] != ':' || s[16] != ':') {
    return std::nullopt;
  }
  if (s[10] != 'T' && s[10] != 't' && s[10] != ' ') return std::nullopt;
  auto y = digits(s, 0, 4), mo = digits(s, 5, 2), d = digits(s, 8, 2);
  auto h = digits(s, 11, 2), mi = digits(s, 14, 2), sec = digits(s, 17, 2);
  if (!y || !mo || !d || !h || !mi || !sec) return std::nullopt;
  if (*h > 23 || *mi > 59 || *sec > 60) return std::nullopt;

  const year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)},
                           day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;

  std::size_t pos = 19;
  if (pos < s.size() && s[pos] == '.') {
    ++pos;
    const std::size_t frac_start = pos;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
    if (pos == frac_start) return std::nullopt;
  }
  if (pos >= s.size()) return std::nullopt;

  std::int64_t offset = 0;
  if (s[pos] == 'Z' || s[pos] == 'z') {
    ++pos;
  } else if (s[pos] == '+' || s[pos] == '-') {
    const int sign = s[pos] == '+' ? 1 : -1;
    auto oh = digits(s, pos + 1, 2), om = digits(s, pos + 4, 2);
    if (!oh || !om || pos + 3 >= s.size() || s[pos + 3] != ':') return std::nullopt;
    offset = sign * (*oh * 3600 + *om * 60);
    pos += 6;
  } else {
    return std::nullopt;
  }
  if (pos != s.size()) return std::nullopt;

  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days_since_epoch) * 86400 + *h * 3600 + *mi * 60 + *sec -
         offset;
}

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Minutes convert_timestamp(std::string_view field, TimeFormat format,
                          std::optional<std::int64_t> epoch_seconds) {
  if (format == TimeFormat::Minutes) {
    auto v = csv::parse_int<Minutes>(field);
    if (!v) throw DataError("invalid integer-minute timestamp '" + std::string(field) + "'");
    return *v;
  }
  auto secs = parse_rfc3339_seconds(csv::trim(field));
  if (!secs) throw DataError("invalid RFC 3339 timestamp '" + std::string(field) + "'");
  return floor_div(*secs, 60) - floor_div(epoch_seconds.value_or(0), 60);
}

void EventLog::add(const Sample& s) {
  entities_[s.entity_id][s.concept_id].push_back({s.t, s.value});
}

void EventLog::finalize() {
  for (auto& [entity, concepts] : entities_) {
    for (auto& [name, series] : concepts) {
      std::stable_sort(series.begin(), series.end(),
                       [](const Observation& a, const Observation& b) { return a.t < b.t; });
      for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i].t == series[i - 1].t) {
          throw DataError("duplicate sample for (" + entity + ", " + name + ", t=" +
                          std::to_string(series[i].t) + ")");
        }
      }
    }
  }
}

const EventLog::EntityEvents* EventLog::find(std::string_view entity_id) const {
  auto it = entities_.find(std::string(entity_id));
  return it == entities_.end() ? nullptr : &it->second;
}

std::size_t EventLog::size() const {
  std::size_t n = 0;
  for (const auto& [entity, concepts] : entities_) {
    for (const auto& [name, series] : concepts) n += series.size();
  }
  return n;
}

std::vector<Sample> EventLog::samples() const {
  std::vector<Sample> out;
  out.reserve(size());
  for (const auto& [entity, concepts] : entities_) {
    for (const auto& [name, series] : concepts) {
      for (const auto& o : series) out.push_back({entity, name, o.t, o.value});
    }
  }
  return out;
}

EventLog load_events(const std::string& path, TimeFormat format) {
  struct Row {
    Sample sample;
    std::string raw_time;
    std::size_t line;
  };

  csv::Reader reader(path, "entity_id,concept,timestamp,value");
  std::vector<Row> rows;
  std::vector<std::string_view> f;
  std::optional<std::int64_t> min_seconds;
  while (reader.next(f, 4)) {
    if (f[0].empty()) reader.fail("empty entity_id");
    if (f[1].empty()) reader.fail("empty concept");
    auto value = csv::parse_double(f[3]);
    if (!value) reader.fail("invalid value '" + std::string(f[3]) + "'");
    if (!std::isfinite(*value)) reader.fail("non-finite value '" + std::string(f[3]) + "'");

    Row row{{std::string(f[0]), std::string(f[1]), 0, *value}, std::string(f[2]),
            reader.line_no()};
    if (format == TimeFormat::Rfc3339) {
      auto secs = parse_rfc3339_seconds(f[2]);
      if (!secs) reader.fail("invalid RFC 3339 timestamp '" + std::string(f[2]) + "'");
      min_seconds = min_seconds ? std::min(*min_seconds, *secs) : *secs;
    } else {
      auto t = csv::parse_int<Minutes>(f[2]);
      if (!t) reader.fail("invalid integer-minute timestamp '" + std::string(f[2]) + "'");
      row.sample.t = *t;
    }
    rows.push_back(std::move(row));
  }

  EventLog log;
  if (format == TimeFormat::Rfc3339) {
    log.epoch_seconds = min_seconds.value_or(0);
    for (auto& row : rows) {
      row.sample.t = convert_timestamp(row.raw_time, format, log.epoch_seconds);
    }
  }

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.sample.entity_id, a.sample.concept_id, a.sample.t, a.line) <
           std::tie(b.sample.entity_id, b.sample.concept_id, b.sample.t, b.line);
  });
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1].sample;
    const auto& b = rows[i].sample;
    if (a.entity_id == b.entity_id && a.concept_id == b.concept_id && a.t == b.t) {
      throw DataError(path + ": duplicate sample (" + a.entity_id + ", " + a.concept_id +
                      ", t=" + std::to_string(a.t) + ") on lines " +
                      std::to_string(rows[i - 1].line) + " and " + std::to_string(rows[i].line));
    }
  }
  for (const auto& row : rows) log.add(row.sample);
  return log;
}

void write_events(std::ostream& out, const EventLog& log) {
  out << "entity_id,concept,timestamp,value\n";
  for (const auto& s : log.samples()) {
    out << s.entity_id << ',' << s.concept_id << ',' << s.t << ',' << csv::format_double(s.value)
        << '\n';
  }
}

}  // namespace tirpforge
