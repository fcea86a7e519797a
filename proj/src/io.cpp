#include "tirpforge/io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "csv.hpp"
#include "tirpforge/errors.hpp"

namespace tirpforge {

void write_intervals(std::ostream& out, const std::vector<SymbolicInterval>& intervals) {
  out << "entity_id,concept,kind,label,start,end\n";
  for (const auto& iv : intervals) {
    out << iv.entity_id << ',' << iv.symbol.concept_id << ',' << kind_name(iv.symbol.kind) << ','
        << iv.symbol.label << ',' << iv.start << ',' << iv.end << '\n';
  }
}

std::vector<SymbolicInterval> load_intervals(const std::string& path,
                                             const LabelCatalog& catalog) {
  csv::Reader reader(path, "entity_id,concept,kind,label,start,end");
  std::vector<SymbolicInterval> out;
  std::vector<std::string_view> f;
  while (reader.next(f, 6)) {
    if (f[0].empty() || f[1].empty() || f[3].empty()) reader.fail("empty field");
    auto kind = kind_from_name(f[2]);
    if (!kind) reader.fail("unknown kind '" + std::string(f[2]) + "'");
    auto start = csv::parse_int<Minutes>(f[4]);
    auto end = csv::parse_int<Minutes>(f[5]);
    if (!start || !end) reader.fail("invalid start/end");
    if (*start > *end) reader.fail("interval start after end");
    out.push_back({std::string(f[0]),
                   catalog.make_symbol(std::string(f[1]), *kind, std::string(f[3])), *start,
                   *end});
  }
  return out;
}

std::map<std::string, std::string> load_labels(const std::string& path) {
  csv::Reader reader(path, "entity_id,class");
  std::map<std::string, std::string> out;
  std::vector<std::string_view> f;
  while (reader.next(f, 2)) {
    if (f[0].empty() || f[1].empty()) reader.fail("empty field");
    if (!out.emplace(std::string(f[0]), std::string(f[1])).second) {
      reader.fail("entity '" + std::string(f[0]) + "' labelled twice");
    }
  }
  return out;
}

void write_labels(std::ostream& out, const std::map<std::string, std::string>& labels) {
  out << "entity_id,class\n";
  for (const auto& [entity, cls] : labels) out << entity << ',' << cls << '\n';
}

void write_reference_times(std::ostream& out, const std::map<std::string, EntityTimes>& times) {
  out << "entity_id,admission_time,reference_time\n";
  for (const auto& [entity, t] : times) {
    out << entity << ',' << t.admission << ',' << t.reference << '\n';
  }
}

void write_mined(std::ostream& out, const std::string& label, std::size_t cohort_size,
                 const MinerConfig& cfg, const std::vector<MinedPattern>& patterns) {
  const nlohmann::json header = {{"header",
                                  {{"class", label},
                                   {"entities", cohort_size},
                                   {"min_support", cfg.min_support},
                                   {"epsilon", cfg.relations.epsilon},
                                   {"max_gap", cfg.relations.max_gap},
                                   {"max_len", cfg.max_pattern_len}}}};
  out << header.dump() << '\n';
  for (const auto& p : patterns) {
    const nlohmann::json row = {{"tirp", canonical_string(p.tirp)},
                                {"k", p.tirp.size()},
                                {"support", p.stats.horizontal_support},
                                {"entities", p.stats.entities},
                                {"instances", p.stats.instances}};
    out << row.dump() << '\n';
  }
}

MinedFile load_mined(const std::string& path, const LabelCatalog& catalog) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  MinedFile file;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  auto fail = [&](const std::string& why) -> DataError {
    return DataError(path + ":" + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    nlohmann::json row;
    try {
      row = nlohmann::json::parse(line);
      if (!have_header) {
        const auto& h = row.at("header");
        file.label = h.at("class").get<std::string>();
        file.entities = h.at("entities").get<std::size_t>();
        file.config.min_support = h.at("min_support").get<double>();
        file.config.relations.epsilon = h.at("epsilon").get<Minutes>();
        file.config.relations.max_gap = h.at("max_gap").get<Minutes>();
        file.config.max_pattern_len = h.at("max_len").get<std::size_t>();
        have_header = true;
        continue;
      }
      MinedPattern p;
      p.tirp = parse_tirp(row.at("tirp").get<std::string>(), catalog);
      p.stats.horizontal_support = row.at("support").get<double>();
      p.stats.entities = row.at("entities").get<std::size_t>();
      p.stats.instances = row.at("instances").get<std::size_t>();
      if (row.at("k").get<std::size_t>() != p.tirp.size()) throw fail("k does not match tirp");
      file.patterns.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw fail(e.what());
    } catch (const DataError& e) {
      throw fail(e.what());
    }
  }
  if (!have_header) throw DataError(path + ": missing header line");
  return file;
}

}  // namespace tirpforge
