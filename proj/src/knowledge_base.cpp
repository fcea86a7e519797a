#include "tirpforge/knowledge_base.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tirpforge/errors.hpp"

namespace tirpforge {

namespace {

const nlohmann::json& require(const nlohmann::json& entry, const char* key, std::size_t index) {
  auto it = entry.find(key);
  if (it == entry.end()) {
    throw DataError("KB entry " + std::to_string(index) + ": missing field '" + key + "'");
  }
  return *it;
}

double require_number(const nlohmann::json& entry, const char* key, std::size_t index) {
  const auto& v = require(entry, key, index);
  if (!v.is_number()) {
    throw DataError("KB entry " + std::to_string(index) + ": field '" + key +
                    "' must be a number");
  }
  const double d = v.get<double>();
  if (!std::isfinite(d)) {
    throw DataError("KB entry " + std::to_string(index) + ": field '" + key + "' is not finite");
  }
  return d;
}

}  // namespace

KnowledgeBase parse_kb(const nlohmann::json& doc) {
  if (!doc.is_array()) throw DataError("KB must be a JSON array of rule objects");
  KnowledgeBase kb;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    if (!entry.is_object()) throw DataError("KB entry " + std::to_string(i) + " is not an object");

    AbstractionRule rule;
    const auto& name = require(entry, "concept", i);
    const auto& unit = require(entry, "unit", i);
    if (!name.is_string() || name.get<std::string>().empty()) {
      throw DataError("KB entry " + std::to_string(i) + ": 'concept' must be a non-empty string");
    }
    if (!unit.is_string()) {
      throw DataError("KB entry " + std::to_string(i) + ": 'unit' must be a string");
    }
    rule.concept_id = name.get<std::string>();
    rule.unit = unit.get<std::string>();
    rule.normal_low = require_number(entry, "normal_low", i);
    rule.normal_high = require_number(entry, "normal_high", i);
    rule.gradient_delta = require_number(entry, "gradient_delta", i);
    if (auto it = entry.find("interp_max_gap_min"); it != entry.end()) {
      if (!it->is_number_integer()) {
        throw DataError(rule.concept_id + ": interp_max_gap_min must be an integer");
      }
      rule.interp_max_gap = it->get<Minutes>();
    }
    if (auto it = entry.find("state_labels"); it != entry.end() && !it->is_null()) {
      if (!it->is_array() || it->size() != 3) {
        throw DataError(rule.concept_id + ": state_labels must be an array of three strings");
      }
      for (std::size_t k = 0; k < 3; ++k) {
        if (!(*it)[k].is_string() || (*it)[k].get<std::string>().empty()) {
          throw DataError(rule.concept_id + ": state_labels must be non-empty strings");
        }
        rule.state_labels[k] = (*it)[k].get<std::string>();
      }
    }

    if (!(rule.normal_low < rule.normal_high)) {
      throw DataError(rule.concept_id + ": normal_low must be smaller than normal_high");
    }
    if (!(rule.gradient_delta > 0)) {
      throw DataError(rule.concept_id + ": gradient_delta must be positive");
    }
    if (rule.interp_max_gap <= 0) {
      throw DataError(rule.concept_id + ": interp_max_gap_min must be positive");
    }
    auto concept_id = rule.concept_id;
    if (!kb.rules.emplace(concept_id, std::move(rule)).second) {
      throw DataError("KB concept '" + concept_id + "' appears more than once");
    }
  }
  return kb;
}

KnowledgeBase load_kb(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open KB file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path + ": " + e.what());
  }
  try {
    KnowledgeBase kb = parse_kb(doc);
    kb.source = path;
    return kb;
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

nlohmann::json kb_to_json(const KnowledgeBase& kb) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [name, rule] : kb.rules) {
    nlohmann::json entry = {{"concept", rule.concept_id},
                            {"unit", rule.unit},
                            {"normal_low", rule.normal_low},
                            {"normal_high", rule.normal_high},
                            {"gradient_delta", rule.gradient_delta},
                            {"interp_max_gap_min", rule.interp_max_gap}};
    if (rule.has_custom_labels()) entry["state_labels"] = rule.state_labels;
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace tirpforge
