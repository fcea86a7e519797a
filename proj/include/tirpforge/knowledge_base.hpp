#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "tirpforge/types.hpp"

namespace tirpforge {

/// Parses the declarative KB format: a JSON array of
/// `{concept, unit, normal_low, normal_high, gradient_delta,
///   interp_max_gap_min?, state_labels?}` objects.
///
/// interp_max_gap_min defaults to 240. Throws DataError on missing fields,
/// normal_low >= normal_high, non-positive gradient_delta or max gap, and
/// repeated concepts.
KnowledgeBase parse_kb(const nlohmann::json& doc);
KnowledgeBase load_kb(const std::string& path);

nlohmann::json kb_to_json(const KnowledgeBase& kb);

}  // namespace tirpforge
