#include "tirpforge/types.hpp"

#include <algorithm>

namespace tirpforge {

char kind_code(Kind kind) { return kind == Kind::State ? 'S' : 'G'; }

std::optional<Kind> kind_from_code(std::string_view code) {
  if (code == "S") return Kind::State;
  if (code == "G") return Kind::Gradient;
  return std::nullopt;
}

std::string_view kind_name(Kind kind) { return kind == Kind::State ? "State" : "Gradient"; }

std::optional<Kind> kind_from_name(std::string_view name) {
  if (name == "State") return Kind::State;
  if (name == "Gradient") return Kind::Gradient;
  return std::nullopt;
}

bool AbstractionRule::has_custom_labels() const {
  return !std::equal(state_labels.begin(), state_labels.end(), kDefaultStateLabels.begin());
}

const AbstractionRule* KnowledgeBase::find(std::string_view concept_id) const {
  auto it = rules.find(std::string(concept_id));
  return it == rules.end() ? nullptr : &it->second;
}

LabelCatalog::LabelCatalog(const KnowledgeBase& kb) {
  for (const auto& [name, rule] : kb.rules) {
    if (rule.has_custom_labels()) custom_state_labels_.emplace(name, rule.state_labels);
  }
}

namespace {

template <typename Labels>
std::uint8_t rank_in(const Labels& labels, std::string_view label) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<std::uint8_t>(i);
  }
  return kUnrankedLabel;
}

}  // namespace

Symbol LabelCatalog::make_symbol(std::string concept_id, Kind kind, std::string label) const {
  std::uint8_t rank = kUnrankedLabel;
  if (kind == Kind::Gradient) {
    rank = rank_in(kGradientLabels, label);
  } else if (auto it = custom_state_labels_.find(concept_id); it != custom_state_labels_.end()) {
    rank = rank_in(it->second, label);
  } else {
    rank = rank_in(kDefaultStateLabels, label);
  }
  return Symbol{std::move(concept_id), kind, rank, std::move(label)};
}

}  // namespace tirpforge
