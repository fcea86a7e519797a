#include "tirpforge/kbta.hpp"

#include <algorithm>

namespace tirpforge {

StateLabel classify_state(double value, const AbstractionRule& rule) {
  if (value < rule.normal_low) return StateLabel::Low;
  if (value > rule.normal_high) return StateLabel::High;
  return StateLabel::Normal;
}

GradientLabel classify_gradient(double prev_value, double next_value, const AbstractionRule& rule) {
  const double d = next_value - prev_value;
  if (d > rule.gradient_delta) return GradientLabel::Increasing;
  if (d < -rule.gradient_delta) return GradientLabel::Decreasing;
  return GradientLabel::Stable;
}

Symbol state_symbol(const AbstractionRule& rule, StateLabel label) {
  const auto rank = static_cast<std::uint8_t>(label);
  return Symbol{rule.concept_id, Kind::State, rank, rule.state_labels[rank]};
}

Symbol gradient_symbol(const AbstractionRule& rule, GradientLabel label) {
  const auto rank = static_cast<std::uint8_t>(label);
  return Symbol{rule.concept_id, Kind::Gradient, rank, std::string(kGradientLabels[rank])};
}

std::vector<SymbolicInterval> abstract_state_series(const std::string& entity_id,
                                                    std::span<const Observation> series,
                                                    const AbstractionRule& rule) {
  std::vector<SymbolicInterval> out;
  std::size_t i = 0;
  while (i < series.size()) {
    const StateLabel label = classify_state(series[i].value, rule);
    std::size_t j = i;
    while (j + 1 < series.size() && series[j + 1].t - series[j].t <= rule.interp_max_gap &&
           classify_state(series[j + 1].value, rule) == label) {
      ++j;
    }
    out.push_back({entity_id, state_symbol(rule, label), series[i].t, series[j].t});
    i = j + 1;
  }
  return out;
}

std::vector<SymbolicInterval> abstract_gradient_series(const std::string& entity_id,
                                                       std::span<const Observation> series,
                                                       const AbstractionRule& rule) {
  std::vector<SymbolicInterval> out;
  // The open run is out.back() when `run_open` is set.
  bool run_open = false;
  GradientLabel run_label = GradientLabel::Stable;
  for (std::size_t i = 0; i + 1 < series.size(); ++i) {
    const Observation& a = series[i];
    const Observation& b = series[i + 1];
    if (b.t - a.t > rule.interp_max_gap) {
      run_open = false;
      continue;
    }
    const GradientLabel label = classify_gradient(a.value, b.value, rule);
    if (run_open && label == run_label) {
      out.back().end = b.t;
    } else {
      out.push_back({entity_id, gradient_symbol(rule, label), a.t, b.t});
      run_open = true;
      run_label = label;
    }
  }
  return out;
}

std::vector<SymbolicInterval> abstract_entity(const std::string& entity_id,
                                              const EventLog::EntityEvents& events,
                                              const KnowledgeBase& kb,
                                              std::vector<std::string>* skipped) {
  std::vector<SymbolicInterval> out;
  for (const auto& [name, series] : events) {
    const AbstractionRule* rule = kb.find(name);
    if (rule == nullptr) {
      if (skipped != nullptr) skipped->push_back(name);
      continue;
    }
    auto states = abstract_state_series(entity_id, series, *rule);
    auto gradients = abstract_gradient_series(entity_id, series, *rule);
    out.insert(out.end(), std::make_move_iterator(states.begin()),
               std::make_move_iterator(states.end()));
    out.insert(out.end(), std::make_move_iterator(gradients.begin()),
               std::make_move_iterator(gradients.end()));
  }
  std::sort(out.begin(), out.end(), interval_less);
  return out;
}

}  // namespace tirpforge
