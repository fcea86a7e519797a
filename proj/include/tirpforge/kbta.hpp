#pragma once

#include <span>
#include <string>
#include <vector>

#include "tirpforge/events.hpp"
#include "tirpforge/types.hpp"

namespace tirpforge {

enum class StateLabel : std::uint8_t { Low = 0, Normal = 1, High = 2 };
enum class GradientLabel : std::uint8_t { Decreasing = 0, Stable = 1, Increasing = 2 };

/// Low below normal_low, High above normal_high, Normal on the closed range.
StateLabel classify_state(double value, const AbstractionRule& rule);

/// Increasing if next - prev > delta, Decreasing if < -delta, else Stable.
GradientLabel classify_gradient(double prev_value, double next_value, const AbstractionRule& rule);

Symbol state_symbol(const AbstractionRule& rule, StateLabel label);
Symbol gradient_symbol(const AbstractionRule& rule, GradientLabel label);

/// State intervals for one (entity, concept) series sorted by time.
///
/// Consecutive samples with the same label merge while every gap is at most
/// rule.interp_max_gap; intervals end at their last sample.
std::vector<SymbolicInterval> abstract_state_series(const std::string& entity_id,
                                                    std::span<const Observation> series,
                                                    const AbstractionRule& rule);

/// Gradient intervals: each adjacent pair within interp_max_gap labels the span
/// between them, and touching spans with the same label merge.
std::vector<SymbolicInterval> abstract_gradient_series(const std::string& entity_id,
                                                       std::span<const Observation> series,
                                                       const AbstractionRule& rule);

/// All state and gradient intervals of one entity, sorted by (start, end,
/// symbol). Concepts missing from the KB are skipped and appended to
/// `skipped` when provided.
std::vector<SymbolicInterval> abstract_entity(const std::string& entity_id,
                                              const EventLog::EntityEvents& events,
                                              const KnowledgeBase& kb,
                                              std::vector<std::string>* skipped = nullptr);

}  // namespace tirpforge
