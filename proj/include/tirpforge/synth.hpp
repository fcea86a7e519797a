#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tirpforge/events.hpp"
#include "tirpforge/tirp.hpp"
#include "tirpforge/window.hpp"

namespace tirpforge {

struct PlantedPattern {
  Tirp tirp;
  double case_rate = 0.0;
  double control_rate = 0.0;
};

struct SynthConfig {
  KnowledgeBase kb;
  std::size_t n_case = 0;
  std::size_t n_control = 0;
  std::string case_label = "case";
  std::string control_label = "control";
  /// Concepts available to the generator; empty means every KB concept.
  std::vector<std::string> concepts;
  std::vector<PlantedPattern> planted;
  double noise_intervals_per_entity = 20.0;
  Minutes horizon = 720;
  Minutes sample_step = 60;
  std::uint64_t seed = 0;
};

/// Reads a generator config. `kb` is a path resolved relative to `base_dir`.
SynthConfig parse_synth_config(const nlohmann::json& doc, const std::string& base_dir);
SynthConfig load_synth_config(const std::string& path);

/// Checks rates, horizon, step and the planted patterns. Throws UsageError.
void validate(const SynthConfig& cfg);

/// Endpoints in sample-step units whose eps = 0 relations reproduce `tirp`
/// when the intervals are listed in pattern order. Throws UsageError naming
/// the pattern when none exists within `max_units`.
std::vector<Interval> plan_layout(const Tirp& tirp, Minutes max_units);

struct SynthData {
  EventLog events;
  std::map<std::string, std::string> labels;
  std::map<std::string, EntityTimes> times;
};

/// Deterministic for a fixed config. Each planted pattern is realized in
/// exactly round(rate * n) entities of each class; noise uses only concepts
/// that no planted pattern mentions.
SynthData synthesize(const SynthConfig& cfg);

/// Writes events.csv, labels.csv and reference_times.csv into `dir`.
void write_synth(const SynthData& data, const std::string& dir);

}  // namespace tirpforge
