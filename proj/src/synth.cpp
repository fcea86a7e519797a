#include "tirpforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "tirpforge/errors.hpp"
#include "tirpforge/io.hpp"
#include "tirpforge/knowledge_base.hpp"
#include "tirpforge/rng.hpp"

namespace tirpforge {

namespace {

constexpr Minutes kNoiseMaxUnits = 3;

// Label position in the rule's label set, or -1.
int label_index(const Symbol& s, const AbstractionRule& rule) {
  for (int i = 0; i < 3; ++i) {
    if (s.kind == Kind::State ? rule.state_labels[i] == s.label : kGradientLabels[i] == s.label) {
      return i;
    }
  }
  return -1;
}

double state_value(const AbstractionRule& rule, int label) {
  switch (label) {
    case 0: return rule.normal_low - rule.gradient_delta;
    case 2: return rule.normal_high + rule.gradient_delta;
    default: return (rule.normal_low + rule.normal_high) / 2.0;
  }
}

std::string entity_name(const std::string& label, std::size_t index, std::size_t n) {
  std::size_t width = 4;
  for (std::size_t m = n; m >= 10000; m /= 10) ++width;
  std::string digits = std::to_string(index + 1);
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return label + "_" + digits;
}

bool layout_search(const Tirp& tirp, std::vector<Interval>& out, std::size_t i, Minutes grid) {
  if (i == tirp.size()) return true;
  static const RelationConfig rel{0, std::numeric_limits<Minutes>::max() / 4};
  const bool needs_length = tirp.symbols[i].kind == Kind::Gradient;
  const Interval prev = i > 0 ? out[i - 1] : Interval{0, 0};
  for (Minutes s = prev.start; s <= grid; ++s) {
    for (Minutes e = s + (needs_length ? 1 : 0); e <= grid; ++e) {
      const Interval cand{s, e};
      if (i > 0 && cand < prev) continue;
      if (i > 0 && cand == prev && !(tirp.symbols[i - 1] < tirp.symbols[i])) continue;
      bool ok = true;
      for (std::size_t j = 0; j < i && ok; ++j) {
        ok = classify_relation(out[j], cand, rel) == tirp.relation(j, i);
      }
      if (!ok) continue;
      out[i] = cand;
      if (layout_search(tirp, out, i + 1, grid)) return true;
    }
  }
  return false;
}

}  // namespace

std::vector<Interval> plan_layout(const Tirp& tirp, Minutes max_units) {
  if (!well_formed(tirp)) throw UsageError("malformed planted TIRP");
  std::vector<Interval> out(tirp.size());
  for (Minutes grid = 0; grid <= max_units; ++grid) {
    if (layout_search(tirp, out, 0, grid)) return out;
  }
  throw UsageError("planted TIRP " + canonical_string(tirp) + " is unrealizable");
}

void validate(const SynthConfig& cfg) {
  if (cfg.horizon <= 0) throw UsageError("synth: horizon must be positive");
  if (cfg.sample_step <= 0) throw UsageError("synth: sample_step must be positive");
  if (!(cfg.noise_intervals_per_entity >= 0.0) || cfg.noise_intervals_per_entity > 1000.0) {
    throw UsageError("synth: noise_intervals_per_entity must be in [0, 1000]");
  }
  if (cfg.case_label.empty() || cfg.control_label.empty() || cfg.case_label == cfg.control_label) {
    throw UsageError("synth: class labels must be distinct and non-empty");
  }
  for (const auto& c : cfg.concepts) {
    if (!cfg.kb.find(c)) throw UsageError("synth: concept '" + c + "' is not in the KB");
  }
  std::set<std::string> used;
  for (const auto& p : cfg.planted) {
    const std::string name = well_formed(p.tirp) ? canonical_string(p.tirp) : "<malformed>";
    for (double r : {p.case_rate, p.control_rate}) {
      if (!(r >= 0.0 && r <= 1.0)) throw UsageError("synth: rate outside [0, 1] for " + name);
    }
    if (!well_formed(p.tirp)) throw UsageError("synth: malformed planted TIRP");
    std::set<std::string> mine;
    for (const auto& s : p.tirp.symbols) {
      const auto* rule = cfg.kb.find(s.concept_id);
      if (!rule) throw UsageError("synth: " + name + " uses unknown concept " + s.concept_id);
      if (label_index(s, *rule) < 0) {
        throw UsageError("synth: " + name + " uses unknown label " + symbol_string(s));
      }
      if (!mine.insert(s.concept_id).second) {
        throw UsageError("synth: planted TIRP " + name + " is unrealizable: concept " +
                         s.concept_id + " appears twice");
      }
      if (used.contains(s.concept_id)) {
        throw UsageError("synth: planted TIRP " + name + " is unrealizable: concept " +
                         s.concept_id + " is shared with another planted TIRP");
      }
    }
    used.insert(mine.begin(), mine.end());
    const auto layout = plan_layout(p.tirp, 4 * static_cast<Minutes>(p.tirp.size()));
    Minutes span = 0;
    for (const auto& iv : layout) span = std::max(span, iv.end);
    if (span * cfg.sample_step > cfg.horizon) {
      throw UsageError("synth: planted TIRP " + name + " is unrealizable within the horizon");
    }
  }
}

SynthConfig parse_synth_config(const nlohmann::json& doc, const std::string& base_dir) {
  SynthConfig cfg;
  try {
    std::filesystem::path kb_path = doc.at("kb").get<std::string>();
    if (kb_path.is_relative()) kb_path = std::filesystem::path(base_dir) / kb_path;
    cfg.kb = load_kb(kb_path.string());
    cfg.n_case = doc.at("n_case").get<std::size_t>();
    cfg.n_control = doc.at("n_control").get<std::size_t>();
    cfg.case_label = doc.value("case_label", cfg.case_label);
    cfg.control_label = doc.value("control_label", cfg.control_label);
    cfg.concepts = doc.value("concepts", std::vector<std::string>{});
    cfg.noise_intervals_per_entity =
        doc.value("noise_intervals_per_entity", cfg.noise_intervals_per_entity);
    cfg.horizon = doc.value("horizon", cfg.horizon);
    cfg.sample_step = doc.value("sample_step", cfg.sample_step);
    cfg.seed = doc.at("seed").get<std::uint64_t>();
    const LabelCatalog catalog(cfg.kb);
    for (const auto& p : doc.value("planted", nlohmann::json::array())) {
      cfg.planted.push_back({parse_tirp(p.at("tirp").get<std::string>(), catalog),
                             p.at("case_rate").get<double>(), p.at("control_rate").get<double>()});
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("synth config: ") + e.what());
  } catch (const DataError& e) {
    throw UsageError(std::string("synth config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

SynthConfig load_synth_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
  return parse_synth_config(doc, std::filesystem::path(path).parent_path().string());
}

SynthData synthesize(const SynthConfig& cfg) {
  validate(cfg);
  Rng rng(derive_seed(cfg.seed, SeedStream::Synth));
  const Minutes step = cfg.sample_step;

  struct Plan {
    const PlantedPattern* pattern;
    std::vector<Interval> layout;
    Minutes span_units = 0;
  };
  std::vector<Plan> plans;
  std::set<std::string> planted_concepts;
  for (const auto& p : cfg.planted) {
    Plan plan{&p, plan_layout(p.tirp, 4 * static_cast<Minutes>(p.tirp.size()))};
    for (const auto& iv : plan.layout) plan.span_units = std::max(plan.span_units, iv.end);
    for (const auto& s : p.tirp.symbols) planted_concepts.insert(s.concept_id);
    plans.push_back(std::move(plan));
  }

  std::vector<std::string> noise_concepts;
  if (cfg.concepts.empty()) {
    for (const auto& [c, rule] : cfg.kb.rules) noise_concepts.push_back(c);
  } else {
    noise_concepts = cfg.concepts;
    std::sort(noise_concepts.begin(), noise_concepts.end());
    noise_concepts.erase(std::unique(noise_concepts.begin(), noise_concepts.end()),
                         noise_concepts.end());
  }
  std::erase_if(noise_concepts, [&](const auto& c) { return planted_concepts.contains(c); });

  struct ClassSpec {
    const std::string* label;
    std::size_t n;
    bool is_case;
  };
  const ClassSpec classes[] = {{&cfg.case_label, cfg.n_case, true},
                               {&cfg.control_label, cfg.n_control, false}};

  // carriers[class][plan][entity]
  std::vector<std::vector<std::vector<bool>>> carriers(2);
  for (int c = 0; c < 2; ++c) {
    for (const auto& plan : plans) {
      const double rate = classes[c].is_case ? plan.pattern->case_rate : plan.pattern->control_rate;
      const auto count = static_cast<std::size_t>(std::llround(rate * classes[c].n));
      std::vector<std::size_t> order(classes[c].n);
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      rng.shuffle(order);
      std::vector<bool> carries(classes[c].n, false);
      for (std::size_t i = 0; i < count; ++i) carries[order[i]] = true;
      carriers[c].push_back(std::move(carries));
    }
  }

  SynthData data;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t idx = 0; idx < classes[c].n; ++idx) {
      const std::string entity = entity_name(*classes[c].label, idx, classes[c].n);
      data.labels[entity] = *classes[c].label;
      data.times[entity] = {0, cfg.horizon};

      // concept -> t -> value; planted samples are written first and win.
      std::map<std::string, std::map<Minutes, double>> samples;
      for (std::size_t p = 0; p < plans.size(); ++p) {
        if (!carriers[c][p][idx]) continue;
        const auto& plan = plans[p];
        const Minutes free_units = cfg.horizon / step - plan.span_units;
        const Minutes offset = rng.between(0, free_units) * step;
        for (std::size_t i = 0; i < plan.layout.size(); ++i) {
          const Symbol& sym = plan.pattern->tirp.symbols[i];
          const AbstractionRule& rule = *cfg.kb.find(sym.concept_id);
          const int label = label_index(sym, rule);
          auto& series = samples[sym.concept_id];
          for (Minutes u = plan.layout[i].start; u <= plan.layout[i].end; ++u) {
            const Minutes t = offset + u * step;
            double v;
            if (sym.kind == Kind::State) {
              v = state_value(rule, label);
            } else {
              const double slope = 1.5 * rule.gradient_delta * (label - 1);
              v = state_value(rule, 1) + slope * static_cast<double>(u - plan.layout[i].start);
            }
            series.emplace(t, v);
          }
        }
      }

      const int noise = noise_concepts.empty() ? 0 : rng.poisson(cfg.noise_intervals_per_entity);
      for (int n = 0; n < noise; ++n) {
        const auto& concept_id = noise_concepts[rng.below(noise_concepts.size())];
        const AbstractionRule& rule = *cfg.kb.find(concept_id);
        const int label = static_cast<int>(rng.below(3));
        const Minutes start = rng.between(0, cfg.horizon / step);
        const Minutes len = rng.between(0, kNoiseMaxUnits);
        auto& series = samples[concept_id];
        for (Minutes u = start; u <= start + len && u * step <= cfg.horizon; ++u) {
          series.emplace(u * step, state_value(rule, label));
        }
      }

      for (const auto& [concept_id, series] : samples) {
        for (const auto& [t, v] : series) data.events.add({entity, concept_id, t, v});
      }
    }
  }
  data.events.finalize();
  return data;
}

void write_synth(const SynthData& data, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create " + dir + ": " + ec.message());
  auto open = [&](const char* name) {
    const auto path = (std::filesystem::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write " + path);
    return out;
  };
  {
    auto out = open("events.csv");
    write_events(out, data.events);
  }
  {
    auto out = open("labels.csv");
    write_labels(out, data.labels);
  }
  {
    auto out = open("reference_times.csv");
    write_reference_times(out, data.times);
  }
}

}  // namespace tirpforge
