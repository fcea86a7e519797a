#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "tirpforge/commands.hpp"
#include "tirpforge/errors.hpp"
#include "tirpforge/io.hpp"
#include "tirpforge/stats.hpp"

namespace py = pybind11;
namespace tf = tirpforge;

namespace {

tf::Relation relation_from_code(const std::string& code) {
  for (int i = 0; i < tf::kRelationCount; ++i) {
    const auto r = static_cast<tf::Relation>(i);
    if (code.size() == 1 && tf::relation_code(r) == code[0]) return r;
  }
  throw tf::UsageError("unknown relation code '" + code + "'");
}

tf::Kind kind_from_name(const std::string& name) {
  if (name == "State") return tf::Kind::State;
  if (name == "Gradient") return tf::Kind::Gradient;
  throw tf::UsageError("kind must be State or Gradient, got '" + name + "'");
}

tf::MinerConfig miner_config(double min_support, tf::Minutes epsilon, tf::Minutes max_gap,
                             std::size_t max_len, std::size_t threads) {
  tf::MinerConfig cfg;
  cfg.min_support = min_support;
  cfg.relations = {epsilon, max_gap};
  cfg.max_pattern_len = max_len;
  cfg.threads = threads;
  return cfg;
}

using IntervalRow =
    std::tuple<std::string, std::string, std::string, std::string, tf::Minutes, tf::Minutes>;

py::list mine_rows(const std::vector<IntervalRow>& rows, std::optional<std::vector<std::string>> entities,
                   double min_support, tf::Minutes epsilon, tf::Minutes max_gap,
                   std::size_t max_len, std::size_t threads) {
  const tf::LabelCatalog catalog;
  std::vector<tf::SymbolicInterval> ivs;
  std::vector<std::string> ids;
  for (const auto& [entity, concept_id, kind, label, start, end] : rows) {
    ivs.push_back({entity, catalog.make_symbol(concept_id, kind_from_name(kind), label), start, end});
    ids.push_back(entity);
  }
  if (entities) ids = *entities;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const auto cohort = tf::CohortIntervals::build(ids, ivs);
  std::vector<tf::MinedPattern> patterns;
  {
    py::gil_scoped_release release;
    patterns = tf::mine(cohort, miner_config(min_support, epsilon, max_gap, max_len, threads));
  }
  py::list out;
  for (const auto& p : patterns) {
    py::dict d;
    d["tirp"] = tf::canonical_string(p.tirp);
    d["k"] = p.tirp.size();
    d["entities"] = p.stats.entities;
    d["support"] = p.stats.horizontal_support;
    d["instances"] = p.stats.instances;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_tirpforge, m) {
  m.doc() = "Temporal abstraction and time-interval pattern mining";

  py::register_exception<tf::UsageError>(m, "UsageError", PyExc_ValueError);
  py::register_exception<tf::DataError>(m, "DataError", PyExc_ValueError);

  m.def(
      "classify_relation",
      [](tf::Minutes as, tf::Minutes ae, tf::Minutes bs, tf::Minutes be, tf::Minutes epsilon,
         tf::Minutes max_gap) -> std::optional<std::string> {
        const auto r = tf::classify_relation(tf::Interval{as, ae}, tf::Interval{bs, be},
                                             tf::RelationConfig{epsilon, max_gap});
        if (!r) return std::nullopt;
        return std::string(1, tf::relation_code(*r));
      },
      py::arg("a_start"), py::arg("a_end"), py::arg("b_start"), py::arg("b_end"),
      py::arg("epsilon") = 0, py::arg("max_gap") = 720);

  m.def(
      "compose",
      [](const std::string& r1, const std::string& r2) {
        const auto set = tf::compose(relation_from_code(r1), relation_from_code(r2));
        std::string out;
        for (int i = 0; i < tf::kRelationCount; ++i)
          if (set.contains(static_cast<tf::Relation>(i)))
            out += tf::relation_code(static_cast<tf::Relation>(i));
        return out;
      },
      "Relation codes possible between A and C, in enum order.");

  m.def(
      "information_gain",
      [](const std::vector<bool>& present, const std::vector<int>& labels) {
        return tf::information_gain(present, labels);
      },
      py::arg("present"), py::arg("labels"));

  m.def(
      "ks_two_sample",
      [](const std::vector<double>& a, const std::vector<double>& b, double alpha) {
        const auto r = tf::ks_two_sample(a, b, alpha);
        py::dict d;
        d["d"] = r.d_statistic;
        d["critical_d"] = r.critical_d;
        d["reject"] = r.reject;
        return d;
      },
      py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05);

  m.def(
      "proportion_test",
      [](std::size_t x1, std::size_t n1, std::size_t x2, std::size_t n2, double alpha) {
        const auto r = tf::proportion_test(x1, n1, x2, n2, alpha);
        py::dict d;
        d["z"] = r.z;
        d["significant"] = r.significant;
        return d;
      },
      py::arg("x1"), py::arg("n1"), py::arg("x2"), py::arg("n2"), py::arg("alpha") = 0.05);

  m.def("mine", &mine_rows, py::arg("intervals"), py::arg("entities") = py::none(),
        py::arg("min_support") = 0.1, py::arg("epsilon") = 0, py::arg("max_gap") = 720,
        py::arg("max_len") = 5, py::arg("threads") = 1,
        "Rows are (entity, concept, kind, label, start, end).");

  m.def(
      "abstract",
      [](const std::string& events, const std::string& kb, const std::string& out,
         std::optional<std::string> windows, std::optional<std::string> lab_concepts,
         const std::string& time_format, std::size_t threads) {
        tf::AbstractOptions opts;
        opts.events = events;
        opts.kb = kb;
        opts.out = out;
        opts.windows = windows;
        opts.lab_concepts = lab_concepts;
        opts.time_format = tf::parse_time_format(time_format);
        opts.threads = threads;
        tf::AbstractSummary s;
        {
          py::gil_scoped_release release;
          s = tf::run_abstract(opts);
        }
        py::dict d;
        d["entities"] = s.entities;
        d["intervals"] = s.intervals;
        d["per_concept"] = s.per_concept;
        d["skipped_concepts"] = s.skipped_concepts;
        return d;
      },
      py::arg("events"), py::arg("kb"), py::arg("out"), py::arg("windows") = py::none(),
      py::arg("lab_concepts") = py::none(), py::arg("time_format") = "minutes",
      py::arg("threads") = 1);

  m.def(
      "mine_files",
      [](const std::string& intervals, const std::string& labels, const std::string& out_dir,
         double min_support, tf::Minutes epsilon, tf::Minutes max_gap, std::size_t max_len,
         std::size_t threads) {
        tf::MineOptions opts;
        opts.intervals = intervals;
        opts.labels = labels;
        opts.out_dir = out_dir;
        opts.config = miner_config(min_support, epsilon, max_gap, max_len, threads);
        std::vector<tf::MineOutput> outs;
        {
          py::gil_scoped_release release;
          outs = tf::run_mine(opts);
        }
        std::map<std::string, std::string> paths;
        for (const auto& o : outs) paths[o.label] = o.path;
        return paths;
      },
      py::arg("intervals"), py::arg("labels"), py::arg("out_dir"), py::arg("min_support") = 0.1,
      py::arg("epsilon") = 0, py::arg("max_gap") = 720, py::arg("max_len") = 5,
      py::arg("threads") = 1);

  m.def(
      "discriminate_json",
      [](const std::string& mined_a, const std::string& mined_b, const std::string& labels,
         const std::string& intervals, const std::string& out, double alpha,
         const std::string& ks_domain, std::uint64_t split_seed, std::size_t top_n,
         std::size_t threads) {
        tf::DiscriminateOptions opts;
        opts.mined_a = mined_a;
        opts.mined_b = mined_b;
        opts.labels = labels;
        opts.intervals = intervals;
        opts.out = out;
        opts.stats.alpha = alpha;
        opts.stats.ks_domain = tf::parse_ks_domain(ks_domain);
        opts.stats.split_seed = split_seed;
        opts.stats.top_n = top_n;
        opts.stats.threads = threads;
        py::gil_scoped_release release;
        return tf::report_to_json(tf::run_discriminate(opts)).dump();
      },
      py::arg("mined_a"), py::arg("mined_b"), py::arg("labels"), py::arg("intervals"),
      py::arg("out"), py::arg("alpha") = 0.05, py::arg("ks_domain") = "shared",
      py::arg("split_seed") = 0, py::arg("top_n") = 50, py::arg("threads") = 1);

  m.def(
      "synth",
      [](const std::string& config, const std::string& out_dir) {
        py::gil_scoped_release release;
        tf::run_synth(config, out_dir);
      },
      py::arg("config"), py::arg("out_dir"));
}
