// tirp-forge: abstraction, mining and cohort comparison from the command line.
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "tirpforge/commands.hpp"
#include "tirpforge/errors.hpp"

namespace tf = tirpforge;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal abstraction and time-interval pattern mining"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", "tirp-forge 0.1.0");

  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)")
      ->envname("TIRP_FORGE_THREADS");

  // abstract
  tf::AbstractOptions ab;
  std::string time_format = "minutes";
  auto* abstract = app.add_subcommand("abstract", "Raw events -> symbolic intervals CSV");
  abstract->add_option("--events", ab.events, "Events CSV")->required()->check(CLI::ExistingFile);
  abstract->add_option("--kb", ab.kb, "Knowledge base JSON")->required()->check(CLI::ExistingFile);
  abstract->add_option("--windows", ab.windows, "Reference times CSV")->check(CLI::ExistingFile);
  abstract->add_option("--window-min", ab.window_min, "Window length in minutes")
      ->capture_default_str();
  abstract->add_option("--lab-concepts", ab.lab_concepts, "Concepts gathered from admission")
      ->check(CLI::ExistingFile);
  abstract->add_option("--time-format", time_format, "Timestamp format")
      ->check(CLI::IsMember({"rfc3339", "minutes"}))
      ->capture_default_str();
  abstract->add_option("--out", ab.out, "Output intervals CSV")->required();

  // mine
  tf::MineOptions mi;
  auto* mine = app.add_subcommand("mine", "Frequent TIRPs per class");
  mine->add_option("--intervals", mi.intervals, "Intervals CSV")->required()->check(CLI::ExistingFile);
  mine->add_option("--labels", mi.labels, "Labels CSV")->required()->check(CLI::ExistingFile);
  mine->add_option("--kb", mi.kb, "Knowledge base (custom label order)")->check(CLI::ExistingFile);
  mine->add_option("--min-support", mi.config.min_support)->capture_default_str();
  mine->add_option("--epsilon", mi.config.relations.epsilon)->capture_default_str();
  mine->add_option("--max-gap", mi.config.relations.max_gap)->capture_default_str();
  mine->add_option("--max-len", mi.config.max_pattern_len)->capture_default_str();
  mine->add_option("--out-dir", mi.out_dir, "Directory for <class>.jsonl")->required();

  // discriminate
  tf::DiscriminateOptions di;
  std::string ks_domain = "shared";
  auto* disc = app.add_subcommand("discriminate", "Compare two mined cohorts");
  disc->add_option("--mined-a", di.mined_a)->required()->check(CLI::ExistingFile);
  disc->add_option("--mined-b", di.mined_b)->required()->check(CLI::ExistingFile);
  disc->add_option("--labels", di.labels)->required()->check(CLI::ExistingFile);
  disc->add_option("--intervals", di.intervals)->required()->check(CLI::ExistingFile);
  disc->add_option("--kb", di.kb, "Knowledge base (custom label order)")->check(CLI::ExistingFile);
  disc->add_option("--alpha", di.stats.alpha)->capture_default_str();
  disc->add_option("--ks-domain", ks_domain)
      ->check(CLI::IsMember({"shared", "union"}))
      ->capture_default_str();
  disc->add_option("--split-seed", di.stats.split_seed)->capture_default_str();
  disc->add_option("--top-n", di.stats.top_n, "IG-ranked patterns kept")->capture_default_str();
  disc->add_option("--out", di.out, "Report JSON")->required();

  // synth
  std::string synth_config, synth_out;
  auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic cohort");
  synth->add_option("--config", synth_config)->required()->check(CLI::ExistingFile);
  synth->add_option("--out-dir", synth_out)->required();

  // report
  tf::ReportOptions re;
  std::string report_format = "text";
  auto* report = app.add_subcommand("report", "Print tables from a report JSON");
  report->add_option("--in", re.in)->required();
  report->add_option("--top", re.top)->capture_default_str();
  report->add_option("--format", report_format)
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    const std::size_t n_threads = resolve_threads(threads);
    if (*abstract) {
      ab.time_format = tf::parse_time_format(time_format);
      ab.threads = n_threads;
      const auto summary = tf::run_abstract(ab);
      if (!summary.skipped_concepts.empty()) {
        std::string names;
        for (const auto& c : summary.skipped_concepts) names += (names.empty() ? "" : ", ") + c;
        std::cerr << "warning: skipped concepts not in the knowledge base: " << names << '\n';
      }
      std::cout << "concept,intervals\n";
      for (const auto& [c, n] : summary.per_concept) std::cout << c << ',' << n << '\n';
      std::cout << "# " << summary.entities << " entities, " << summary.intervals
                << " intervals -> " << ab.out << '\n';
    } else if (*mine) {
      mi.config.threads = n_threads;
      for (const auto& o : tf::run_mine(mi)) {
        std::cout << o.label << ": " << o.entities << " entities, " << o.patterns << " TIRPs -> "
                  << o.path << '\n';
      }
    } else if (*disc) {
      di.stats.ks_domain = tf::parse_ks_domain(ks_domain);
      di.stats.threads = n_threads;
      tf::run_discriminate(di);
      tf::run_report({di.out, di.stats.top_n, tf::TableFormat::Text}, std::cout);
    } else if (*synth) {
      tf::run_synth(synth_config, synth_out);
    } else if (*report) {
      re.format = report_format == "csv" ? tf::TableFormat::Csv : tf::TableFormat::Text;
      tf::run_report(re, std::cout);
    }
  } catch (const tf::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const tf::DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const tf::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kOk;
}
