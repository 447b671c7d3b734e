// dmoea: run dynamic multiobjective experiments and build comparison reports.
//
//   dmoea run --problem DF0 --optimizer nsga2 --variant isvm,da --nt 10 --taut 10 --out results
//   dmoea report --in results

#include "dmoea/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace dmoea;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct RunOptions {
  ExperimentConfig cfg;
  std::string variants = "isvm";
  std::string smote_direction = "extrapolate";
  std::string reference = "isvm";
  std::string out = "results";
  unsigned jobs = 1;
  bool record_wall_clock = false;
  bool quiet = false;
};

struct ReportOptions {
  std::string in = "results";
  std::string out;
  std::string reference;
};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> items;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) items.push_back(item);
  return items;
}

std::string run_file_name(std::uint64_t seed) { return "run_seed" + std::to_string(seed) + ".csv"; }

int do_run(RunOptions& o) {
  if (o.smote_direction == "extrapolate") o.cfg.posmote.direction = SmoteDirection::Extrapolate;
  else if (o.smote_direction == "classic") o.cfg.posmote.direction = SmoteDirection::Classic;
  else throw ConfigError("unknown smote direction '" + o.smote_direction + "' (expected extrapolate or classic)");

  std::vector<Variant> variants;
  for (const auto& v : split_list(o.variants)) variants.push_back(parse_variant(v));
  if (variants.empty()) throw ConfigError("no variant given");
  for (Variant v : variants) {
    ExperimentConfig c = o.cfg;
    c.variant = v;
    c.validate();
  }
  set_warnings_quiet(o.quiet);

  const fs::path out(o.out);
  std::vector<RunRecord> all;
  for (Variant v : variants) {
    ExperimentConfig c = o.cfg;
    c.variant = v;
    auto records = run_experiment(c, o.jobs);
    const fs::path dir = out / to_string(v);
    for (const auto& r : records) {
      write_run_csv(dir / run_file_name(r.seed), r, o.record_wall_clock);
      if (c.trace_every_generation)
        write_generation_csv(dir / ("generations_seed" + std::to_string(r.seed) + ".csv"), r);
      std::cerr << to_string(v) << " seed " << r.seed << ": MIGD " << format_double(r.migd()) << "\n";
    }
    all.insert(all.end(), std::make_move_iterator(records.begin()), std::make_move_iterator(records.end()));
  }

  std::string reference = o.reference;
  if (std::none_of(variants.begin(), variants.end(), [&](Variant v) { return to_string(v) == reference; }))
    reference = to_string(variants.front());
  const SummaryTable table = summarize(all, reference);
  ExperimentConfig echo = o.cfg;
  echo.variant = variants.front();
  write_summary_json(out / "summary.json", echo, all, table);

  for (const auto& row : table.rows)
    std::cout << row.problem << " (" << row.severity << "," << row.frequency << ") " << row.variant
              << "  MIGD " << format_double(row.migd_mean) << " +- " << format_double(row.migd_std) << " "
              << row.migd_marker << "  MHV " << format_double(row.mhv_mean) << " +- "
              << format_double(row.mhv_std) << " " << row.mhv_marker << "\n";
  return 0;
}

int do_report(const ReportOptions& o) {
  const fs::path in(o.in);
  const fs::path out = o.out.empty() ? in : fs::path(o.out);
  if (!fs::exists(in / "summary.json")) throw ConfigError("no summary.json in '" + in.string() + "'");

  SummaryTable table = read_summary_json(in / "summary.json");
  if (!o.reference.empty()) table.reference_variant = o.reference;
  mark_against_reference(table);
  write_comparison_csv(out / "comparison.csv", table);

  std::vector<std::pair<std::string, std::vector<std::vector<ChangeRecord>>>> evolution;
  for (const auto& row : table.rows) {
    const fs::path dir = in / row.variant;
    if (!fs::is_directory(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
      if (e.path().filename().string().rfind("run_seed", 0) == 0) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    std::vector<std::vector<ChangeRecord>> runs;
    for (const auto& f : files) runs.push_back(read_run_csv(f));
    evolution.emplace_back(row.variant, std::move(runs));
  }
  write_igd_evolution_csv(out / "igd_evolution.csv", evolution);
  std::cout << "wrote " << (out / "comparison.csv").string() << " and " << (out / "igd_evolution.csv").string()
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic multiobjective optimization with classifier-predicted populations"};
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run one experiment cell for one or more variants");
  run->add_option("--problem", ro.cfg.problem, "Problem name (DF0 .. DF3)")->capture_default_str();
  run->add_option("--optimizer", ro.cfg.optimizer, "nsga2 or mopso")->capture_default_str();
  run->add_option("--variant", ro.variants, "Comma-separated: da, isvm, isvm-r0, isvm-r3, svm-retrain")
      ->capture_default_str();
  run->add_option("--nt", ro.cfg.severity, "Severity of change n_t")->capture_default_str();
  run->add_option("--taut", ro.cfg.frequency, "Generations per environment tau_t")->capture_default_str();
  run->add_option("--changes", ro.cfg.num_changes, "Number of environment changes")->capture_default_str();
  run->add_option("--runs", ro.cfg.runs, "Independent runs per variant")->capture_default_str();
  run->add_option("--pop-size", ro.cfg.pop_size, "Population size (0: 100 for M=2, 150 otherwise)")
      ->capture_default_str();
  run->add_option("--seed", ro.cfg.seed, "Seed of the first run; run i uses seed + i")->capture_default_str();
  run->add_option("--svm-c", ro.cfg.svm.C, "SVM box constraint C")->capture_default_str();
  run->add_option("--smote-r", ro.cfg.posmote.oversampling_rate, "Synthetic positives per original")
      ->capture_default_str();
  run->add_option("--smote-k", ro.cfg.posmote.neighbors, "Neighbors for oversampling")->capture_default_str();
  run->add_option("--smote-direction", ro.smote_direction, "extrapolate or classic")->capture_default_str();
  run->add_flag("--research-scale", ro.cfg.svm.research_scale, "Re-run the kernel scale search at every change");
  run->add_flag("--trace-every-generation", ro.cfg.trace_every_generation, "Record IGD after every generation");
  run->add_option("--reference", ro.reference, "Reference variant for rank-sum markers")->capture_default_str();
  run->add_option("--jobs", ro.jobs, "Runs executed in parallel (0: all cores)")->capture_default_str();
  run->add_flag("--record-wall-clock", ro.record_wall_clock, "Write measured wall_ms into run CSVs");
  run->add_flag("--quiet", ro.quiet, "Suppress library warnings");
  run->add_option("--out", ro.out, "Output directory")->capture_default_str();

  ReportOptions rep;
  auto* report = app.add_subcommand("report", "Build comparison.csv and igd_evolution.csv from a run directory");
  report->add_option("--in", rep.in, "Directory written by 'run'")->capture_default_str();
  report->add_option("--out", rep.out, "Output directory (default: --in)");
  report->add_option("--reference", rep.reference, "Reference variant (default: the one in summary.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return do_run(ro);
    return do_report(rep);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UnsupportedOperation& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
