#pragma once

#include "dmoea/core.hpp"
#include "dmoea/metrics.hpp"
#include "dmoea/posmote.hpp"
#include "dmoea/predictor.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace dmoea {

/// How the initial population of each new environment is produced.
///  - DA:          uniform random re-initialization
///  - Isvm:        POSMOTE + incrementally updated classifier (r from config)
///  - IsvmR0/R3:   Isvm with the oversampling rate forced to 0 / 3
///  - SvmRetrain:  POSMOTE + a fresh classifier trained on the current set only
enum class Variant { DA, Isvm, IsvmR0, IsvmR3, SvmRetrain };

std::string to_string(Variant v);
/// Accepts "da", "isvm", "isvm-r0", "isvm-r3", "svm-retrain" (case-insensitive,
/// '_' and '-' interchangeable).
Variant parse_variant(const std::string& s);
bool uses_classifier(Variant v) noexcept;

struct SvmSettings {
  double C = 10.0;
  /// Re-run the kernel scale search at every change. Only meaningful for
  /// SvmRetrain; incremental variants keep the scale of their first model.
  bool research_scale = false;
  std::size_t scale_search_samples = 400;
};

struct ExperimentConfig {
  std::string problem = "DF0";
  std::string optimizer = "nsga2";
  Variant variant = Variant::Isvm;
  int severity = 10;    // n_t
  int frequency = 10;   // tau_t
  int num_changes = 30;
  int runs = 20;
  std::size_t pop_size = 0;  // 0: 100 for two objectives, 150 otherwise
  std::uint64_t seed = 1;
  PosmoteConfig posmote{};
  SvmSettings svm{};
  PredictorConfig predictor{};
  bool trace_every_generation = false;
  double reference_inflation = 1.0;  // rp = inflation * componentwise max of the true front
  std::size_t pof_samples = 1000;

  /// Throws ConfigError on invalid values or unknown problem/optimizer.
  void validate() const;
  /// The oversampling rate after variant overrides.
  int effective_oversampling_rate() const;
};

struct ChangeRecord {
  int change_index = 0;  // 1-based environment index after a change
  double t = 0.0;
  double igd = 0.0;
  double hv = 0.0;
  double wall_ms = 0.0;
  std::size_t classifier_samples = 0;
  std::size_t predicted_accepted = 0;
};

struct GenerationRecord {
  int change_index = 0;  // 0 is the initial environment
  int generation = 0;
  double igd = 0.0;
};

struct RunRecord {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::vector<ChangeRecord> trace;
  std::vector<GenerationRecord> generation_trace;
  double wall_ms = 0.0;
  std::size_t evaluations = 0;
  std::size_t classifiers_built = 0;
  double kernel_scale = 0.0;

  MetricTrace metric_trace() const;
  double migd() const { return metric_trace().migd(); }
  double mhv() const { return metric_trace().mhv(); }
};

/// Environment index -> whether a change happens at iteration tau.
bool change_schedule(const TimeContext& ctx) noexcept;

/// Resolved population size for a problem with `num_objectives` objectives.
std::size_t default_pop_size(Eigen::Index num_objectives, std::size_t requested);

/// One full dynamic run with master seed `seed`.
RunRecord run_framework(const ExperimentConfig& cfg, std::uint64_t seed);

/// cfg.runs runs with seeds cfg.seed, cfg.seed + 1, ...; independent runs
/// execute on up to `jobs` threads (0: hardware concurrency).
std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Summaries

struct SummaryRow {
  std::string problem;
  int severity = 0;
  int frequency = 0;
  std::string variant;
  std::size_t runs = 0;
  double migd_mean = 0.0, migd_std = 0.0;
  double mhv_mean = 0.0, mhv_std = 0.0;
  std::vector<double> migd_values, mhv_values;
  // Against the reference variant of the same cell; '+' reference
  // significantly better, '-' significantly worse, '=' otherwise.
  std::optional<double> migd_p, mhv_p;
  char migd_marker = '=';
  char mhv_marker = '=';
};

struct SummaryTable {
  std::string reference_variant;
  std::vector<SummaryRow> rows;
};

/// One row per (problem, n_t, tau_t, variant) with rank-sum markers against
/// `reference_variant` at level `alpha`.
SummaryTable summarize(const std::vector<RunRecord>& records, const std::string& reference_variant = "isvm",
                       double alpha = 0.05);

/// Same, starting from rows that already carry per-run values.
void mark_against_reference(SummaryTable& table, double alpha = 0.05);

// ---------------------------------------------------------------------------
// Persistence

/// Run CSV: change_index,t,igd,hv,wall_ms (17 significant digits). Unless
/// `record_wall_clock`, wall_ms is written as 0 so identical seeds give
/// identical files.
void write_run_csv(const std::filesystem::path& path, const RunRecord& run, bool record_wall_clock = false);
std::vector<ChangeRecord> read_run_csv(const std::filesystem::path& path);

/// Long-format per-generation IGD: change_index,generation,igd.
void write_generation_csv(const std::filesystem::path& path, const RunRecord& run);

/// summary.json: config echo, per-run MIGD/MHV, per-variant mean/std and
/// rank-sum p-values against the reference variant.
void write_summary_json(const std::filesystem::path& path, const ExperimentConfig& cfg,
                        const std::vector<RunRecord>& records, const SummaryTable& table);
SummaryTable read_summary_json(const std::filesystem::path& path);

/// Comparison table CSV.
void write_comparison_csv(const std::filesystem::path& path, const SummaryTable& table);
/// variant,change_index,mean_igd rows for IGD-evolution plots.
void write_igd_evolution_csv(const std::filesystem::path& path,
                             const std::vector<std::pair<std::string, std::vector<std::vector<ChangeRecord>>>>& runs_by_variant);

std::string format_double(double v);

}  // namespace dmoea
