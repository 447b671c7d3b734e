#include "dmoea/harness.hpp"

#include "dmoea/isvm.hpp"
#include "dmoea/optimizers.hpp"
#include "dmoea/problems.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <thread>
#include <tuple>

namespace dmoea {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::DA: return "da";
    case Variant::Isvm: return "isvm";
    case Variant::IsvmR0: return "isvm-r0";
    case Variant::IsvmR3: return "isvm-r3";
    case Variant::SvmRetrain: return "svm-retrain";
  }
  return "unknown";
}

Variant parse_variant(const std::string& s) {
  std::string key;
  for (char c : s) key.push_back(c == '_' ? '-' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "da") return Variant::DA;
  if (key == "isvm") return Variant::Isvm;
  if (key == "isvm-r0") return Variant::IsvmR0;
  if (key == "isvm-r3") return Variant::IsvmR3;
  if (key == "svm-retrain") return Variant::SvmRetrain;
  throw ConfigError("unknown variant '" + s + "' (expected da, isvm, isvm-r0, isvm-r3 or svm-retrain)");
}

bool uses_classifier(Variant v) noexcept { return v != Variant::DA; }

void ExperimentConfig::validate() const {
  auto info = find_problem(problem);
  if (!info) throw ConfigError("unknown problem '" + problem + "'");
  if (!info->implemented) throw ConfigError("problem '" + problem + "' is registered but not implemented");
  if (optimizer != "nsga2" && optimizer != "mopso")
    throw ConfigError("unknown optimizer '" + optimizer + "' (expected nsga2 or mopso)");
  if (severity <= 0) throw ConfigError("n_t must be positive");
  if (frequency <= 0) throw ConfigError("tau_t must be positive");
  if (num_changes < 0) throw ConfigError("number of changes must be non-negative");
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (posmote.oversampling_rate < 0) throw ConfigError("oversampling rate must be non-negative");
  if (posmote.neighbors < 1) throw ConfigError("neighbor count must be positive");
  if (!(svm.C > 0.0)) throw ConfigError("SVM C must be positive");
  if (predictor.max_attempts_factor < 1) throw ConfigError("attempt factor must be positive");
  if (!(reference_inflation > 0.0)) throw ConfigError("reference inflation must be positive");
  if (pof_samples < 2) throw ConfigError("at least two true-front samples are needed");
}

int ExperimentConfig::effective_oversampling_rate() const {
  switch (variant) {
    case Variant::IsvmR0: return 0;
    case Variant::IsvmR3: return 3;
    default: return posmote.oversampling_rate;
  }
}

MetricTrace RunRecord::metric_trace() const {
  MetricTrace mt;
  mt.per_change.reserve(trace.size());
  for (const auto& c : trace) mt.per_change.push_back({c.t, c.igd, c.hv});
  return mt;
}

bool change_schedule(const TimeContext& ctx) noexcept {
  return ctx.iteration > 0 && ctx.frequency > 0 && ctx.iteration % ctx.frequency == 0;
}

std::size_t default_pop_size(Eigen::Index num_objectives, std::size_t requested) {
  if (requested > 0) return requested;
  return num_objectives == 2 ? 100 : 150;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

struct Front {
  std::vector<ObjectiveVector> points;
  ObjectiveVector rp;
};

Front true_front(const DynamicProblem& problem, double t, const ExperimentConfig& cfg) {
  Front f{problem.true_pof_sample(t, cfg.pof_samples), {}};
  f.rp = reference_point(f.points) * cfg.reference_inflation;
  return f;
}

Population random_population(const DynamicProblem& problem, std::size_t n, double t, Rng& rng) {
  Population pop;
  pop.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pop.push_back(make_individual(problem, uniform_in_box(problem.bounds(), rng), t));
  return pop;
}

/// The classifier side of one run.
class Predictor {
 public:
  Predictor(const ExperimentConfig& cfg, std::uint64_t seed) : cfg_(cfg), seed_(seed) {}

  std::size_t samples() const { return svm_ ? static_cast<std::size_t>(svm_->size()) : 0; }
  std::size_t built() const { return built_; }
  double scale() const { return scale_; }

  PredictedPopulation predict(const LabeledSampleSet& train, std::size_t pop_size, const Bounds& bounds,
                              int env) {
    const bool retrain = cfg_.variant == Variant::SvmRetrain;
    if (scale_ <= 0.0 || (retrain && cfg_.svm.research_scale)) {
      Rng rng = split_stream(seed_, Stream::ScaleSearch, static_cast<std::uint64_t>(env));
      const auto labeled = train.labeled();
      const auto grid = default_scale_grid(labeled);
      scale_ = grid_search_scale(labeled, grid, cfg_.svm.C, rng, cfg_.svm.scale_search_samples).scale;
    }
    if (!svm_ || retrain) {
      svm_ = std::make_unique<Svm>(RbfKernel<double>(scale_), cfg_.svm.C);
      ++built_;
    }
    Rng rng = split_stream(seed_, Stream::Predictor, static_cast<std::uint64_t>(env));
    return predict_population(*svm_, train, pop_size, bounds, rng, cfg_.predictor);
  }

 private:
  const ExperimentConfig& cfg_;
  std::uint64_t seed_;
  std::unique_ptr<Svm> svm_;
  double scale_ = 0.0;
  std::size_t built_ = 0;
};

}  // namespace

RunRecord run_framework(const ExperimentConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const auto start = Clock::now();
  const auto base = make_problem(cfg.problem);
  const CountingProblem problem(base);
  const auto optimizer = make_optimizer(cfg.optimizer);
  const std::size_t pop_size = default_pop_size(problem.num_objectives(), cfg.pop_size);
  const Bounds& bounds = problem.bounds();

  RunRecord rec;
  rec.config = cfg;
  rec.seed = seed;
  rec.trace.reserve(static_cast<std::size_t>(cfg.num_changes));

  PosmoteConfig pcfg = cfg.posmote;
  pcfg.oversampling_rate = cfg.effective_oversampling_rate();
  Predictor predictor(cfg, seed);

  TimeContext ctx{cfg.severity, cfg.frequency, 0, cfg.num_changes};

  auto solve = [&](Population initial, int env, double t) {
    Rng rng = split_stream(seed, Stream::Optimizer, static_cast<std::uint64_t>(env));
    GenerationObserver observer;
    Front front;
    if (cfg.trace_every_generation) {
      front = true_front(problem, t, cfg);
      rec.generation_trace.push_back({env, 0, igd(front.points, objectives_of(nondominated_filter(initial)))});
      observer = [&](int gen, const Population& pf) {
        rec.generation_trace.push_back({env, gen, igd(front.points, objectives_of(pf))});
      };
    }
    return optimizer->run(problem, t, initial, cfg.frequency, rng, observer);
  };

  // Initial environment.
  Population pos;
  {
    Rng rng = split_stream(seed, Stream::Initial, 0);
    pos = solve(random_population(problem, pop_size, ctx.time(), rng), 0, ctx.time());
  }

  for (int env = 1; env <= cfg.num_changes; ++env) {
    const auto env_start = Clock::now();
    for (int g = 0; g < cfg.frequency; ++g) ctx.advance();
    const double t = ctx.time();

    Population initial;
    ChangeRecord change;
    change.change_index = env;
    change.t = t;
    if (cfg.variant == Variant::DA) {
      Rng rng = split_stream(seed, Stream::Initial, static_cast<std::uint64_t>(env));
      initial = random_population(problem, pop_size, t, rng);
    } else {
      if (pos.size() > pop_size) pos.resize(pop_size);
      const auto prev = decisions_of(pos);
      Rng prng = split_stream(seed, Stream::Posmote, static_cast<std::uint64_t>(env));
      const LabeledSampleSet train = posmote(prev, pcfg, bounds, prng);
      const PredictedPopulation predicted = predictor.predict(train, pop_size, bounds, env);
      change.predicted_accepted = predicted.accepted;
      initial.reserve(pop_size);
      for (const auto& x : predicted.members) initial.push_back(make_individual(problem, x, t));
    }
    change.classifier_samples = predictor.samples();

    pos = solve(std::move(initial), env, t);
    const Front front = true_front(problem, t, cfg);
    const auto approx = objectives_of(pos);
    change.igd = igd(front.points, approx);
    change.hv = hv(approx, front.rp);
    change.wall_ms = elapsed_ms(env_start);
    rec.trace.push_back(change);
  }

  rec.evaluations = problem.evaluations();
  rec.classifiers_built = predictor.built();
  rec.kernel_scale = predictor.scale();
  rec.wall_ms = elapsed_ms(start);
  return rec;
}

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg, unsigned jobs) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.runs);
  std::vector<RunRecord> out(n);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = run_framework(cfg, cfg.seed + i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

char marker(std::span<const double> ref, std::span<const double> other, double p, double alpha,
            bool smaller_is_better) {
  if (!(p < alpha)) return '=';
  const double mr = mean(ref), mo = mean(other);
  if (mr == mo) return '=';
  const bool ref_better = smaller_is_better ? mr < mo : mr > mo;
  return ref_better ? '+' : '-';
}

}  // namespace

void mark_against_reference(SummaryTable& table, double alpha) {
  for (auto& row : table.rows) {
    row.migd_p.reset();
    row.mhv_p.reset();
    row.migd_marker = row.mhv_marker = '=';
    if (row.variant == table.reference_variant) continue;
    const auto ref = std::find_if(table.rows.begin(), table.rows.end(), [&](const SummaryRow& r) {
      return r.problem == row.problem && r.severity == row.severity && r.frequency == row.frequency &&
             r.variant == table.reference_variant;
    });
    if (ref == table.rows.end()) continue;
    row.migd_p = ranksum_test(ref->migd_values, row.migd_values);
    row.mhv_p = ranksum_test(ref->mhv_values, row.mhv_values);
    row.migd_marker = marker(ref->migd_values, row.migd_values, *row.migd_p, alpha, true);
    row.mhv_marker = marker(ref->mhv_values, row.mhv_values, *row.mhv_p, alpha, false);
  }
}

SummaryTable summarize(const std::vector<RunRecord>& records, const std::string& reference_variant, double alpha) {
  using Key = std::tuple<std::string, int, int, std::string>;
  std::map<Key, SummaryRow> cells;
  std::vector<Key> order;
  for (const auto& r : records) {
    const Key key{r.config.problem, r.config.severity, r.config.frequency, to_string(r.config.variant)};
    auto [it, inserted] = cells.try_emplace(key);
    if (inserted) {
      order.push_back(key);
      it->second.problem = r.config.problem;
      it->second.severity = r.config.severity;
      it->second.frequency = r.config.frequency;
      it->second.variant = to_string(r.config.variant);
    }
    const MetricTrace mt = r.metric_trace();
    it->second.migd_values.push_back(mt.migd());
    it->second.mhv_values.push_back(mt.mhv());
  }

  SummaryTable table;
  table.reference_variant = reference_variant;
  for (const auto& key : order) {
    SummaryRow row = std::move(cells[key]);
    row.runs = row.migd_values.size();
    row.migd_mean = mean(row.migd_values);
    row.migd_std = stddev(row.migd_values);
    row.mhv_mean = mean(row.mhv_values);
    row.mhv_std = stddev(row.mhv_values);
    table.rows.push_back(std::move(row));
  }
  mark_against_reference(table, alpha);
  return table;
}

}  // namespace dmoea
