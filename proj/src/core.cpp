#include "dmoea/core.hpp"
#include "dmoea/random.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

namespace dmoea {

namespace {
std::atomic<std::size_t> g_warnings{0};
std::atomic<bool> g_quiet{false};
}  // namespace

void log_warning(std::string_view message) {
  ++g_warnings;
  if (!g_quiet.load()) std::clog << "warning: " << message << '\n';
}

std::size_t warning_count() noexcept { return g_warnings.load(); }

void set_warnings_quiet(bool quiet) noexcept { g_quiet.store(quiet); }

bool Bounds::contains(const DecisionVector& x) const {
  if (x.size() != lower.size()) return false;
  return ((x.array() >= lower.array()) && (x.array() <= upper.array())).all();
}

DecisionVector Bounds::clamp(const DecisionVector& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

bool dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) {
    std::ostringstream os;
    os << "dominates: dimension mismatch (" << a.size() << " vs " << b.size() << ")";
    throw ContractViolation(os.str());
  }
  bool strictly_better = false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points) {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j)
      dominated = j != i && dominates(points[j], points[i]);
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::vector<ObjectiveVector> objectives_of(const Population& pop) {
  std::vector<ObjectiveVector> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(ind.objectives);
  return out;
}

std::vector<DecisionVector> decisions_of(const Population& pop) {
  std::vector<DecisionVector> out;
  out.reserve(pop.size());
  for (const auto& ind : pop) out.push_back(ind.decision);
  return out;
}

Population nondominated_filter(const Population& pop) {
  const auto objs = objectives_of(pop);
  Population out;
  for (std::size_t i : nondominated_indices(objs)) out.push_back(pop[i]);
  return out;
}

double TimeContext::time() const noexcept {
  return static_cast<double>(iteration / frequency) / static_cast<double>(severity);
}

double current_time(const TimeContext& ctx) noexcept { return ctx.time(); }

std::vector<ObjectiveVector> DynamicProblem::true_pof_sample(double, std::size_t) const {
  throw UnsupportedOperation("problem '" + name() + "' has no analytic Pareto front");
}

CountingProblem::CountingProblem(std::shared_ptr<const DynamicProblem> inner)
    : inner_(std::move(inner)) {}

ObjectiveVector CountingProblem::evaluate(const DecisionVector& x, double t) const {
  ++count_;
  return inner_->evaluate(x, t);
}

Individual make_individual(const DynamicProblem& problem, DecisionVector x, double t) {
  ObjectiveVector f = problem.evaluate(x, t);
  return Individual{std::move(x), std::move(f), t};
}

void reevaluate(const DynamicProblem& problem, Population& pop, double t) {
  for (auto& ind : pop) {
    ind.objectives = problem.evaluate(ind.decision, t);
    ind.evaluated_at = t;
  }
}

// ---------------------------------------------------------------------------

Rng split_stream(std::uint64_t master_seed, Stream stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                    static_cast<std::uint32_t>(master_seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(index & 0xffffffffu),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

double uniform_open01(Rng& rng) {
  // 53 random bits mapped to (0, 1).
  const std::uint64_t bits = rng() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

DecisionVector uniform_in_box(const Bounds& bounds, Rng& rng) {
  DecisionVector x(bounds.dim());
  for (Eigen::Index d = 0; d < x.size(); ++d)
    x[d] = bounds.lower[d] + uniform_open01(rng) * (bounds.upper[d] - bounds.lower[d]);
  return x;
}

}  // namespace dmoea
