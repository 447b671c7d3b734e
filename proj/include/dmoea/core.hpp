#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dmoea {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// A point x in the decision space.
using DecisionVector = Eigen::VectorXd;
/// A point F(x, t) in the objective space.
using ObjectiveVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Error taxonomy

/// A precondition of an operation was violated by the caller.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// The requested operation is not available for this object.
struct UnsupportedOperation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (unknown names, out-of-range parameters).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear system that should be invertible is numerically singular.
struct DegenerateGeometry : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Warnings go to stderr and bump a process-wide counter so tests can
// observe them without parsing output.
void log_warning(std::string_view message);
std::size_t warning_count() noexcept;
void set_warnings_quiet(bool quiet) noexcept;

// ---------------------------------------------------------------------------
// Decision-space box

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index dim() const noexcept { return lower.size(); }
  bool contains(const DecisionVector& x) const;
  DecisionVector clamp(const DecisionVector& x) const;
  Eigen::VectorXd range() const { return upper - lower; }
  Eigen::VectorXd midpoint() const { return 0.5 * (lower + upper); }
};

// ---------------------------------------------------------------------------
// Individuals and populations

struct Individual {
  DecisionVector decision;
  ObjectiveVector objectives;
  double evaluated_at = 0.0;
};

using Population = std::vector<Individual>;

/// Pareto dominance for minimization: a is no worse everywhere and strictly
/// better somewhere. Exact comparisons.
bool dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// Indices of the members not dominated by any other member, in input order.
std::vector<std::size_t> nondominated_indices(std::span<const ObjectiveVector> points);

/// Members of `pop` not dominated by any other member, order preserved.
/// Duplicated objective vectors are all retained.
Population nondominated_filter(const Population& pop);

std::vector<ObjectiveVector> objectives_of(const Population& pop);
std::vector<DecisionVector> decisions_of(const Population& pop);

// ---------------------------------------------------------------------------
// Change-time bookkeeping

struct TimeContext {
  int severity = 10;      // n_t
  int frequency = 10;     // tau_t, generations per environment
  long iteration = 0;     // tau
  int num_changes = 30;

  /// t = (1/n_t) * floor(tau / tau_t)
  double time() const noexcept;
  /// Index of the current environment, floor(tau / tau_t).
  long environment() const noexcept { return iteration / frequency; }
  void advance() noexcept { ++iteration; }
};

double current_time(const TimeContext& ctx) noexcept;

// ---------------------------------------------------------------------------
// Problems

class DynamicProblem {
 public:
  virtual ~DynamicProblem() = default;

  virtual std::string name() const = 0;
  virtual Eigen::Index num_variables() const = 0;
  virtual Eigen::Index num_objectives() const = 0;
  virtual const Bounds& bounds() const = 0;

  /// Deterministic in (x, t). Throws ContractViolation if x is outside the box.
  virtual ObjectiveVector evaluate(const DecisionVector& x, double t) const = 0;

  /// `count` mutually nondominated points on the analytic front at time t.
  virtual std::vector<ObjectiveVector> true_pof_sample(double t, std::size_t count) const;
};

/// Decorator that counts objective evaluations. The counter is atomic so the
/// wrapped problem stays safe to evaluate concurrently.
class CountingProblem final : public DynamicProblem {
 public:
  explicit CountingProblem(std::shared_ptr<const DynamicProblem> inner);

  std::string name() const override { return inner_->name(); }
  Eigen::Index num_variables() const override { return inner_->num_variables(); }
  Eigen::Index num_objectives() const override { return inner_->num_objectives(); }
  const Bounds& bounds() const override { return inner_->bounds(); }
  ObjectiveVector evaluate(const DecisionVector& x, double t) const override;
  std::vector<ObjectiveVector> true_pof_sample(double t, std::size_t count) const override {
    return inner_->true_pof_sample(t, count);
  }

  std::size_t evaluations() const noexcept { return count_.load(); }

 private:
  std::shared_ptr<const DynamicProblem> inner_;
  mutable std::atomic<std::size_t> count_{0};
};

Individual make_individual(const DynamicProblem& problem, DecisionVector x, double t);

/// Re-evaluates every member at time t (explicit; individuals never refresh
/// themselves).
void reevaluate(const DynamicProblem& problem, Population& pop, double t);

}  // namespace dmoea
