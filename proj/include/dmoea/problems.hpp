#pragma once

#include "dmoea/core.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace dmoea {

/// Shared shape of the two-objective problems here: f1 = x_p for some
/// position p, f2 = g * h(f1 / g), front f2 = h(f1) for f1 in [0, 1].
class TwoObjectiveDynamicProblem : public DynamicProblem {
 public:
  Eigen::Index num_variables() const override { return bounds_.dim(); }
  Eigen::Index num_objectives() const override { return 2; }
  const Bounds& bounds() const override { return bounds_; }

  /// Uniform in f1 over [0, 1]; f2 from the analytic front.
  std::vector<ObjectiveVector> true_pof_sample(double t, std::size_t count) const override;

 protected:
  explicit TwoObjectiveDynamicProblem(Bounds bounds) : bounds_(std::move(bounds)) {}
  void require_in_bounds(const DecisionVector& x) const;
  /// f2 on the true front as a function of f1 at time t.
  virtual double front(double f1, double t) const = 0;

 private:
  Bounds bounds_;
};

/// Self-contained reference problem:
///   G(t) = |sin(pi t / 2)|, g = 1 + sum_{i>=2} (x_i - G)^2,
///   f1 = x1, f2 = g (1 - sqrt(x1 / g)).
/// The Pareto set moves with t; the front f2 = 1 - sqrt(f1) does not.
class Df0 final : public TwoObjectiveDynamicProblem {
 public:
  explicit Df0(Eigen::Index num_variables = 10);
  std::string name() const override { return "DF0"; }
  ObjectiveVector evaluate(const DecisionVector& x, double t) const override;
  static double moving_optimum(double t);

 protected:
  double front(double f1, double t) const override;
};

/// CEC 2018 DF1: convex/concave front shape H(t) changes, set moves.
class Df1 final : public TwoObjectiveDynamicProblem {
 public:
  explicit Df1(Eigen::Index num_variables = 10);
  std::string name() const override { return "DF1"; }
  ObjectiveVector evaluate(const DecisionVector& x, double t) const override;

 protected:
  double front(double f1, double t) const override;
};

/// CEC 2018 DF2: the position-related variable switches with t.
class Df2 final : public TwoObjectiveDynamicProblem {
 public:
  explicit Df2(Eigen::Index num_variables = 10);
  std::string name() const override { return "DF2"; }
  ObjectiveVector evaluate(const DecisionVector& x, double t) const override;
  /// Zero-based index of the variable that plays the role of x1 at time t.
  Eigen::Index position_variable(double t) const;

 protected:
  double front(double f1, double t) const override;
};

/// CEC 2018 DF3: variable linkage x_i = G + x1^H with changing H.
class Df3 final : public TwoObjectiveDynamicProblem {
 public:
  explicit Df3(Eigen::Index num_variables = 10);
  std::string name() const override { return "DF3"; }
  ObjectiveVector evaluate(const DecisionVector& x, double t) const override;

 protected:
  double front(double f1, double t) const override;
};

// ---------------------------------------------------------------------------
// Registry keyed by the names used on the command line ("DF0" .. "DF14").

struct ProblemInfo {
  std::string name;
  Eigen::Index num_variables;
  Eigen::Index num_objectives;
  bool implemented;
};

const std::vector<ProblemInfo>& problem_registry();
std::optional<ProblemInfo> find_problem(const std::string& name);

/// Throws ConfigError for unknown names and UnsupportedOperation for
/// registered problems whose definition is not available in this build.
std::shared_ptr<const DynamicProblem> make_problem(const std::string& name);

/// One-shot evaluation of a DF problem by its number (0..14).
ObjectiveVector df_suite_evaluate(int id, const DecisionVector& x, double t);

}  // namespace dmoea
