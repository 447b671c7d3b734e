#include "dmoea/problems.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace dmoea {

namespace {

Bounds box(Eigen::Index n, double lo1, double hi1, double lo, double hi) {
  if (n < 2) throw ContractViolation("dynamic problems need at least 2 decision variables");
  Bounds b{Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
  b.lower[0] = lo1;
  b.upper[0] = hi1;
  return b;
}

double half_pi_sin(double t) { return std::sin(0.5 * std::numbers::pi * t); }

}  // namespace

void TwoObjectiveDynamicProblem::require_in_bounds(const DecisionVector& x) const {
  if (!bounds_.contains(x)) {
    std::ostringstream os;
    os << name() << ": decision vector outside bounds (dimension " << x.size() << ", expected "
       << bounds_.dim() << ")";
    throw ContractViolation(os.str());
  }
}

std::vector<ObjectiveVector> TwoObjectiveDynamicProblem::true_pof_sample(double t,
                                                                         std::size_t count) const {
  if (count < 2) throw ContractViolation("true_pof_sample: count must be at least 2");
  std::vector<ObjectiveVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double f1 = static_cast<double>(i) / static_cast<double>(count - 1);
    ObjectiveVector p(2);
    p << f1, front(f1, t);
    out.push_back(std::move(p));
  }
  return out;
}

// DF0 ------------------------------------------------------------------------

Df0::Df0(Eigen::Index n) : TwoObjectiveDynamicProblem(box(n, 0.0, 1.0, -1.0, 2.0)) {}

double Df0::moving_optimum(double t) { return std::abs(half_pi_sin(t)); }

ObjectiveVector Df0::evaluate(const DecisionVector& x, double t) const {
  require_in_bounds(x);
  const double G = moving_optimum(t);
  const double g = 1.0 + (x.tail(x.size() - 1).array() - G).square().sum();
  ObjectiveVector f(2);
  f << x[0], g * (1.0 - std::sqrt(x[0] / g));
  return f;
}

double Df0::front(double f1, double) const { return 1.0 - std::sqrt(f1); }

// DF1 ------------------------------------------------------------------------

Df1::Df1(Eigen::Index n) : TwoObjectiveDynamicProblem(box(n, 0.0, 1.0, 0.0, 1.0)) {}

ObjectiveVector Df1::evaluate(const DecisionVector& x, double t) const {
  require_in_bounds(x);
  const double G = std::abs(half_pi_sin(t));
  const double H = 0.75 * half_pi_sin(t) + 1.25;
  const double g = 1.0 + (x.tail(x.size() - 1).array() - G).square().sum();
  ObjectiveVector f(2);
  f << x[0], g * (1.0 - std::pow(x[0] / g, H));
  return f;
}

double Df1::front(double f1, double t) const {
  const double H = 0.75 * half_pi_sin(t) + 1.25;
  return 1.0 - std::pow(f1, H);
}

// DF2 ------------------------------------------------------------------------

Df2::Df2(Eigen::Index n) : TwoObjectiveDynamicProblem(box(n, 0.0, 1.0, 0.0, 1.0)) {}

Eigen::Index Df2::position_variable(double t) const {
  const double G = std::abs(half_pi_sin(t));
  return static_cast<Eigen::Index>(std::floor(static_cast<double>(num_variables() - 1) * G));
}

ObjectiveVector Df2::evaluate(const DecisionVector& x, double t) const {
  require_in_bounds(x);
  const double G = std::abs(half_pi_sin(t));
  const Eigen::Index r = position_variable(t);
  double g = 1.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (i != r) g += (x[i] - G) * (x[i] - G);
  ObjectiveVector f(2);
  f << x[r], g * (1.0 - std::sqrt(x[r] / g));
  return f;
}

double Df2::front(double f1, double) const { return 1.0 - std::sqrt(f1); }

// DF3 ------------------------------------------------------------------------

Df3::Df3(Eigen::Index n) : TwoObjectiveDynamicProblem(box(n, 0.0, 1.0, -1.0, 2.0)) {}

ObjectiveVector Df3::evaluate(const DecisionVector& x, double t) const {
  require_in_bounds(x);
  const double G = half_pi_sin(t);
  const double H = G + 1.5;
  const double shift = G + std::pow(x[0], H);
  const double g = 1.0 + (x.tail(x.size() - 1).array() - shift).square().sum();
  ObjectiveVector f(2);
  f << x[0], g * (1.0 - std::pow(x[0] / g, H));
  return f;
}

double Df3::front(double f1, double t) const {
  const double H = half_pi_sin(t) + 1.5;
  return 1.0 - std::pow(f1, H);
}

// Registry -------------------------------------------------------------------

const std::vector<ProblemInfo>& problem_registry() {
  static const std::vector<ProblemInfo> registry = [] {
    std::vector<ProblemInfo> r;
    r.push_back({"DF0", 10, 2, true});
    for (int id = 1; id <= 14; ++id)
      r.push_back({"DF" + std::to_string(id), 10, id <= 9 ? 2 : 3, id <= 3});
    return r;
  }();
  return registry;
}

std::optional<ProblemInfo> find_problem(const std::string& name) {
  for (const auto& info : problem_registry())
    if (info.name == name) return info;
  return std::nullopt;
}

std::shared_ptr<const DynamicProblem> make_problem(const std::string& name) {
  const auto info = find_problem(name);
  if (!info) throw ConfigError("unknown problem '" + name + "'");
  if (name == "DF0") return std::make_shared<Df0>(info->num_variables);
  if (name == "DF1") return std::make_shared<Df1>(info->num_variables);
  if (name == "DF2") return std::make_shared<Df2>(info->num_variables);
  if (name == "DF3") return std::make_shared<Df3>(info->num_variables);
  throw UnsupportedOperation("problem '" + name +
                             "' is registered but its definition is not implemented in this build");
}

ObjectiveVector df_suite_evaluate(int id, const DecisionVector& x, double t) {
  return make_problem("DF" + std::to_string(id))->evaluate(x, t);
}

}  // namespace dmoea
