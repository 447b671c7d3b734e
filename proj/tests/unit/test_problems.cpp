#include <doctest.h>

#include "dmoea/core.hpp"
#include "dmoea/problems.hpp"

#include <cmath>
#include <numbers>

using namespace dmoea;

namespace {

DecisionVector filled(Eigen::Index n, double first, double rest) {
  DecisionVector x = DecisionVector::Constant(n, rest);
  x[0] = first;
  return x;
}

}  // namespace

TEST_CASE("DF0 hand points") {
  const Df0 p;
  CHECK(p.num_variables() == 10);
  CHECK(p.num_objectives() == 2);
  for (double t : {0.0, 0.3, 0.7, 1.0, 2.5}) {
    const double G = Df0::moving_optimum(t);
    const auto f = p.evaluate(filled(10, 0.25, G), t);
    CHECK(f[0] == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(f[1] == doctest::Approx(0.5).epsilon(1e-14));
  }
  const auto f0 = p.evaluate(DecisionVector::Zero(10), 0.0);
  CHECK(f0[0] == 0.0);
  CHECK(f0[1] == 1.0);

  const double t = 0.4;
  DecisionVector x = filled(10, 1.0, Df0::moving_optimum(t));
  x[1] += 1.0;
  const auto f = p.evaluate(x, t);
  CHECK(f[1] == doctest::Approx(2.0 * (1.0 - std::sqrt(0.5))).epsilon(1e-12));
  CHECK(f[1] == doctest::Approx(0.58579).epsilon(1e-5));

  CHECK_THROWS_AS(p.evaluate(filled(10, 1.5, 0.0), 0.0), ContractViolation);
  CHECK_THROWS_AS(p.evaluate(DecisionVector::Zero(9), 0.0), ContractViolation);
}

TEST_CASE("DF0 points on the moving set lie on the front") {
  const Df0 p;
  for (double t : {0.1, 0.55, 1.3}) {
    for (double x1 : {0.0, 0.1, 0.64, 1.0}) {
      const auto f = p.evaluate(filled(10, x1, Df0::moving_optimum(t)), t);
      CHECK(std::abs(f[1] - (1.0 - std::sqrt(f[0]))) < 1e-12);
    }
  }
}

TEST_CASE("true front sampling") {
  const Df0 p;
  const auto three = p.true_pof_sample(0.0, 3);
  REQUIRE(three.size() == 3);
  CHECK(three[0] == Eigen::Vector2d(0, 1));
  CHECK(three[1][0] == 0.5);
  CHECK(three[1][1] == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));
  CHECK(three[2] == Eigen::Vector2d(1, 0));

  const auto two = p.true_pof_sample(0.7, 2);
  CHECK(two[0] == Eigen::Vector2d(0, 1));
  CHECK(two[1] == Eigen::Vector2d(1, 0));

  CHECK_THROWS_AS(p.true_pof_sample(0.0, 1), ContractViolation);

  const auto a = p.true_pof_sample(0.2, 1000);
  const auto b = p.true_pof_sample(0.9, 1000);
  CHECK(a.size() == 1000);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK((a[i] - b[i]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("implemented fronts are mutually nondominated") {
  for (const auto& info : problem_registry()) {
    if (!info.implemented) continue;
    const auto p = make_problem(info.name);
    for (double t : {0.0, 0.3, 0.8}) {
      const auto pts = p->true_pof_sample(t, 1000);
      CHECK(nondominated_indices(pts).size() == pts.size());
    }
  }
}

TEST_CASE("DF1 hand point") {
  const Df1 p;
  // t = 1: G = 1, H = 2, so the front is 1 - f1^2
  const auto f = p.evaluate(filled(10, 0.5, 1.0), 1.0);
  CHECK(f[0] == 0.5);
  CHECK(f[1] == doctest::Approx(0.75).epsilon(1e-14));
  // one variable off by 0.5 at t = 0: G = 0, H = 1.25, g = 1.25
  DecisionVector x = filled(10, 0.5, 0.0);
  x[3] = 0.5;
  const auto h = p.evaluate(x, 0.0);
  CHECK(h[1] == doctest::Approx(1.25 * (1.0 - std::pow(0.4, 1.25))).epsilon(1e-14));
}

TEST_CASE("DF2 hand point") {
  const Df2 p;
  // t = 1: G = 1, r = floor(9 * 1) = 9, the last variable plays f1
  CHECK(p.position_variable(1.0) == 9);
  CHECK(p.position_variable(0.0) == 0);
  DecisionVector x = DecisionVector::Constant(10, 1.0);
  x[9] = 0.36;
  const auto f = p.evaluate(x, 1.0);
  CHECK(f[0] == doctest::Approx(0.36));
  CHECK(f[1] == doctest::Approx(0.4).epsilon(1e-14));
}

TEST_CASE("DF3 hand point") {
  const Df3 p;
  // t = 1: G = 1, H = 2.5; optimal x_i = G + x1^H
  const double x1 = 0.5;
  const double xi = 1.0 + std::pow(x1, 2.5);
  const auto f = p.evaluate(filled(10, x1, xi), 1.0);
  CHECK(f[1] == doctest::Approx(1.0 - std::pow(x1, 2.5)).epsilon(1e-14));
  // one variable off by 0.1 adds 0.01 to g
  DecisionVector x = filled(10, x1, xi);
  x[2] += 0.1;
  const auto h = p.evaluate(x, 1.0);
  const double g = 1.01;
  CHECK(h[1] == doctest::Approx(g * (1.0 - std::pow(x1 / g, 2.5))).epsilon(1e-13));
}

TEST_CASE("registry") {
  const auto& reg = problem_registry();
  CHECK(reg.size() == 15);
  for (const auto& info : reg) {
    CHECK(info.num_variables == 10);
    const int id = std::stoi(info.name.substr(2));
    CHECK(info.num_objectives == (id >= 10 ? 3 : 2));
  }
  CHECK(make_problem("DF0")->name() == "DF0");
  CHECK_THROWS_AS(make_problem("ZDT1"), ConfigError);
  CHECK_THROWS_AS(make_problem("DF9"), UnsupportedOperation);
  CHECK_THROWS_AS(df_suite_evaluate(12, DecisionVector::Zero(10), 0.0), UnsupportedOperation);

  const DecisionVector x = filled(10, 0.3, 0.2);
  CHECK(df_suite_evaluate(1, x, 0.4) == df_suite_evaluate(1, x, 0.4));
  CHECK(df_suite_evaluate(1, x, 0.4) == Df1().evaluate(x, 0.4));
}
