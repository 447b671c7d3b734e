#include <doctest.h>

#include "dmoea/core.hpp"
#include "dmoea/random.hpp"

#include <random>

using namespace dmoea;

namespace {

ObjectiveVector v2(double a, double b) {
  ObjectiveVector v(2);
  v << a, b;
  return v;
}

Individual ind(double a, double b) { return {v2(0, 0), v2(a, b), 0.0}; }

}  // namespace

TEST_CASE("dominance") {
  CHECK(dominates(v2(1, 2), v2(2, 3)));
  CHECK_FALSE(dominates(v2(1, 2), v2(1, 2)));
  CHECK_FALSE(dominates(v2(1, 3), v2(2, 2)));
  CHECK_FALSE(dominates(v2(2, 2), v2(1, 3)));
  CHECK(dominates(v2(1, 2), v2(1, 3)));
  ObjectiveVector three(3);
  three << 0, 0, 0;
  CHECK_THROWS_AS(dominates(v2(0, 0), three), ContractViolation);
}

TEST_CASE("nondominated filter") {
  const Population pop{ind(1, 2), ind(2, 1), ind(2, 2)};
  const Population nd = nondominated_filter(pop);
  REQUIRE(nd.size() == 2);
  CHECK(nd[0].objectives == v2(1, 2));
  CHECK(nd[1].objectives == v2(2, 1));

  CHECK(nondominated_filter(Population{ind(3, 3)}).size() == 1);
  CHECK(nondominated_filter(Population{}).empty());

  SUBCASE("duplicates are all kept") {
    const Population dup{ind(1, 1), ind(1, 1), ind(2, 2)};
    CHECK(nondominated_filter(dup).size() == 2);
  }

  SUBCASE("matches pairwise brute force") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    Population p;
    for (int i = 0; i < 50; ++i) p.push_back(ind(u(rng), u(rng)));
    std::vector<ObjectiveVector> expected;
    for (std::size_t i = 0; i < p.size(); ++i) {
      bool dominated = false;
      for (std::size_t j = 0; j < p.size(); ++j) {
        const auto& a = p[j].objectives;
        const auto& b = p[i].objectives;
        if ((a.array() <= b.array()).all() && (a.array() < b.array()).any()) dominated = true;
      }
      if (!dominated) expected.push_back(p[i].objectives);
    }
    const auto got = objectives_of(nondominated_filter(p));
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == expected[i]);
  }
}

TEST_CASE("time formula") {
  TimeContext ctx{10, 10, 0, 30};
  CHECK(ctx.time() == 0.0);
  ctx.iteration = 25;
  CHECK(ctx.time() == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(ctx.environment() == 2);
  TimeContext other{5, 10, 30, 30};
  CHECK(current_time(other) == doctest::Approx(0.6).epsilon(1e-15));
}

TEST_CASE("bounds") {
  Bounds b{Eigen::Vector2d(0, -1), Eigen::Vector2d(1, 2)};
  CHECK(b.contains(Eigen::Vector2d(0.5, 2.0)));
  CHECK_FALSE(b.contains(Eigen::Vector2d(1.5, 0.0)));
  CHECK_FALSE(b.contains(Eigen::Vector3d(0.5, 0.0, 0.0)));
  CHECK(b.clamp(Eigen::Vector2d(1.5, -3.0)) == Eigen::Vector2d(1.0, -1.0));
}

TEST_CASE("split streams are deterministic and distinct") {
  Rng a = split_stream(42, Stream::Posmote, 3);
  Rng b = split_stream(42, Stream::Posmote, 3);
  Rng c = split_stream(42, Stream::Predictor, 3);
  Rng d = split_stream(42, Stream::Posmote, 4);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(x != d());

  Rng r(1);
  for (int i = 0; i < 10000; ++i) {
    const double u = uniform_open01(r);
    CHECK((u > 0.0 && u < 1.0));
  }
}

TEST_CASE("counting decorator") {
  struct Sphere final : DynamicProblem {
    Bounds b{Eigen::Vector2d(-1, -1), Eigen::Vector2d(1, 1)};
    std::string name() const override { return "sphere"; }
    Eigen::Index num_variables() const override { return 2; }
    Eigen::Index num_objectives() const override { return 2; }
    const Bounds& bounds() const override { return b; }
    ObjectiveVector evaluate(const DecisionVector& x, double t) const override {
      return v2(x.squaredNorm(), (x.array() - t).square().sum());
    }
  };
  CountingProblem p(std::make_shared<Sphere>());
  CHECK(p.evaluations() == 0);
  auto i = make_individual(p, Eigen::Vector2d(0.5, 0.5), 1.0);
  CHECK(p.evaluations() == 1);
  CHECK(i.objectives[0] == doctest::Approx(0.5));
  CHECK(i.evaluated_at == 1.0);
  Population pop{i, i};
  reevaluate(p, pop, 0.0);
  CHECK(p.evaluations() == 3);
  CHECK_THROWS_AS(p.true_pof_sample(0.0, 10), UnsupportedOperation);
}
