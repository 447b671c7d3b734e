#include <doctest.h>

#include "dmoea/predictor.hpp"

using namespace dmoea;
using Eigen::VectorXd;

namespace {

Bounds unit_box(Eigen::Index d) { return {VectorXd::Zero(d), VectorXd::Ones(d)}; }

}  // namespace

TEST_CASE("accept-all filter is the identity") {
  Rng a(3), b(3);
  const auto out = filter_candidates([](const DecisionVector&) { return true; }, 50, unit_box(3), a, {});
  CHECK(out.members.size() == 50);
  CHECK(out.attempts == 50);
  CHECK(out.accepted == 50);
  CHECK_FALSE(out.capped);
  for (const auto& x : out.members) CHECK(x == uniform_in_box(unit_box(3), b));
}

TEST_CASE("reject-all filter hits the cap") {
  set_warnings_quiet(true);
  Rng rng(1);
  const std::size_t warnings = warning_count();
  PredictorConfig cfg;
  cfg.max_attempts_factor = 7;
  const auto out = filter_candidates([](const DecisionVector&) { return false; }, 20, unit_box(2), rng, cfg);
  CHECK(out.members.size() == 20);
  CHECK(out.attempts == 140);
  CHECK(out.accepted == 0);
  CHECK(out.capped);
  CHECK(warning_count() == warnings + 1);
  set_warnings_quiet(false);
}

TEST_CASE("half-space acceptance") {
  Rng rng(2);
  const auto out =
      filter_candidates([](const DecisionVector& x) { return x[0] < 0.5; }, 100, unit_box(2), rng, {});
  CHECK(out.accepted == 100);
  for (const auto& x : out.members) CHECK(x[0] < 0.5);
  CHECK(out.attempts > 100);
}

TEST_CASE("predicted population follows the previous Pareto set") {
  Rng rng(5);
  const Bounds b = unit_box(2);
  std::vector<DecisionVector> prev;
  for (int i = 0; i < 20; ++i) prev.push_back(Eigen::Vector2d(0.05 * i, 0.2));
  const auto train = posmote(prev, {}, b, rng);
  Svm svm(RbfKernel<double>(20.0), 10.0);
  const auto out = predict_population(svm, train, 50, b, rng);
  CHECK(svm.size() == static_cast<Eigen::Index>(train.size()));
  CHECK(out.members.size() == 50);
  CHECK_FALSE(out.fallback);
  double mean_dist = 0.0;
  for (const auto& x : out.members) mean_dist += std::abs(x[1] - 0.2);
  mean_dist /= 50.0;
  // uniform draws would average about 0.34
  CHECK(mean_dist < 0.2);
}

TEST_CASE("one-class classifier falls back to random") {
  set_warnings_quiet(true);
  Rng rng(6);
  LabeledSampleSet only_pos;
  only_pos.positives = {Eigen::Vector2d(0.1, 0.1), Eigen::Vector2d(0.2, 0.2)};
  Svm svm(RbfKernel<double>(1.0), 10.0);
  const auto out = predict_population(svm, only_pos, 10, unit_box(2), rng);
  CHECK(out.fallback);
  CHECK(out.members.size() == 10);
  set_warnings_quiet(false);
}

TEST_CASE("insertion orders reach the same classifier") {
  Rng r1(8), r2(8);
  std::vector<DecisionVector> prev;
  for (int i = 0; i < 10; ++i) prev.push_back(Eigen::Vector2d(0.1 * i, 0.5));
  Rng rp(1);
  const auto train = posmote(prev, {2, 3, SmoteDirection::Extrapolate}, unit_box(2), rp);
  Svm a(RbfKernel<double>(5.0), 10.0), b(RbfKernel<double>(5.0), 10.0);
  update_classifier(a, train, InsertOrder::InterleavedRandom, r1);
  update_classifier(b, train, InsertOrder::PositivesFirst, r2);
  for (double x : {0.05, 0.33, 0.9})
    for (double y : {0.1, 0.5, 0.8}) {
      const Eigen::Vector2d p(x, y);
      CHECK(a.decision_value(p) == doctest::Approx(b.decision_value(p)).epsilon(1e-6));
    }
}
