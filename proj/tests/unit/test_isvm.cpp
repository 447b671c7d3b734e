#include <doctest.h>

#include "dmoea/isvm.hpp"
#include "support/oracles.hpp"

#include <cmath>
#include <map>
#include <random>

using namespace dmoea;
using Eigen::VectorXd;

namespace {

LabeledSample sample1(double x, int y) { return {VectorXd::Constant(1, x), y}; }

/// Rinv entries keyed by sample id (-1 is the bias row).
std::map<std::pair<Eigen::Index, Eigen::Index>, double> keyed_inverse(const Svm& svm) {
  std::vector<Eigen::Index> ids{-1};
  for (auto k : svm.margin_set()) ids.push_back(k);
  std::map<std::pair<Eigen::Index, Eigen::Index>, double> out;
  const auto& R = svm.inverse_jacobian();
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = 0; b < ids.size(); ++b)
      out[{ids[a], ids[b]}] = R(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
  return out;
}

double tol_mat(const Svm& svm) {
  return svm.tolerances().matrix_per_margin * std::max<double>(1.0, static_cast<double>(svm.margin_set().size()));
}

}  // namespace

TEST_CASE("rbf kernel") {
  const RbfKernel<double> k(1.0);
  const VectorXd a = VectorXd::Zero(3);
  VectorXd z = VectorXd::Zero(3);
  CHECK(kernel_eval(k, a, z) == 1.0);
  z[1] = 1.0;
  CHECK(kernel_eval(k, a, z) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(kernel_eval(k, a, z) == doctest::Approx(0.367879).epsilon(1e-6));
  CHECK(kernel_eval(k, a, z) == kernel_eval(k, z, a));
  CHECK_THROWS_AS(RbfKernel<double>(0.0), ConfigError);
  CHECK_THROWS_AS(RbfKernel<double>(-2.0), ConfigError);
  CHECK_THROWS_AS(kernel_eval(k, a, VectorXd::Zero(2)), ContractViolation);
}

TEST_CASE("empty and one-class states") {
  Svm svm(RbfKernel<double>(1.0), 10.0);
  CHECK_THROWS_AS(svm.decision_value(VectorXd::Zero(1)), UntrainedModel);
  svm.increment(sample1(0.0, 1));
  CHECK(svm.margin(0) == doctest::Approx(-1.0 + svm.bias()));
  CHECK(svm.alpha(0) == 0.0);
  CHECK(svm.check_invariants().ok());
  CHECK_THROWS_AS(svm.classify(VectorXd::Zero(1)), UntrainedModel);
  svm.increment(sample1(0.5, 1));
  CHECK(svm.check_invariants().ok());
  svm.increment(sample1(2.0, -1));
  CHECK(svm.has_both_classes());
  CHECK(svm.check_invariants().ok());
  CHECK(svm.classify(VectorXd::Zero(1)) == 1);
  CHECK(svm.classify(VectorXd::Constant(1, 3.0)) == -1);
  CHECK_THROWS_AS(svm.increment(sample1(0.0, 0)), ContractViolation);
  CHECK_THROWS_AS(svm.increment(LabeledSample{VectorXd::Zero(2), 1}), ContractViolation);
}

TEST_CASE("margin before training is -1") {
  // all alpha = 0 and b = 0 give g = -1 for any sample
  Svm svm(RbfKernel<double>(1.0), 1.0);
  svm.increment(sample1(1.0, -1));
  CHECK(svm.alpha(0) == 0.0);
  CHECK(svm.margin(0) == doctest::Approx(-1.0 - svm.bias()));
}

TEST_CASE("symmetric two-point set") {
  for (double scale : {0.1, 1.0, 5.0}) {
    const std::vector<LabeledSample> s{sample1(-1.0, -1), sample1(1.0, 1)};
    const Svm svm = train_incremental(s, scale, 10.0);
    CHECK(std::abs(svm.bias()) < 1e-9);
    CHECK(std::abs(svm.decision_value(VectorXd::Zero(1))) < 1e-9);
    CHECK(svm.alpha(0) == doctest::Approx(svm.alpha(1)).epsilon(1e-12));

    const auto qp = oracle::batch_svm(s, scale, 10.0);
    CHECK(qp.alpha[0] == doctest::Approx(qp.alpha[1]).epsilon(1e-9));
    CHECK(std::abs(qp.b) < 1e-9);
    CHECK(svm.alpha(0) == doctest::Approx(qp.alpha[0]).epsilon(1e-8));
  }
}

TEST_CASE("batch oracle sanity on a separable set") {
  std::vector<LabeledSample> s{{Eigen::Vector2d(0, 0), -1},
                               {Eigen::Vector2d(0, 1), -1},
                               {Eigen::Vector2d(3, 0), 1},
                               {Eigen::Vector2d(3, 1), 1}};
  const auto qp = oracle::batch_svm(s, 0.5, 1e4);
  for (const auto& ls : s) {
    const double f = oracle::kernel_expansion(s, qp.alpha, 0.5, ls.x) + qp.b;
    CHECK(ls.y * f >= 1.0 - 1e-6);
  }
}

TEST_CASE("margin vectors sit on the margin") {
  std::mt19937_64 rng(11);
  const auto s = oracle::random_dataset(rng, 40, 3);
  const Svm svm = train_incremental(s, 0.5, 10.0);
  REQUIRE_FALSE(svm.margin_set().empty());
  for (auto k : svm.margin_set()) {
    const double f = svm.decision_value(svm.sample(k));
    CHECK(std::abs(s[static_cast<std::size_t>(k)].y * f - 1.0) <= svm.tolerances().kkt);
  }
  // cached and recomputed margins agree with an independent recomputation
  const auto K = oracle::rbf_gram(s, 0.5);
  for (Eigen::Index i = 0; i < svm.size(); ++i) {
    double g = svm.label(i) * svm.bias() - 1.0;
    for (Eigen::Index j = 0; j < svm.size(); ++j) g += svm.label(i) * svm.label(j) * K(i, j) * svm.alpha(j);
    CHECK(svm.margin(i) == doctest::Approx(g).epsilon(1e-10));
  }
}

TEST_CASE("incremental path matches the batch optimum") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = trial < 3 ? 40 : 60;
    const auto s = oracle::random_dataset(rng, n, 2 + trial);
    const double C = trial % 2 ? 10.0 : 1.0;
    const double scale = 0.3 + 0.2 * trial;

    std::vector<LabeledSample> order = s;
    std::shuffle(order.begin(), order.end(), rng);
    Svm svm(RbfKernel<double>(scale), C);
    for (const auto& ls : order) {
      svm.increment(ls);
      const auto rep = svm.check_invariants();
      REQUIRE_MESSAGE(rep.ok(), rep.first_failure);
    }
    const auto qp = oracle::batch_svm(order, scale, C);
    VectorXd a(n);
    for (int i = 0; i < n; ++i) a[i] = svm.alpha(i);
    const auto K = oracle::rbf_gram(order, scale);
    VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = order[static_cast<std::size_t>(i)].y;
    auto objective = [&](const VectorXd& al) {
      const VectorXd ya = y.cwiseProduct(al);
      return 0.5 * ya.dot(K * ya) - al.sum();
    };
    CHECK(std::abs(objective(a) - objective(qp.alpha)) < 1e-6);
    CHECK(svm.dual_objective() == doctest::Approx(objective(a)).epsilon(1e-10));

    std::normal_distribution<double> g(0.0, 1.5);
    for (int p = 0; p < 20; ++p) {
      VectorXd x(svm.dim());
      for (Eigen::Index d = 0; d < x.size(); ++d) x[d] = g(rng);
      const double f_qp = oracle::kernel_expansion(order, qp.alpha, scale, x);
      const double f_inc = svm.decision_value(x) - svm.bias();
      CHECK(std::abs(f_qp - f_inc) < 1e-6);
    }
    if (qp.unique_bias()) CHECK(std::abs(svm.bias() - qp.b) < 1e-6);
    else CHECK((svm.bias() >= qp.b_lo - 1e-6 && svm.bias() <= qp.b_hi + 1e-6));
  }
}

TEST_CASE("duplicate of a remaining point changes nothing") {
  std::mt19937_64 rng(5);
  const auto s = oracle::random_dataset(rng, 40, 2);
  Svm svm = train_incremental(s, 1.0, 10.0);
  const auto rest = svm.remaining_set();
  REQUIRE_FALSE(rest.empty());
  const Eigen::Index k = rest.front();
  std::vector<VectorXd> probes;
  std::vector<double> before;
  for (int p = 0; p < 10; ++p) {
    probes.push_back(VectorXd::Random(2));
    before.push_back(svm.decision_value(probes.back()));
  }
  svm.increment(VectorXd(svm.sample(k)), svm.label(k));
  CHECK(svm.set_of(svm.size() - 1) == SvmSet::Remaining);
  for (std::size_t p = 0; p < probes.size(); ++p) CHECK(std::abs(svm.decision_value(probes[p]) - before[p]) < 1e-9);
}

TEST_CASE("exact duplicates of margin vectors keep the invariants") {
  std::mt19937_64 rng(17);
  auto s = oracle::random_dataset(rng, 30, 2);
  Svm svm = train_incremental(s, 1.0, 10.0);
  const auto margin = svm.margin_set();
  for (auto k : margin) {
    svm.increment(VectorXd(svm.sample(k)), svm.label(k));
    const auto rep = svm.check_invariants();
    CHECK_MESSAGE(rep.ok(), rep.first_failure);
  }
}

TEST_CASE("first margin vector from empty S") {
  Svm svm(RbfKernel<double>(1.0), 10.0);
  svm.increment(sample1(0.0, -1));
  // the bias-only step puts the first sample on the margin
  REQUIRE(svm.margin_set().size() == 1);
  Eigen::Matrix2d B;  // [[0, y], [y, 1]] with y = -1
  B << 0, -1, -1, 1;
  auto check_first = [&] {
    const Eigen::MatrixXd R = svm.inverse_jacobian();
    REQUIRE(R.rows() == 2);
    CHECK((R * B - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
  };
  check_first();
  svm.deflate_inverse(0, SvmSet::Remaining);
  CHECK(svm.margin_set().empty());
  CHECK(svm.inverse_jacobian().size() == 1);
  CHECK(svm.inverse_jacobian()(0, 0) == 0.0);
  svm.expand_inverse(0);
  check_first();
}

TEST_CASE("deflation matches dense re-inversion") {
  std::mt19937_64 rng(3);
  for (int attempt = 0; attempt < 20; ++attempt) {
    const auto s = oracle::random_dataset(rng, 30, 2);
    Svm svm = train_incremental(s, 2.0, 10.0);
    if (svm.margin_set().size() < 3) continue;
    while (svm.margin_set().size() > 3) svm.deflate_inverse(svm.margin_set().back(), SvmSet::Remaining);
    const auto victim = svm.margin_set()[1];
    svm.deflate_inverse(victim, SvmSet::Remaining);
    const Eigen::MatrixXd dense = svm.bordered_jacobian().inverse();
    CHECK((svm.inverse_jacobian() - dense).cwiseAbs().maxCoeff() < tol_mat(svm));
  }
}

TEST_CASE("expand after deflate restores the inverse") {
  std::mt19937_64 rng(9);
  const auto s = oracle::random_dataset(rng, 40, 3);
  const Svm trained = train_incremental(s, 0.7, 10.0);
  REQUIRE(trained.margin_set().size() >= 2);
  for (auto k : trained.margin_set()) {
    Svm svm = trained;
    const auto before = keyed_inverse(svm);
    svm.deflate_inverse(k, SvmSet::Remaining);
    svm.expand_inverse(k);
    const auto after = keyed_inverse(svm);
    REQUIRE(after.size() == before.size());
    double worst = 0.0;
    for (const auto& [key, v] : before) worst = std::max(worst, std::abs(after.at(key) - v));
    CHECK(worst < tol_mat(svm));
  }
}

TEST_CASE("Rinv stays consistent after every migration") {
  std::mt19937_64 rng(77);
  const auto s = oracle::random_dataset(rng, 50, 4);
  Svm svm(RbfKernel<double>(0.4), 100.0);
  std::size_t checks = 0;
  double worst = 0.0;
  svm.set_step_observer([&](const Svm& m) {
    ++checks;
    const double tm = m.tolerances().matrix_per_margin * std::max<double>(1.0, double(m.margin_set().size()));
    worst = std::max(worst, m.inverse_residual() / tm);
  });
  for (const auto& ls : s) svm.increment(ls);
  CHECK(checks > 0);
  CHECK(worst < 1.0);
}

TEST_CASE("single precision instantiation trains") {
  std::mt19937_64 rng(1);
  const auto s = oracle::random_dataset(rng, 20, 2);
  IncrementalSvm<float> svm(RbfKernel<float>(0.5f), 10.0f, SvmTolerances{1e-3, 1e-4, 1e-2, 1e-6});
  for (const auto& ls : s) svm.increment(ls.x.cast<float>(), ls.y);
  CHECK(svm.size() == 20);
  CHECK(svm.has_both_classes());
}

TEST_CASE("kernel scale search") {
  Rng rng(4);
  std::normal_distribution<double> g(0.0, 0.2);
  std::vector<LabeledSample> blobs;
  for (int i = 0; i < 30; ++i) {
    blobs.push_back({Eigen::Vector2d(g(rng), g(rng)), 1});
    blobs.push_back({Eigen::Vector2d(5.0 + g(rng), 5.0 + g(rng)), -1});
  }
  const auto grid = default_scale_grid(blobs);
  REQUIRE(grid.size() == 7);
  CHECK(grid[4] == doctest::Approx(median_heuristic_scale(blobs)));
  CHECK(grid[6] == doctest::Approx(grid[4] * 4.0));
  CHECK(grid[0] == doctest::Approx(grid[4] / 16.0));
  const auto res = grid_search_scale(blobs, grid, 10.0, rng);
  CHECK(res.accuracy == 1.0);
  CHECK(res.scale == *std::min_element(grid.begin(), grid.end()));

  const std::vector<double> one{0.75};
  CHECK(grid_search_scale(blobs, one, 10.0, rng).scale == 0.75);

  std::vector<LabeledSample> degenerate;
  for (int i = 0; i < 6; ++i) degenerate.push_back({Eigen::Vector2d(1, 1), 1});
  for (int i = 0; i < 6; ++i) degenerate.push_back({Eigen::Vector2d(double(i), 0), -1});
  const auto fb = grid_search_scale(degenerate, grid, 10.0, rng);
  CHECK(fb.used_fallback);
  CHECK(fb.scale == doctest::Approx(median_heuristic_scale(degenerate)));
}

TEST_CASE("median heuristic") {
  const std::vector<LabeledSample> s{sample1(0, 1), sample1(1, -1), sample1(3, 1)};
  // squared distances 1, 9, 4 -> median 4
  CHECK(median_heuristic_scale(s) == doctest::Approx(0.25));
  const std::vector<LabeledSample> same{sample1(2, 1), sample1(2, -1)};
  CHECK(median_heuristic_scale(same) == 1.0);
}

TEST_CASE("state dump") {
  std::mt19937_64 rng(8);
  const Svm svm = train_incremental(oracle::random_dataset(rng, 10, 2), 1.0, 1.0);
  const std::string js = svm_state_json(svm);
  CHECK(js.find("alpha") != std::string::npos);
  CHECK(js.find("\"b\"") != std::string::npos);
}
