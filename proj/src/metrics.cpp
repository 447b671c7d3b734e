#include "dmoea/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dmoea {

double igd(std::span<const ObjectiveVector> pof_star, std::span<const ObjectiveVector> pof_e) {
  if (pof_star.empty()) throw ContractViolation("igd: empty reference front");
  if (pof_e.empty()) throw ContractViolation("igd: empty approximation front");
  double total = 0.0;
  for (const auto& p : pof_star) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : pof_e) {
      if (q.size() != p.size()) throw ContractViolation("igd: objective count mismatch");
      best = std::min(best, (p - q).squaredNorm());
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(pof_star.size());
}

namespace {

struct Point2 {
  double x, y;
};

// Area dominated by `pts` inside [.., rx] x [.., ry]; all points strictly inside.
double sweep_2d(std::vector<Point2> pts, double rx, double ry) {
  std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  double area = 0.0;
  double floor_y = ry;
  for (const auto& p : pts) {
    if (p.y < floor_y) {
      area += (rx - p.x) * (floor_y - p.y);
      floor_y = p.y;
    }
  }
  return area;
}

}  // namespace

double hv(std::span<const ObjectiveVector> pof_e, const ObjectiveVector& rp) {
  const Eigen::Index m = rp.size();
  if (m != 2 && m != 3) throw UnsupportedOperation("hv: only 2 or 3 objectives are supported");
  std::vector<ObjectiveVector> inside;
  for (const auto& p : pof_e) {
    if (p.size() != m) throw ContractViolation("hv: objective count mismatch");
    if ((p.array() < rp.array()).all()) inside.push_back(p);
  }
  if (inside.empty()) return 0.0;

  if (m == 2) {
    std::vector<Point2> pts;
    for (const auto& p : inside) pts.push_back({p[0], p[1]});
    return sweep_2d(std::move(pts), rp[0], rp[1]);
  }

  // Slice along the third objective: between consecutive z levels the
  // dominated cross-section is the 2-D area of the points already passed.
  std::sort(inside.begin(), inside.end(), [](const ObjectiveVector& a, const ObjectiveVector& b) { return a[2] < b[2]; });
  double volume = 0.0;
  std::vector<Point2> active;
  for (std::size_t k = 0; k < inside.size(); ++k) {
    active.push_back({inside[k][0], inside[k][1]});
    const double z_next = k + 1 < inside.size() ? inside[k + 1][2] : rp[2];
    const double depth = z_next - inside[k][2];
    if (depth > 0.0) volume += depth * sweep_2d(active, rp[0], rp[1]);
  }
  return volume;
}

ObjectiveVector reference_point(std::span<const ObjectiveVector> pof_star) {
  if (pof_star.empty()) throw ContractViolation("reference_point: empty front");
  ObjectiveVector rp = pof_star.front();
  for (const auto& p : pof_star) rp = rp.cwiseMax(p);
  return rp;
}

double MetricTrace::migd() const {
  if (per_change.empty()) throw ContractViolation("migd: empty trace");
  double s = 0.0;
  for (const auto& c : per_change) s += c.igd;
  return s / static_cast<double>(per_change.size());
}

double MetricTrace::mhv() const {
  if (per_change.empty()) throw ContractViolation("mhv: empty trace");
  double s = 0.0;
  for (const auto& c : per_change) s += c.hv;
  return s / static_cast<double>(per_change.size());
}

double mean(std::span<const double> values) {
  if (values.empty()) throw ContractViolation("mean: empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double mu = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mu) * (v - mu);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double mann_whitney_u(std::span<const double> a, std::span<const double> b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
  return u;
}

double ranksum_test(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ContractViolation("ranksum_test: empty sample");
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;

  std::vector<std::pair<double, int>> all;
  for (double x : a) all.emplace_back(x, 0);
  for (double x : b) all.emplace_back(x, 1);
  std::sort(all.begin(), all.end(), [](const auto& l, const auto& r) { return l.first < r.first; });

  double rank_sum_a = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    const double ties = static_cast<double>(j - i);
    tie_term += ties * ties * ties - ties;
    for (std::size_t k = i; k < j; ++k)
      if (all[k].second == 0) rank_sum_a += avg_rank;
    i = j;
  }
  const double u = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (!(var > 0.0)) return 1.0;
  const double z = (u - mu) / std::sqrt(var);
  return std::min(1.0, std::erfc(std::abs(z) / std::sqrt(2.0)));
}

}  // namespace dmoea
