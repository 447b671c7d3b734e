#pragma once

#include "dmoea/core.hpp"

#include <span>
#include <vector>

namespace dmoea {

/// Mean distance from each reference point to its nearest approximation point.
double igd(std::span<const ObjectiveVector> pof_star, std::span<const ObjectiveVector> pof_e);

/// Lebesgue measure of the region dominated by `pof_e` and bounded by `rp`
/// (M = 2 or 3). Points not strictly better than rp in every objective add
/// nothing.
double hv(std::span<const ObjectiveVector> pof_e, const ObjectiveVector& rp);

/// Componentwise maximum of a sampled true front.
ObjectiveVector reference_point(std::span<const ObjectiveVector> pof_star);

struct MetricSample {
  double t = 0.0;
  double igd = 0.0;
  double hv = 0.0;
};

struct MetricTrace {
  std::vector<MetricSample> per_change;

  double migd() const;
  double mhv() const;
};

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1); 0 for fewer than two values.
double stddev(std::span<const double> values);

/// Two-sided Wilcoxon rank-sum (Mann-Whitney U) p-value, normal
/// approximation with tie correction. Intended for |a|, |b| >= 8.
double ranksum_test(std::span<const double> a, std::span<const double> b);

/// Mann-Whitney U statistic of `a` (ties count one half).
double mann_whitney_u(std::span<const double> a, std::span<const double> b);

}  // namespace dmoea
