#include "dmoea/posmote.hpp"

#include <algorithm>
#include <numeric>

namespace dmoea {

std::vector<LabeledSample> LabeledSampleSet::labeled() const {
  std::vector<LabeledSample> out;
  out.reserve(size());
  for (const auto& x : positives) out.push_back({x, 1});
  for (const auto& x : negatives) out.push_back({x, -1});
  return out;
}

std::vector<std::size_t> knn_indices(std::span<const DecisionVector> pos_set, std::size_t i, int k) {
  if (i >= pos_set.size()) throw ContractViolation("knn_indices: index out of range");
  if (k < 1) throw ContractViolation("knn_indices: k must be at least 1");
  if (pos_set.size() < 2) return {};
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(pos_set.size() - 1);
  for (std::size_t j = 0; j < pos_set.size(); ++j)
    if (j != i) dist.emplace_back((pos_set[j] - pos_set[i]).squaredNorm(), j);
  const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k), dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_eff), dist.end());
  std::vector<std::size_t> out(k_eff);
  for (std::size_t a = 0; a < k_eff; ++a) out[a] = dist[a].second;
  return out;
}

DecisionVector synthesize_positive(const DecisionVector& base, const DecisionVector& neighbor, double rand,
                                   SmoteDirection direction) {
  if (base.size() != neighbor.size()) throw ContractViolation("synthesize_positive: dimension mismatch");
  if (direction == SmoteDirection::Extrapolate) return base + rand * (base - neighbor);
  return base + rand * (neighbor - base);
}

std::vector<DecisionVector> generate_negatives(std::size_t count, const Bounds& bounds, Rng& rng) {
  std::vector<DecisionVector> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(uniform_in_box(bounds, rng));
  return out;
}

LabeledSampleSet posmote(std::span<const DecisionVector> pos_prev, const PosmoteConfig& cfg, const Bounds& bounds,
                         Rng& rng) {
  if (pos_prev.empty()) throw ContractViolation("posmote: empty Pareto set");
  if (cfg.oversampling_rate < 0) throw ConfigError("posmote: oversampling rate must be >= 0");
  if (cfg.neighbors < 1) throw ConfigError("posmote: neighbor count must be >= 1");

  const std::size_t n = pos_prev.size();
  const auto r = static_cast<std::size_t>(cfg.oversampling_rate);
  LabeledSampleSet out;
  out.positives.reserve(n * (r + 1));
  out.provenance.reserve(n * r);

  if (r > 0) {
    const Eigen::VectorXd jitter = 0.01 * bounds.range();
    for (std::size_t i = 0; i < n; ++i) {
      const auto neighbors = knn_indices(pos_prev, i, cfg.neighbors);
      for (std::size_t s = 0; s < r; ++s) {
        if (neighbors.empty()) {
          // Single-point Pareto set: uniform jitter of +-1% of each range.
          DecisionVector x = pos_prev[i];
          for (Eigen::Index d = 0; d < x.size(); ++d) x[d] += (2.0 * uniform_open01(rng) - 1.0) * jitter[d];
          out.positives.push_back(bounds.clamp(x));
          out.provenance.push_back({i, i, 0.0});
          continue;
        }
        std::uniform_int_distribution<std::size_t> pick(0, neighbors.size() - 1);
        const std::size_t nb = neighbors[pick(rng)];
        const double u = uniform_open01(rng);
        out.positives.push_back(bounds.clamp(synthesize_positive(pos_prev[i], pos_prev[nb], u, cfg.direction)));
        out.provenance.push_back({i, nb, u});
      }
    }
  }
  out.positives.insert(out.positives.end(), pos_prev.begin(), pos_prev.end());
  out.negatives = generate_negatives(out.positives.size(), bounds, rng);
  return out;
}

}  // namespace dmoea
