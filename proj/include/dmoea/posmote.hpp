#pragma once

#include "dmoea/core.hpp"
#include "dmoea/isvm.hpp"
#include "dmoea/random.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace dmoea {

/// Interpolation direction for synthetic positives.
///  - Extrapolate: base + rand * (base - neighbor)   (away from the neighbor)
///  - Classic:     base + rand * (neighbor - base)   (on the segment, classic SMOTE)
enum class SmoteDirection { Extrapolate, Classic };

struct PosmoteConfig {
  int oversampling_rate = 5;  // r
  int neighbors = 5;          // k
  SmoteDirection direction = SmoteDirection::Extrapolate;
};

/// Where a synthetic positive came from.
struct SyntheticProvenance {
  std::size_t base;
  std::size_t neighbor;  // equals base for the jittered single-point case
  double rand;
};

struct LabeledSampleSet {
  std::vector<DecisionVector> positives;  // n*r synthetics followed by the n originals
  std::vector<DecisionVector> negatives;
  std::vector<SyntheticProvenance> provenance;  // one per synthetic positive, same order

  std::size_t size() const noexcept { return positives.size() + negatives.size(); }
  /// All samples as (x, +-1) pairs, positives first.
  std::vector<LabeledSample> labeled() const;
};

/// k_eff = min(k, n - 1) nearest neighbors of pos_set[i] by Euclidean
/// distance, excluding i itself; ties go to the lower index.
std::vector<std::size_t> knn_indices(std::span<const DecisionVector> pos_set, std::size_t i, int k);

/// One synthetic positive, before clamping.
DecisionVector synthesize_positive(const DecisionVector& base, const DecisionVector& neighbor, double rand,
                                   SmoteDirection direction = SmoteDirection::Extrapolate);

/// `count` independent uniform draws from the box.
std::vector<DecisionVector> generate_negatives(std::size_t count, const Bounds& bounds, Rng& rng);

/// Balanced training set from the previous Pareto set: r synthetic positives
/// per original, the originals themselves, and as many uniform negatives.
LabeledSampleSet posmote(std::span<const DecisionVector> pos_prev, const PosmoteConfig& cfg,
                         const Bounds& bounds, Rng& rng);

}  // namespace dmoea
