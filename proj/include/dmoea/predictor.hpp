#pragma once

#include "dmoea/core.hpp"
#include "dmoea/isvm.hpp"
#include "dmoea/posmote.hpp"
#include "dmoea/random.hpp"

#include <functional>
#include <vector>

namespace dmoea {

enum class InsertOrder { InterleavedRandom, PositivesFirst };

struct PredictorConfig {
  int max_attempts_factor = 100;  // attempt cap = factor * N_p
  InsertOrder insert_order = InsertOrder::InterleavedRandom;
};

struct PredictedPopulation {
  std::vector<DecisionVector> members;  // accepted candidates first, then fillers
  std::size_t attempts = 0;
  std::size_t accepted = 0;
  bool capped = false;    // attempt cap hit, remainder filled at random
  bool fallback = false;  // classifier unusable, whole population random
};

/// Feeds every sample of `train` to the classifier in the configured order.
void update_classifier(Svm& svm, const LabeledSampleSet& train, InsertOrder order, Rng& rng);

/// Rejection filter: uniform candidates are kept when `accept` says so,
/// until `pop_size` are kept or the attempt cap is reached.
PredictedPopulation filter_candidates(const std::function<bool(const DecisionVector&)>& accept,
                                      std::size_t pop_size, const Bounds& bounds, Rng& rng,
                                      const PredictorConfig& cfg);

/// Updates `svm` with `train` and predicts an initial population of
/// `pop_size` decision vectors. Consumes no objective evaluations.
PredictedPopulation predict_population(Svm& svm, const LabeledSampleSet& train, std::size_t pop_size,
                                       const Bounds& bounds, Rng& rng, const PredictorConfig& cfg = {});

}  // namespace dmoea
