#include "dmoea/predictor.hpp"

#include <algorithm>
#include <sstream>

namespace dmoea {

void update_classifier(Svm& svm, const LabeledSampleSet& train, InsertOrder order, Rng& rng) {
  std::vector<LabeledSample> samples = train.labeled();
  if (order == InsertOrder::InterleavedRandom) std::shuffle(samples.begin(), samples.end(), rng);
  for (const auto& s : samples) svm.increment(s);
}

PredictedPopulation filter_candidates(const std::function<bool(const DecisionVector&)>& accept,
                                      std::size_t pop_size, const Bounds& bounds, Rng& rng,
                                      const PredictorConfig& cfg) {
  if (cfg.max_attempts_factor < 1) throw ConfigError("predictor: max_attempts_factor must be >= 1");
  PredictedPopulation out;
  out.members.reserve(pop_size);
  const std::size_t cap = static_cast<std::size_t>(cfg.max_attempts_factor) * pop_size;
  while (out.members.size() < pop_size && out.attempts < cap) {
    DecisionVector x = uniform_in_box(bounds, rng);
    ++out.attempts;
    if (accept(x)) out.members.push_back(std::move(x));
  }
  out.accepted = out.members.size();
  if (out.members.size() < pop_size) {
    out.capped = true;
    std::ostringstream os;
    os << "predictor: attempt cap " << cap << " reached with " << out.accepted << "/" << pop_size
       << " accepted; filling with random candidates";
    log_warning(os.str());
    while (out.members.size() < pop_size) out.members.push_back(uniform_in_box(bounds, rng));
  }
  return out;
}

PredictedPopulation predict_population(Svm& svm, const LabeledSampleSet& train, std::size_t pop_size,
                                       const Bounds& bounds, Rng& rng, const PredictorConfig& cfg) {
  if (pop_size < 1) throw ContractViolation("predict_population: population size must be >= 1");
  update_classifier(svm, train, cfg.insert_order, rng);
  if (!svm.has_both_classes()) {
    log_warning("predictor: classifier has not seen both classes; using a random population");
    PredictedPopulation out;
    out.fallback = true;
    for (std::size_t i = 0; i < pop_size; ++i) out.members.push_back(uniform_in_box(bounds, rng));
    return out;
  }
  return filter_candidates([&](const DecisionVector& x) { return svm.classify(x) > 0; }, pop_size, bounds,
                           rng, cfg);
}

}  // namespace dmoea
