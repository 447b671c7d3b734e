#pragma once

#include "dmoea/core.hpp"
#include "dmoea/random.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace dmoea {

/// Called after every generation with the current nondominated set.
using GenerationObserver = std::function<void(int generation, const Population& front)>;

/// A population-based static multiobjective optimizer run inside one
/// environment. `initial` must already be evaluated at t. The result is
/// mutually nondominated, evaluated at t, and holds at most initial.size()
/// members.
class StaticOptimizer {
 public:
  virtual ~StaticOptimizer() = default;
  virtual std::string name() const = 0;
  virtual Population run(const DynamicProblem& problem, double t, const Population& initial, int generations,
                         Rng& rng, const GenerationObserver& observer = {}) const = 0;
};

// ---------------------------------------------------------------------------
// NSGA-II

/// Fronts F1, F2, ... as index lists into `pop` (F1 first).
std::vector<std::vector<std::size_t>> fast_nondominated_sort(const Population& pop);

/// Crowding distance of each member of `front` (indices into `pop`), in
/// the same order. Boundary members and fronts of size <= 2 get +inf.
std::vector<double> crowding_distance(const Population& pop, const std::vector<std::size_t>& front);

struct Nsga2Params {
  double crossover_probability = 0.9;
  double sbx_eta = 20.0;
  double mutation_probability = -1.0;  // negative: 1 / D
  double pm_eta = 20.0;
};

/// Simulated binary crossover of two parents within bounds.
std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& a, const DecisionVector& b,
                                                        const Bounds& bounds, double eta, Rng& rng);
/// Polynomial mutation with per-variable probability `p`.
void polynomial_mutation(DecisionVector& x, const Bounds& bounds, double p, double eta, Rng& rng);

class Nsga2 final : public StaticOptimizer {
 public:
  explicit Nsga2(Nsga2Params params = {}) : params_(params) {}
  std::string name() const override { return "nsga2"; }
  Population run(const DynamicProblem& problem, double t, const Population& initial, int generations, Rng& rng,
                 const GenerationObserver& observer = {}) const override;

 private:
  Nsga2Params params_;
};

// ---------------------------------------------------------------------------
// MOPSO

struct MopsoParams {
  std::size_t archive_capacity = 0;  // 0: size of the initial population
  double inertia = 0.4;
  double c1 = 1.0;
  double c2 = 1.0;
  int grid_divisions = 30;
  double mutation_rate = 0.5;
};

class Mopso final : public StaticOptimizer {
 public:
  explicit Mopso(MopsoParams params = {}) : params_(params) {}
  std::string name() const override { return "mopso"; }
  Population run(const DynamicProblem& problem, double t, const Population& initial, int generations, Rng& rng,
                 const GenerationObserver& observer = {}) const override;

 private:
  MopsoParams params_;
};

/// "nsga2" or "mopso"; ConfigError otherwise.
std::unique_ptr<StaticOptimizer> make_optimizer(const std::string& name);

}  // namespace dmoea
