#include "dmoea/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dmoea {

std::vector<std::vector<std::size_t>> fast_nondominated_sort(const Population& pop) {
  const std::size_t n = pop.size();
  std::vector<std::vector<std::size_t>> dominated_by(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(pop[p].objectives, pop[q].objectives)) dominated_by[p].push_back(q);
      else if (dominates(pop[q].objectives, pop[p].objectives)) ++domination_count[p];
    }
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }
  for (std::size_t k = 0; !fronts[k].empty(); ++k) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[k])
      for (std::size_t q : dominated_by[p])
        if (--domination_count[q] == 0) next.push_back(q);
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(const Population& pop, const std::vector<std::size_t>& front) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = front.size();
  std::vector<double> dist(n, 0.0);
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }
  const Eigen::Index m = pop[front[0]].objectives.size();
  std::vector<std::size_t> order(n);
  for (Eigen::Index obj = 0; obj < m; ++obj) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[front[a]].objectives[obj] < pop[front[b]].objectives[obj];
    });
    const double lo = pop[front[order.front()]].objectives[obj];
    const double hi = pop[front[order.back()]].objectives[obj];
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    if (hi - lo <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double span =
          pop[front[order[k + 1]]].objectives[obj] - pop[front[order[k - 1]]].objectives[obj];
      dist[order[k]] += span / (hi - lo);
    }
  }
  return dist;
}

std::pair<DecisionVector, DecisionVector> sbx_crossover(const DecisionVector& a, const DecisionVector& b,
                                                        const Bounds& bounds, double eta, Rng& rng) {
  DecisionVector c1 = a, c2 = b;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    if (unit(rng) > 0.5) continue;
    if (std::abs(a[d] - b[d]) <= 1e-14) continue;
    const double y1 = std::min(a[d], b[d]);
    const double y2 = std::max(a[d], b[d]);
    const double lo = bounds.lower[d], hi = bounds.upper[d];
    const double u = unit(rng);
    auto spread = [&](double beta) {
      const double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
      return u <= 1.0 / alpha ? std::pow(u * alpha, 1.0 / (eta + 1.0))
                              : std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
    };
    const double bq1 = spread(1.0 + 2.0 * (y1 - lo) / (y2 - y1));
    const double bq2 = spread(1.0 + 2.0 * (hi - y2) / (y2 - y1));
    double v1 = std::clamp(0.5 * ((y1 + y2) - bq1 * (y2 - y1)), lo, hi);
    double v2 = std::clamp(0.5 * ((y1 + y2) + bq2 * (y2 - y1)), lo, hi);
    if (unit(rng) <= 0.5) std::swap(v1, v2);
    c1[d] = v1;
    c2[d] = v2;
  }
  return {std::move(c1), std::move(c2)};
}

void polynomial_mutation(DecisionVector& x, const Bounds& bounds, double p, double eta, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    if (unit(rng) > p) continue;
    const double lo = bounds.lower[d], hi = bounds.upper[d];
    if (hi <= lo) continue;
    const double y = x[d];
    const double d1 = (y - lo) / (hi - lo);
    const double d2 = (hi - y) / (hi - lo);
    const double u = unit(rng);
    const double power = 1.0 / (eta + 1.0);
    double deltaq;
    if (u <= 0.5) {
      const double val = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, eta + 1.0);
      deltaq = std::pow(val, power) - 1.0;
    } else {
      const double val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, eta + 1.0);
      deltaq = 1.0 - std::pow(val, power);
    }
    x[d] = std::clamp(y + deltaq * (hi - lo), lo, hi);
  }
}

namespace {

struct Ranked {
  std::vector<int> rank;
  std::vector<double> crowding;
};

Ranked rank_population(const Population& pop) {
  Ranked r{std::vector<int>(pop.size()), std::vector<double>(pop.size())};
  const auto fronts = fast_nondominated_sort(pop);
  for (std::size_t k = 0; k < fronts.size(); ++k) {
    const auto cd = crowding_distance(pop, fronts[k]);
    for (std::size_t a = 0; a < fronts[k].size(); ++a) {
      r.rank[fronts[k][a]] = static_cast<int>(k);
      r.crowding[fronts[k][a]] = cd[a];
    }
  }
  return r;
}

}  // namespace

Population Nsga2::run(const DynamicProblem& problem, double t, const Population& initial, int generations, Rng& rng,
                      const GenerationObserver& observer) const {
  if (initial.empty()) throw ContractViolation("nsga2: empty initial population");
  const Bounds& bounds = problem.bounds();
  const std::size_t n = initial.size();
  const double pm = params_.mutation_probability < 0.0 ? 1.0 / static_cast<double>(problem.num_variables())
                                                       : params_.mutation_probability;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);

  Population parents = initial;
  Ranked ranked = rank_population(parents);
  auto tournament = [&]() -> const Individual& {
    const std::size_t a = pick(rng), b = pick(rng);
    if (ranked.rank[a] != ranked.rank[b]) return parents[ranked.rank[a] < ranked.rank[b] ? a : b];
    if (ranked.crowding[a] != ranked.crowding[b]) return parents[ranked.crowding[a] > ranked.crowding[b] ? a : b];
    return parents[unit(rng) <= 0.5 ? a : b];
  };

  for (int gen = 0; gen < generations; ++gen) {
    Population offspring;
    offspring.reserve(n);
    while (offspring.size() < n) {
      const Individual& p1 = tournament();
      const Individual& p2 = tournament();
      DecisionVector c1 = p1.decision, c2 = p2.decision;
      if (unit(rng) <= params_.crossover_probability)
        std::tie(c1, c2) = sbx_crossover(p1.decision, p2.decision, bounds, params_.sbx_eta, rng);
      polynomial_mutation(c1, bounds, pm, params_.pm_eta, rng);
      polynomial_mutation(c2, bounds, pm, params_.pm_eta, rng);
      offspring.push_back(make_individual(problem, std::move(c1), t));
      if (offspring.size() < n) offspring.push_back(make_individual(problem, std::move(c2), t));
    }

    Population merged = std::move(parents);
    merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                  std::make_move_iterator(offspring.end()));
    const auto fronts = fast_nondominated_sort(merged);
    Population next;
    next.reserve(n);
    for (const auto& front : fronts) {
      if (next.size() + front.size() <= n) {
        for (std::size_t i : front) next.push_back(merged[i]);
        continue;
      }
      const auto cd = crowding_distance(merged, front);
      std::vector<std::size_t> order(front.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
      for (std::size_t a = 0; next.size() < n; ++a) next.push_back(merged[front[order[a]]]);
      break;
    }
    parents = std::move(next);
    ranked = rank_population(parents);
    if (observer) observer(gen + 1, nondominated_filter(parents));
  }
  return nondominated_filter(parents);
}

std::unique_ptr<StaticOptimizer> make_optimizer(const std::string& name) {
  if (name == "nsga2") return std::make_unique<Nsga2>();
  if (name == "mopso") return std::make_unique<Mopso>();
  throw ConfigError("unknown optimizer '" + name + "' (expected nsga2 or mopso)");
}

}  // namespace dmoea
