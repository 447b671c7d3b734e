#include "dmoea/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dmoea {

namespace {

/// Adaptive hypercube grid over the archive's objective ranges.
class ArchiveGrid {
 public:
  ArchiveGrid(const Population& archive, int divisions) : divisions_(divisions) {
    const Eigen::Index m = archive.front().objectives.size();
    lo_ = archive.front().objectives;
    hi_ = archive.front().objectives;
    for (const auto& a : archive) {
      lo_ = lo_.cwiseMin(a.objectives);
      hi_ = hi_.cwiseMax(a.objectives);
    }
    cells_.reserve(archive.size());
    for (const auto& a : archive) {
      long key = 0;
      for (Eigen::Index d = 0; d < m; ++d) {
        const double width = hi_[d] - lo_[d];
        int c = width > 0.0 ? static_cast<int>((a.objectives[d] - lo_[d]) / width * divisions_) : 0;
        c = std::clamp(c, 0, divisions_ - 1);
        key = key * divisions_ + c;
      }
      cells_.push_back(key);
      ++counts_[key];
    }
  }

  long cell(std::size_t i) const { return cells_[i]; }
  std::size_t count(long key) const { return counts_.at(key); }
  const std::map<long, std::size_t>& counts() const { return counts_; }

 private:
  int divisions_;
  Eigen::VectorXd lo_, hi_;
  std::vector<long> cells_;
  std::map<long, std::size_t> counts_;
};

/// Roulette wheel over occupied cells with fitness 10 / count, then a
/// uniform member of the chosen cell.
std::size_t select_leader(const Population& archive, const ArchiveGrid& grid, Rng& rng) {
  std::vector<long> keys;
  std::vector<double> weights;
  for (const auto& [key, count] : grid.counts()) {
    keys.push_back(key);
    weights.push_back(10.0 / static_cast<double>(count));
  }
  std::discrete_distribution<std::size_t> wheel(weights.begin(), weights.end());
  const long key = keys[wheel(rng)];
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < archive.size(); ++i)
    if (grid.cell(i) == key) members.push_back(i);
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  return members[pick(rng)];
}

void truncate_archive(Population& archive, std::size_t capacity, int divisions, Rng& rng) {
  while (archive.size() > capacity) {
    const ArchiveGrid grid(archive, divisions);
    long crowded = 0;
    std::size_t most = 0;
    for (const auto& [key, count] : grid.counts())
      if (count > most) {
        most = count;
        crowded = key;
      }
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < archive.size(); ++i)
      if (grid.cell(i) == crowded) members.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
    archive.erase(archive.begin() + static_cast<std::ptrdiff_t>(members[pick(rng)]));
  }
}

/// Inserts `cand` if no member dominates it, evicting members it dominates.
void archive_insert(Population& archive, const Individual& cand) {
  for (const auto& a : archive)
    if (dominates(a.objectives, cand.objectives)) return;
  std::erase_if(archive, [&](const Individual& a) { return dominates(cand.objectives, a.objectives); });
  archive.push_back(cand);
}

}  // namespace

Population Mopso::run(const DynamicProblem& problem, double t, const Population& initial, int generations, Rng& rng,
                      const GenerationObserver& observer) const {
  if (initial.empty()) throw ContractViolation("mopso: empty initial population");
  const Bounds& bounds = problem.bounds();
  const std::size_t capacity = params_.archive_capacity ? params_.archive_capacity : initial.size();
  const Eigen::Index dim = problem.num_variables();
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Population particles = initial;
  Population best = initial;
  std::vector<Eigen::VectorXd> velocity(particles.size(), Eigen::VectorXd::Zero(dim));
  Population archive = nondominated_filter(initial);
  truncate_archive(archive, capacity, params_.grid_divisions, rng);

  const double mutation_horizon = static_cast<double>(generations) * params_.mutation_rate;
  for (int gen = 0; gen < generations; ++gen) {
    const ArchiveGrid grid(archive, params_.grid_divisions);
    for (std::size_t i = 0; i < particles.size(); ++i) {
      const DecisionVector& leader = archive[select_leader(archive, grid, rng)].decision;
      DecisionVector x = particles[i].decision;
      for (Eigen::Index d = 0; d < dim; ++d) {
        const double r1 = unit(rng), r2 = unit(rng);
        velocity[i][d] = params_.inertia * velocity[i][d] + params_.c1 * r1 * (best[i].decision[d] - x[d]) +
                         params_.c2 * r2 * (leader[d] - x[d]);
        x[d] += velocity[i][d];
        if (x[d] < bounds.lower[d] || x[d] > bounds.upper[d]) {
          x[d] = std::clamp(x[d], bounds.lower[d], bounds.upper[d]);
          velocity[i][d] = -velocity[i][d];
        }
      }
      // Shrinking-range mutation active for the first mutation_rate share of the run.
      if (static_cast<double>(gen) < mutation_horizon) {
        const double strength = std::pow(1.0 - static_cast<double>(gen) / mutation_horizon, 1.5);
        if (unit(rng) < strength) {
          std::uniform_int_distribution<Eigen::Index> which(0, dim - 1);
          const Eigen::Index d = which(rng);
          const double range = (bounds.upper[d] - bounds.lower[d]) * strength;
          const double lo = std::max(bounds.lower[d], x[d] - range);
          const double hi = std::min(bounds.upper[d], x[d] + range);
          x[d] = lo + unit(rng) * (hi - lo);
        }
      }
      particles[i] = make_individual(problem, std::move(x), t);
    }

    for (std::size_t i = 0; i < particles.size(); ++i) {
      archive_insert(archive, particles[i]);
      if (dominates(particles[i].objectives, best[i].objectives)) best[i] = particles[i];
      else if (!dominates(best[i].objectives, particles[i].objectives) && unit(rng) < 0.5) best[i] = particles[i];
    }
    truncate_archive(archive, capacity, params_.grid_divisions, rng);
    if (observer) observer(gen + 1, archive);
  }
  return archive;
}

}  // namespace dmoea
