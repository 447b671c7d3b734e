#pragma once

#include "dmoea/core.hpp"

#include <cstdint>
#include <random>

namespace dmoea {

using Rng = std::mt19937_64;

/// Named sub-streams derived from one master seed per run.
enum class Stream : std::uint32_t {
  Initial = 1,
  Optimizer = 2,
  Posmote = 3,
  Predictor = 4,
  ScaleSearch = 5,
};

/// Independent generator for (master seed, stream, environment index).
Rng split_stream(std::uint64_t master_seed, Stream stream, std::uint64_t index = 0);

/// Uniform draw in (0, 1), never returning exactly 0.
double uniform_open01(Rng& rng);

DecisionVector uniform_in_box(const Bounds& bounds, Rng& rng);

}  // namespace dmoea
