#pragma once

#include <array>
#include <cstdint>

#include "equizero/multi_index.hpp"

namespace equizero {

// Philox4x32-10 counter-based generator.  Draws are keyed by
// (seed, trial, index), so parallel trials are schedule-independent and
// every run is reproducible from the config seed alone.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key, std::uint64_t counter_hi,
                                        std::uint64_t counter_lo);

struct GaussianStream {
  std::uint64_t seed = 0;

  // standard complex Gaussian: E c = 0, E|c|^2 = 1
  cplx complex_gaussian(std::uint64_t trial, std::uint64_t index) const;

  // uniform in [0,1)
  double uniform(std::uint64_t trial, std::uint64_t index) const;
};

}  // namespace equizero
