#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cubepu/geometry.hpp"

namespace cubepu {

struct HaltonConfig {
    std::size_t count = 1;
    std::array<std::uint32_t, 3> bases{2, 3, 5};
    std::uint64_t start_index = 1;
};

/// Digit-reversed base-`base` fraction of `index`, in [0,1).
[[nodiscard]] double radical_inverse(std::uint64_t index, std::uint32_t base);

/// Point i is the radical inverse of (start_index + i) in each of the three bases.
/// Throws std::invalid_argument for count == 0 or bases that are < 2 or not
/// pairwise coprime.
[[nodiscard]] std::vector<Point3> halton(const HaltonConfig& config);

}  // namespace cubepu
