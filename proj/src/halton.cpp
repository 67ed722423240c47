#include "cubepu/halton.hpp"

#include <numeric>
#include <stdexcept>

namespace cubepu {

double radical_inverse(std::uint64_t index, std::uint32_t base) {
    if (base < 2) throw std::invalid_argument("radical_inverse: base must be >= 2");
    const double inv_base = 1.0 / static_cast<double>(base);
    double scale = inv_base;
    double result = 0.0;
    while (index > 0) {
        result += static_cast<double>(index % base) * scale;
        index /= base;
        scale *= inv_base;
    }
    return result;
}

std::vector<Point3> halton(const HaltonConfig& config) {
    if (config.count == 0) throw std::invalid_argument("halton: count must be positive");
    const auto& b = config.bases;
    for (std::size_t i = 0; i < 3; ++i) {
        if (b[i] < 2) throw std::invalid_argument("halton: bases must be >= 2");
        for (std::size_t j = i + 1; j < 3; ++j)
            if (std::gcd(b[i], b[j]) != 1)
                throw std::invalid_argument("halton: bases must be pairwise coprime");
    }

    std::vector<Point3> points;
    points.reserve(config.count);
    for (std::size_t i = 0; i < config.count; ++i) {
        const std::uint64_t k = config.start_index + i;
        points.push_back({radical_inverse(k, b[0]), radical_inverse(k, b[1]),
                          radical_inverse(k, b[2])});
    }
    return points;
}

}  // namespace cubepu
