#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "cubepu/geometry.hpp"

namespace cubepu {

enum class KernelFamily {
    gaussian,     ///< exp(-a^2 r^2), C-infinity
    matern_c4,    ///< exp(-e r)(e^2 r^2 + 3 e r + 3), unnormalized, phi(0) = 3
    wendland_c4,  ///< (1 - d r)_+^6 (35 d^2 r^2 + 18 d r + 3), support radius 1/d
};

struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double shape = 1.0;
};

[[nodiscard]] std::string_view kernel_tag(KernelFamily family);  // "g", "m4", "w4"
/// Accepts g|m4|w4 (case-insensitive); throws std::invalid_argument otherwise.
[[nodiscard]] KernelFamily parse_kernel_family(std::string_view tag);

[[nodiscard]] double kernel_value(const KernelSpec& spec, double r);

/// Condition estimates at or above this value count as ill-conditioned.
inline constexpr double kIllConditioned = 1e12;

/// Non-owning view of the nodes and data values of one subdomain.
struct LocalSystem {
    std::span<const Point3> positions;
    std::span<const double> values;
    KernelSpec kernel;

    [[nodiscard]] std::size_t size() const noexcept { return positions.size(); }
};

struct LocalCoefficients {
    std::vector<double> coeffs;
    double condition_estimate = 0.0;  ///< 1-norm estimate, diagnostic only
    bool used_fallback = false;       ///< Cholesky failed and LU was used
};

/// Interpolation matrix A(i,k) = phi(|x_i - x_k|).
[[nodiscard]] Eigen::MatrixXd assemble(const LocalSystem& system);

/// Solves A c = f, Cholesky first and partial-pivot LU when the matrix is not
/// numerically positive definite. Throws SingularSystemError (tagged with
/// `subdomain`) if neither yields a finite solution.
[[nodiscard]] LocalCoefficients solve_local(const LocalSystem& system, std::size_t subdomain = 0);

/// R(p) = sum_k c_k phi(|p - x_k|).
[[nodiscard]] double evaluate_local(const LocalSystem& system, const LocalCoefficients& coeffs,
                                    const Point3& p);

}  // namespace cubepu
