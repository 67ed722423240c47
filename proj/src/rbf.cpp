#include "cubepu/rbf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cubepu/errors.hpp"

namespace cubepu {

std::string_view kernel_tag(KernelFamily family) {
    switch (family) {
        case KernelFamily::gaussian: return "g";
        case KernelFamily::matern_c4: return "m4";
        case KernelFamily::wendland_c4: return "w4";
    }
    return "?";
}

KernelFamily parse_kernel_family(std::string_view tag) {
    std::string lower(tag);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "g") return KernelFamily::gaussian;
    if (lower == "m4") return KernelFamily::matern_c4;
    if (lower == "w4") return KernelFamily::wendland_c4;
    throw std::invalid_argument("unknown kernel '" + std::string(tag) + "' (expected g, m4 or w4)");
}

double kernel_value(const KernelSpec& spec, double r) {
    const double s = spec.shape;
    switch (spec.family) {
        case KernelFamily::gaussian:
            return std::exp(-s * s * r * r);
        case KernelFamily::matern_c4: {
            const double t = s * r;
            return std::exp(-t) * (t * t + 3.0 * t + 3.0);
        }
        case KernelFamily::wendland_c4: {
            const double t = s * r;
            if (t >= 1.0) return 0.0;
            const double a = 1.0 - t;
            const double a2 = a * a;
            return a2 * a2 * a2 * (35.0 * t * t + 18.0 * t + 3.0);
        }
    }
    return 0.0;
}

Eigen::MatrixXd assemble(const LocalSystem& system) {
    const auto n = static_cast<Eigen::Index>(system.size());
    Eigen::MatrixXd a(n, n);
    const double diag = kernel_value(system.kernel, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        a(i, i) = diag;
        for (Eigen::Index k = i + 1; k < n; ++k) {
            const double v = kernel_value(system.kernel,
                                          distance(system.positions[static_cast<std::size_t>(i)],
                                                   system.positions[static_cast<std::size_t>(k)]));
            a(i, k) = v;
            a(k, i) = v;
        }
    }
    return a;
}

namespace {

// f - a c, accumulated in extended precision.
Eigen::VectorXd residual_ext(const Eigen::MatrixXd& a, const Eigen::VectorXd& c, const Eigen::VectorXd& f) {
    Eigen::VectorXd r(f.size());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        long double sum = f(i);
        for (Eigen::Index k = 0; k < a.cols(); ++k) sum -= static_cast<long double>(a(i, k)) * c(k);
        r(i) = static_cast<double>(sum);
    }
    return r;
}

template <typename Factorization>
Eigen::VectorXd refine(const Eigen::MatrixXd& a, const Factorization& fact, const Eigen::VectorXd& f,
                       Eigen::VectorXd c) {
    const double target = 1e-13 * (1.0 + f.lpNorm<Eigen::Infinity>());
    Eigen::VectorXd r = residual_ext(a, c, f);
    double res = r.lpNorm<Eigen::Infinity>();
    for (int iter = 0; iter < 4 && res > target; ++iter) {
        Eigen::VectorXd next = c + fact.solve(r);
        Eigen::VectorXd next_r = residual_ext(a, next, f);
        const double next_res = next_r.lpNorm<Eigen::Infinity>();
        if (!(next_res < res)) break;
        c = std::move(next);
        r = std::move(next_r);
        res = next_res;
    }
    return c;
}

}  // namespace

LocalCoefficients solve_local(const LocalSystem& system, std::size_t subdomain) {
    if (system.positions.size() != system.values.size())
        throw std::invalid_argument("solve_local: positions and values differ in length");
    const auto n = static_cast<Eigen::Index>(system.size());
    LocalCoefficients out;
    if (n == 0) return out;

    const Eigen::MatrixXd a = assemble(system);
    const Eigen::Map<const Eigen::VectorXd> f(system.values.data(), n);

    Eigen::VectorXd c;
    double rcond = 0.0;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() == Eigen::Success) {
        c = refine(a, llt, f, llt.solve(f));
        rcond = llt.rcond();
    }
    if (c.size() == 0 || !c.allFinite()) {
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
        const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
        if (pivots.minCoeff() == 0.0)
            throw SingularSystemError("singular local system in subdomain " + std::to_string(subdomain) +
                                          " (" + std::to_string(n) + " nodes)",
                                      subdomain, static_cast<std::size_t>(n));
        c = refine(a, lu, f, lu.solve(f));
        rcond = lu.rcond();
        out.used_fallback = true;
    }
    if (!c.allFinite())
        throw SingularSystemError("non-finite solution in subdomain " + std::to_string(subdomain) + " (" +
                                      std::to_string(n) + " nodes)",
                                  subdomain, static_cast<std::size_t>(n));

    out.coeffs.assign(c.data(), c.data() + n);
    out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    return out;
}

double evaluate_local(const LocalSystem& system, const LocalCoefficients& coeffs, const Point3& p) {
    double sum = 0.0;
    for (std::size_t k = 0; k < coeffs.coeffs.size(); ++k)
        sum += coeffs.coeffs[k] * kernel_value(system.kernel, distance(p, system.positions[k]));
    return sum;
}

}  // namespace cubepu
