#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cubepu/cube_index.hpp"
#include "cubepu/geometry.hpp"
#include "cubepu/pu.hpp"
#include "cubepu/rbf.hpp"

namespace cubepu {

enum class TestFunction { f1, f2 };

[[nodiscard]] std::string_view function_tag(TestFunction f);
[[nodiscard]] TestFunction parse_test_function(std::string_view tag);

/// Trivariate Franke-type function; the second exponential uses the linear
/// (9y+1)/10 and (9z+1)/10 terms.
[[nodiscard]] double franke_f1(const Point3& p);
/// (1.25 + cos 5.4y) cos 6z / (6 + 6 (3x - 1)^2)
[[nodiscard]] double franke_f2(const Point3& p);
[[nodiscard]] double test_function(TestFunction f, const Point3& p);

/// Throws std::invalid_argument on length mismatch or empty input.
[[nodiscard]] double rmse(std::span<const double> truth, std::span<const double> approx);
[[nodiscard]] double max_abs_error(std::span<const double> truth, std::span<const double> approx);

/// Vertex lattice {i/(side-1)}^3, x varying fastest. side >= 2.
[[nodiscard]] std::vector<Point3> eval_grid(std::size_t side);

struct ShapeRange {
    double min = 1.0;
    double max = 10.0;
    std::size_t count = 1;

    /// Equispaced values; count == 1 yields {min}.
    [[nodiscard]] std::vector<double> values() const;
};

struct ExperimentSpec {
    std::size_t node_count = 4913;
    std::size_t subdomain_count = 512;
    std::size_t grid_side = 11;
    KernelSpec kernel{KernelFamily::gaussian, 2.7};
    std::optional<ShapeRange> sweep;
    TestFunction function = TestFunction::f1;
    std::optional<std::size_t> m_max;
    SearchMode mode = SearchMode::cube;
    CenterSource centers = CenterSource::halton;
    bool allow_empty = false;
    std::uint64_t halton_start = 1;
};

struct ExperimentResult {
    ExperimentSpec spec;
    double rmse = 0.0;
    double max_abs_error = 0.0;
    double fit_seconds = 0.0;
    double eval_seconds = 0.0;
    double total_seconds = 0.0;
    int q = 1;       ///< ceil(1/radius), the tabulated cell count per axis
    int q_used = 1;  ///< floor(1/radius), the grid actually built
    std::size_t warn_uncovered = 0;
    std::size_t warn_ill_conditioned = 0;
    std::size_t warn_empty = 0;
};

/// Halton nodes sampled from the test function, fitted and evaluated on the grid.
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec);
/// As above with caller-supplied node positions (spec.node_count is ignored).
[[nodiscard]] ExperimentResult run_experiment(const ExperimentSpec& spec, std::span<const Point3> nodes);

struct SweepPoint {
    double shape = 0.0;
    double rmse = 0.0;  ///< +infinity when the fit failed outright
    std::size_t warn_ill_conditioned = 0;
};

struct SweepResult {
    std::vector<SweepPoint> curve;
    double best_shape = 0.0;
    double best_rmse = 0.0;
};

/// One geometry, many kernels: nodes and indices are built once and only the
/// local solves and evaluation rerun per shape value. Requires spec.sweep.
[[nodiscard]] SweepResult sweep_shape(const ExperimentSpec& spec);
[[nodiscard]] SweepResult sweep_shape(const ExperimentSpec& spec, std::span<const Point3> nodes);

}  // namespace cubepu
