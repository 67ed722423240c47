#include "cubepu/bench.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cubepu/errors.hpp"
#include "cubepu/halton.hpp"

namespace cubepu {

std::string_view function_tag(TestFunction f) { return f == TestFunction::f1 ? "f1" : "f2"; }

TestFunction parse_test_function(std::string_view tag) {
    if (tag == "f1") return TestFunction::f1;
    if (tag == "f2") return TestFunction::f2;
    throw std::invalid_argument("unknown test function '" + std::string(tag) + "' (expected f1 or f2)");
}

double franke_f1(const Point3& p) {
    const double x = 9.0 * p.x;
    const double y = 9.0 * p.y;
    const double z = 9.0 * p.z;
    const auto sq = [](double v) { return v * v; };
    return 0.75 * std::exp(-(sq(x - 2.0) + sq(y - 2.0) + sq(z - 2.0)) / 4.0) +
           0.75 * std::exp(-sq(x + 1.0) / 49.0 - (y + 1.0) / 10.0 - (z + 1.0) / 10.0) +
           0.5 * std::exp(-(sq(x - 7.0) + sq(y - 3.0) + sq(z - 5.0)) / 4.0) -
           0.2 * std::exp(-sq(x - 4.0) - sq(y - 7.0) - sq(z - 5.0));
}

double franke_f2(const Point3& p) {
    const double t = 3.0 * p.x - 1.0;
    return (1.25 + std::cos(5.4 * p.y)) * std::cos(6.0 * p.z) / (6.0 + 6.0 * t * t);
}

double test_function(TestFunction f, const Point3& p) {
    return f == TestFunction::f1 ? franke_f1(p) : franke_f2(p);
}

namespace {

void check_lengths(std::span<const double> truth, std::span<const double> approx) {
    if (truth.size() != approx.size())
        throw std::invalid_argument("error metric: length mismatch (" + std::to_string(truth.size()) + " vs " +
                                    std::to_string(approx.size()) + ")");
    if (truth.empty()) throw std::invalid_argument("error metric: empty input");
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<DataSite> sample(std::span<const Point3> positions, TestFunction f) {
    std::vector<DataSite> sites;
    sites.reserve(positions.size());
    for (const auto& p : positions) sites.push_back({p, test_function(f, p)});
    return sites;
}

PUConfig config_for(const ExperimentSpec& spec) {
    PUConfig config;
    config.kernel = spec.kernel;
    config.subdomain_count = spec.subdomain_count;
    config.m_max = spec.m_max;
    config.center_source = spec.centers;
    config.search = spec.mode;
    config.allow_empty = spec.allow_empty;
    return config;
}

std::vector<Point3> halton_nodes(const ExperimentSpec& spec) {
    return halton({.count = spec.node_count, .bases = {2, 3, 5}, .start_index = spec.halton_start});
}

struct GridTruth {
    std::vector<Point3> points;
    std::vector<double> values;
};

GridTruth grid_truth(const ExperimentSpec& spec) {
    GridTruth g{eval_grid(spec.grid_side), {}};
    g.values.reserve(g.points.size());
    for (const auto& p : g.points) g.values.push_back(test_function(spec.function, p));
    return g;
}

}  // namespace

double rmse(std::span<const double> truth, std::span<const double> approx) {
    check_lengths(truth, approx);
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double e = truth[i] - approx[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(truth.size()));
}

double max_abs_error(std::span<const double> truth, std::span<const double> approx) {
    check_lengths(truth, approx);
    double m = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) m = std::max(m, std::abs(truth[i] - approx[i]));
    return m;
}

std::vector<Point3> eval_grid(std::size_t side) {
    if (side < 2) throw std::invalid_argument("eval_grid: side must be >= 2");
    const double h = 1.0 / static_cast<double>(side - 1);
    std::vector<Point3> pts;
    pts.reserve(side * side * side);
    for (std::size_t k = 0; k < side; ++k)
        for (std::size_t j = 0; j < side; ++j)
            for (std::size_t i = 0; i < side; ++i)
                pts.push_back({static_cast<double>(i) * h, static_cast<double>(j) * h, static_cast<double>(k) * h});
    return pts;
}

std::vector<double> ShapeRange::values() const {
    if (count == 0) throw std::invalid_argument("shape range: count must be positive");
    if (!(min > 0.0) || !(max >= min)) throw std::invalid_argument("shape range: need 0 < min <= max");
    std::vector<double> v;
    v.reserve(count);
    if (count == 1) return {min};
    const double step = (max - min) / static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) v.push_back(i + 1 == count ? max : min + static_cast<double>(i) * step);
    return v;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    const auto nodes = halton_nodes(spec);
    return run_experiment(spec, nodes);
}

ExperimentResult run_experiment(const ExperimentSpec& spec, std::span<const Point3> nodes) {
    ExperimentResult result;
    result.spec = spec;
    result.spec.node_count = nodes.size();
    const GridParams grid = grid_from_radius(subdomain_radius(spec.subdomain_count));
    result.q = grid.ceil_q;
    result.q_used = grid.q;

    const GridTruth truth = grid_truth(spec);
    std::vector<DataSite> sites = sample(nodes, spec.function);

    const auto t0 = Clock::now();
    const PUModel model = fit(std::move(sites), config_for(spec));
    result.fit_seconds = seconds_since(t0);

    const auto t1 = Clock::now();
    EvalStats eval_stats;
    const std::vector<double> approx = model.evaluate_batch(truth.points, &eval_stats);
    result.eval_seconds = seconds_since(t1);
    result.total_seconds = result.fit_seconds + result.eval_seconds;

    result.rmse = rmse(truth.values, approx);
    result.max_abs_error = max_abs_error(truth.values, approx);
    result.warn_uncovered = eval_stats.uncovered;
    result.warn_ill_conditioned = model.stats().ill_conditioned;
    result.warn_empty = model.stats().empty_dropped;
    return result;
}

SweepResult sweep_shape(const ExperimentSpec& spec) {
    const auto nodes = halton_nodes(spec);
    return sweep_shape(spec, nodes);
}

SweepResult sweep_shape(const ExperimentSpec& spec, std::span<const Point3> nodes) {
    if (!spec.sweep) throw std::invalid_argument("sweep_shape: no shape range given");
    const GridTruth truth = grid_truth(spec);
    const PUConfig config = config_for(spec);
    const auto geometry = build_geometry(sample(nodes, spec.function), config);

    SweepResult out;
    out.best_rmse = std::numeric_limits<double>::infinity();
    for (double shape : spec.sweep->values()) {
        SweepPoint pt{shape, std::numeric_limits<double>::infinity(), 0};
        try {
            PUConfig c = config;
            c.kernel.shape = shape;
            const PUModel model(std::move(c), geometry);
            pt.warn_ill_conditioned = model.stats().ill_conditioned;
            const auto approx = model.evaluate_batch(truth.points);
            pt.rmse = rmse(truth.values, approx);
            if (!std::isfinite(pt.rmse)) pt.rmse = std::numeric_limits<double>::infinity();
        } catch (const NumericalError&) {
        }
        if (pt.rmse < out.best_rmse || out.curve.empty()) {
            out.best_rmse = pt.rmse;
            out.best_shape = shape;
        }
        out.curve.push_back(pt);
    }
    return out;
}

}  // namespace cubepu
