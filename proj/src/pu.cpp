#include "cubepu/pu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cubepu/errors.hpp"
#include "cubepu/halton.hpp"

namespace cubepu {

namespace {

constexpr double kCoincident = 1e-14;

std::size_t lattice_side(std::size_t d) {
    std::size_t m = 1;
    while (m * m * m < d) ++m;
    return m;
}

std::vector<std::size_t> nearest_subset(std::span<const DataSite> nodes, const Point3& center,
                                        std::vector<std::size_t> ids, std::size_t keep) {
    if (ids.size() <= keep) return ids;
    auto closer = [&](std::size_t a, std::size_t b) {
        const double da = squared_distance(nodes[a].position, center);
        const double db = squared_distance(nodes[b].position, center);
        return da < db || (da == db && a < b);
    };
    std::nth_element(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(), closer);
    ids.resize(keep);
    std::sort(ids.begin(), ids.end());
    return ids;
}

}  // namespace

double subdomain_radius(std::size_t d) {
    if (d == 0) throw std::invalid_argument("subdomain_radius: d must be positive");
    return std::sqrt(2.0) / std::cbrt(static_cast<double>(d));
}

std::vector<Point3> make_centers(const PUConfig& config) {
    const std::size_t d = config.subdomain_count;
    switch (config.center_source) {
        case CenterSource::halton:
            return halton({.count = d, .bases = {7, 11, 13}, .start_index = 1});
        case CenterSource::grid: {
            const std::size_t m = lattice_side(d);
            const double h = 1.0 / static_cast<double>(m);
            std::vector<Point3> centers;
            centers.reserve(d);
            for (std::size_t w = 0; w < m && centers.size() < d; ++w)
                for (std::size_t v = 0; v < m && centers.size() < d; ++v)
                    for (std::size_t u = 0; u < m && centers.size() < d; ++u)
                        centers.push_back({(static_cast<double>(u) + 0.5) * h, (static_cast<double>(v) + 0.5) * h,
                                           (static_cast<double>(w) + 0.5) * h});
            return centers;
        }
        case CenterSource::explicit_list:
            return config.centers;
    }
    return {};
}

std::shared_ptr<const PUGeometry> build_geometry(std::vector<DataSite> nodes, const PUConfig& config) {
    if (nodes.empty()) throw std::invalid_argument("fit: no nodes");
    if (config.subdomain_count == 0) throw std::invalid_argument("fit: subdomain count must be positive");
    if (config.m_max && *config.m_max == 0) throw std::invalid_argument("fit: m_max must be positive");

    auto geo = std::make_shared<PUGeometry>();
    geo->radius = subdomain_radius(config.subdomain_count);

    std::vector<Point3> positions;
    positions.reserve(nodes.size());
    for (const auto& n : nodes) {
        if (!std::isfinite(n.value))
            throw std::invalid_argument("fit: non-finite data value at " + to_string(n.position));
        positions.push_back(n.position);
    }
    geo->nodes = std::move(nodes);
    geo->node_index = PointSearch(std::move(positions), geo->radius, config.search);

    const std::vector<Point3> centers = make_centers(config);
    if (centers.empty()) throw std::invalid_argument("fit: no subdomain centers");
    std::vector<Point3> kept_centers;
    for (std::size_t j = 0; j < centers.size(); ++j) {
        const Point3& c = centers[j];
        std::vector<std::size_t> ids = geo->node_index.radius_query(c, geo->radius);
        if (ids.empty()) {
            if (!config.allow_empty)
                throw EmptySubdomainError("subdomain " + std::to_string(j) + " centered at " + to_string(c) +
                                              " captures no nodes (too many subdomains for the node count)",
                                          j, c);
            ++geo->empty_dropped;
            continue;
        }
        if (config.m_max) ids = nearest_subset(geo->nodes, c, std::move(ids), *config.m_max);

        Subdomain s;
        s.center = c;
        s.radius = geo->radius;
        s.positions.reserve(ids.size());
        s.values.reserve(ids.size());
        for (std::size_t id : ids) {
            s.positions.push_back(geo->nodes[id].position);
            s.values.push_back(geo->nodes[id].value);
        }
        s.node_ids = std::move(ids);
        geo->subdomains.push_back(std::move(s));
        kept_centers.push_back(c);
    }
    geo->center_index = PointSearch(std::move(kept_centers), geo->radius, config.search);
    return geo;
}

PUModel::PUModel(PUConfig config, std::shared_ptr<const PUGeometry> geometry)
    : config_(std::move(config)), geometry_(std::move(geometry)) {
    const auto& subs = geometry_->subdomains;
    coefficients_.reserve(subs.size());
    stats_.empty_dropped = geometry_->empty_dropped;
    stats_.min_nodes = subs.empty() ? 0 : std::numeric_limits<std::size_t>::max();
    std::size_t total = 0;
    for (std::size_t j = 0; j < subs.size(); ++j) {
        auto c = solve_local(subs[j].system(config_.kernel), j);
        if (!(c.condition_estimate < kIllConditioned)) ++stats_.ill_conditioned;
        if (c.used_fallback) ++stats_.fallback_solves;
        coefficients_.push_back(std::move(c));
        const std::size_t n = subs[j].node_ids.size();
        stats_.min_nodes = std::min(stats_.min_nodes, n);
        stats_.max_nodes = std::max(stats_.max_nodes, n);
        total += n;
    }
    if (!subs.empty()) stats_.mean_nodes = static_cast<double>(total) / static_cast<double>(subs.size());
}

std::vector<std::size_t> PUModel::covering(const Point3& p) const {
    return geometry_->center_index.radius_query(p, geometry_->radius);
}

double PUModel::local_value(std::size_t j, const Point3& p) const {
    const auto& s = geometry_->subdomains.at(j);
    return evaluate_local(s.system(config_.kernel), coefficients_[j], p);
}

std::vector<double> shepard_weights(const PUModel& model, const Point3& p,
                                    std::span<const std::size_t> covering) {
    if (covering.empty()) throw UncoveredPointError("no subdomain covers " + to_string(p));
    const auto subs = model.subdomains();
    std::vector<double> w(covering.size(), 0.0);

    std::size_t coincident = 0;
    for (std::size_t k = 0; k < covering.size(); ++k) {
        const double dist = distance(p, subs[covering[k]].center);
        if (dist < kCoincident) {
            w[k] = 1.0;
            ++coincident;
        } else {
            w[k] = 1.0 / dist;
        }
    }
    if (coincident > 0) {
        for (std::size_t k = 0; k < covering.size(); ++k)
            w[k] = distance(p, subs[covering[k]].center) < kCoincident ? 1.0 / static_cast<double>(coincident) : 0.0;
        return w;
    }
    double sum = 0.0;
    for (double v : w) sum += v;
    for (double& v : w) v /= sum;
    return w;
}

double PUModel::evaluate(const Point3& p, EvalStats* stats) const {
    const std::vector<std::size_t> cover = covering(p);
    if (cover.empty()) {
        const auto subs = subdomains();
        if (subs.empty()) throw UncoveredPointError("model has no subdomains");
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < subs.size(); ++j) {
            const double d2 = squared_distance(p, subs[j].center);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = j;
            }
        }
        if (stats) ++stats->uncovered;
        return local_value(best, p);
    }
    const std::vector<double> w = shepard_weights(*this, p, cover);
    double sum = 0.0;
    for (std::size_t k = 0; k < cover.size(); ++k)
        if (w[k] != 0.0) sum += w[k] * local_value(cover[k], p);
    return sum;
}

std::vector<double> PUModel::evaluate_batch(std::span<const Point3> points, EvalStats* stats) const {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back(evaluate(p, stats));
    return out;
}

PUModel fit(std::vector<DataSite> nodes, PUConfig config) {
    auto geometry = build_geometry(std::move(nodes), config);
    return PUModel(std::move(config), std::move(geometry));
}

PUModel refit(const PUModel& model, const KernelSpec& kernel) {
    PUConfig config = model.config();
    config.kernel = kernel;
    return PUModel(std::move(config), model.shared_geometry());
}

}  // namespace cubepu
