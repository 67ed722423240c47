#include "cubepu/cube_index.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cubepu/errors.hpp"

namespace cubepu {

namespace {

void require_in_domain(const Point3& p, const char* what) {
    if (!p.finite() || !in_unit_cube(p))
        throw DomainError(std::string(what) + " outside the unit cube: " + to_string(p), p);
}

int axis_cell(double coord, int q) {
    const int k = static_cast<int>(std::floor(coord * q)) + 1;
    return std::clamp(k, 1, q);
}

}  // namespace

GridParams grid_from_radius(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius))
        throw std::invalid_argument("grid_from_radius: radius must be positive and finite");

    GridParams g;
    g.i_star = 1;
    g.ceil_q = static_cast<int>(std::ceil(1.0 / radius));
    if (radius > 1.0) {
        g.degenerate = true;
        g.q = 1;
        g.ceil_q = 1;
    } else {
        const double cells = std::floor(1.0 / radius);
        g.q = static_cast<int>(std::clamp(cells, 1.0, static_cast<double>(kMaxCellsPerAxis)));
    }
    g.cube_side = 1.0 / g.q;
    return g;
}

CellId cell_of(const GridParams& params, const Point3& p) {
    require_in_domain(p, "point");
    return {axis_cell(p.x, params.q), axis_cell(p.y, params.q), axis_cell(p.z, params.q)};
}

std::pair<CellId, CellId> neighbor_cell_range(const GridParams& params, CellId c) {
    const int h = params.i_star;
    const int q = params.q;
    CellId first{std::max(c.u - h, 1), std::max(c.v - h, 1), std::max(c.w - h, 1)};
    CellId last{std::min(c.u + h, q), std::min(c.v + h, q), std::min(c.w + h, q)};
    return {first, last};
}

CubeIndex::CubeIndex(std::vector<Point3> points, GridParams params)
    : params_(params), points_(std::move(points)) {
    const std::size_t n = points_.size();
    const std::size_t cells = params_.cell_total();

    // Counting sort on the (w, v, u) cell key; stable, so ids stay ascending inside a cell.
    std::vector<std::size_t> key(n);
    cell_offsets_.assign(cells + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        key[i] = linear_cell(cell_of(params_, points_[i]));
        ++cell_offsets_[key[i] + 1];
    }
    for (std::size_t k = 0; k < cells; ++k) cell_offsets_[k + 1] += cell_offsets_[k];

    permutation_.resize(n);
    std::vector<std::size_t> cursor(cell_offsets_.begin(), cell_offsets_.end() - 1);
    for (std::size_t i = 0; i < n; ++i) permutation_[cursor[key[i]]++] = i;
}

std::vector<std::size_t> CubeIndex::radius_query(const Point3& center, double radius,
                                                 std::size_t* cells_visited) const {
    require_in_domain(center, "query center");
    if (params_.q > 1 && radius > params_.i_star * params_.cube_side) {
        std::ostringstream os;
        os << "radius " << radius << " exceeds the search halo " << params_.i_star * params_.cube_side;
        throw RadiusTooLargeError(os.str());
    }

    const auto range = neighbor_cell_range(params_, cell_of(params_, center));
    const auto& [first, last] = range;
    const double r2 = radius * radius;
    std::vector<std::size_t> found;
    for (int w = first.w; w <= last.w; ++w)
        for (int v = first.v; v <= last.v; ++v)
            for (int u = first.u; u <= last.u; ++u)
                for (std::size_t id : cell({u, v, w}))
                    if (squared_distance(points_[id], center) <= r2) found.push_back(id);

    std::sort(found.begin(), found.end());
    if (cells_visited) *cells_visited = cells_in_range(range);
    return found;
}

std::size_t CubeIndex::count_nonempty_cells() const {
    std::size_t count = 0;
    for (std::size_t k = 0; k + 1 < cell_offsets_.size(); ++k)
        if (cell_offsets_[k + 1] > cell_offsets_[k]) ++count;
    return count;
}

BruteForceIndex::BruteForceIndex(std::vector<Point3> points) : points_(std::move(points)) {
    for (const auto& p : points_) require_in_domain(p, "point");
}

std::vector<std::size_t> BruteForceIndex::radius_query(const Point3& center, double radius) const {
    require_in_domain(center, "query center");
    const double r2 = radius * radius;
    std::vector<std::size_t> found;
    for (std::size_t i = 0; i < points_.size(); ++i)
        if (squared_distance(points_[i], center) <= r2) found.push_back(i);
    return found;
}

PointSearch::PointSearch(std::vector<Point3> points, double radius, SearchMode mode) {
    if (mode == SearchMode::cube)
        impl_ = CubeIndex(std::move(points), grid_from_radius(radius));
    else
        impl_ = BruteForceIndex(std::move(points));
}

std::span<const Point3> PointSearch::points() const noexcept {
    return std::visit([](const auto& s) { return s.points(); }, impl_);
}

std::vector<std::size_t> PointSearch::radius_query(const Point3& center, double radius) const {
    return std::visit([&](const auto& s) { return s.radius_query(center, radius); }, impl_);
}

}  // namespace cubepu
