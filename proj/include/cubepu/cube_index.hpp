#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "cubepu/geometry.hpp"

namespace cubepu {

/// Grid geometry of the cube partition.
///
/// `q` cells per axis of side `cube_side` = 1/q tile the unit cube exactly. `q` is
/// taken as floor(1/radius) so that cube_side >= radius and a halo of `i_star` = 1
/// cell around the query cell contains the whole ball. `ceil_q` is ceil(1/radius),
/// the cell count the original cube algorithm tabulates; it is kept for reporting.
struct GridParams {
    double cube_side = 1.0;
    int q = 1;
    int i_star = 1;
    int ceil_q = 1;
    bool degenerate = false;  ///< radius > 1: a single cell, every query scans everything

    /// Cells visited by an interior query, (2 i* + 1)^3.
    [[nodiscard]] int scan_budget() const {
        const int side = 2 * i_star + 1;
        return side * side * side;
    }
    [[nodiscard]] std::size_t cell_total() const {
        return static_cast<std::size_t>(q) * static_cast<std::size_t>(q) * static_cast<std::size_t>(q);
    }
};

/// Upper bound on q; coarser cells only widen the halo, never break correctness.
inline constexpr int kMaxCellsPerAxis = 256;

[[nodiscard]] GridParams grid_from_radius(double radius);

/// 1-based triple index [u,v,w] of a cell along x, y, z.
struct CellId {
    int u = 1;
    int v = 1;
    int w = 1;
    friend bool operator==(const CellId&, const CellId&) = default;
};

[[nodiscard]] CellId cell_of(const GridParams& params, const Point3& p);

/// First and last cell of the (clamped) halo around `c`.
[[nodiscard]] std::pair<CellId, CellId> neighbor_cell_range(const GridParams& params, CellId c);

[[nodiscard]] inline std::size_t cells_in_range(const std::pair<CellId, CellId>& range) {
    const auto& [first, last] = range;
    return static_cast<std::size_t>(last.u - first.u + 1) *
           static_cast<std::size_t>(last.v - first.v + 1) *
           static_cast<std::size_t>(last.w - first.w + 1);
}

/// Point ids sorted by cell in (w, v, u) lexicographic order, with per-cell
/// [begin, end) offsets into the permutation.
class CubeIndex {
public:
    CubeIndex() = default;

    /// Throws DomainError naming the first point outside [0,1]^3.
    CubeIndex(std::vector<Point3> points, GridParams params);

    [[nodiscard]] const GridParams& params() const noexcept { return params_; }
    [[nodiscard]] std::span<const Point3> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::span<const std::size_t> permutation() const noexcept { return permutation_; }
    [[nodiscard]] std::span<const std::size_t> cell_offsets() const noexcept { return cell_offsets_; }

    [[nodiscard]] std::size_t linear_cell(CellId c) const noexcept {
        const auto q = static_cast<std::size_t>(params_.q);
        return (static_cast<std::size_t>(c.w - 1) * q + static_cast<std::size_t>(c.v - 1)) * q +
               static_cast<std::size_t>(c.u - 1);
    }

    /// Ids of the points stored in cell `c`.
    [[nodiscard]] std::span<const std::size_t> cell(CellId c) const noexcept {
        const std::size_t k = linear_cell(c);
        return std::span<const std::size_t>(permutation_).subspan(
            cell_offsets_[k], cell_offsets_[k + 1] - cell_offsets_[k]);
    }

    /// Ids i with |points[i] - center| <= radius, ascending. If `cells_visited` is
    /// non-null it receives the number of cells scanned.
    ///
    /// Throws RadiusTooLargeError when radius > i_star * cube_side (unless the grid is
    /// a single cell) and DomainError when center is outside the unit cube.
    [[nodiscard]] std::vector<std::size_t> radius_query(const Point3& center, double radius,
                                                        std::size_t* cells_visited = nullptr) const;

    [[nodiscard]] std::size_t count_nonempty_cells() const;

private:
    GridParams params_;
    std::vector<Point3> points_;
    std::vector<std::size_t> permutation_;
    std::vector<std::size_t> cell_offsets_{0, 0};
};

/// Exhaustive O(n) scanner with the same query contract as CubeIndex; the
/// "no cube" baseline.
class BruteForceIndex {
public:
    BruteForceIndex() = default;
    explicit BruteForceIndex(std::vector<Point3> points);

    [[nodiscard]] std::span<const Point3> points() const noexcept { return points_; }
    [[nodiscard]] std::size_t size() const noexcept { return points_.size(); }
    [[nodiscard]] std::vector<std::size_t> radius_query(const Point3& center, double radius) const;

private:
    std::vector<Point3> points_;
};

enum class SearchMode { cube, no_cube };

/// Either search structure behind one query interface.
class PointSearch {
public:
    PointSearch() = default;
    PointSearch(std::vector<Point3> points, double radius, SearchMode mode);

    [[nodiscard]] SearchMode mode() const noexcept {
        return std::holds_alternative<CubeIndex>(impl_) ? SearchMode::cube : SearchMode::no_cube;
    }
    [[nodiscard]] std::span<const Point3> points() const noexcept;
    [[nodiscard]] std::size_t size() const noexcept { return points().size(); }
    [[nodiscard]] std::vector<std::size_t> radius_query(const Point3& center, double radius) const;
    /// Null in no_cube mode.
    [[nodiscard]] const CubeIndex* cube_index() const noexcept { return std::get_if<CubeIndex>(&impl_); }

private:
    std::variant<CubeIndex, BruteForceIndex> impl_;
};

}  // namespace cubepu
