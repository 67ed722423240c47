#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cubepu/cube_index.hpp"
#include "cubepu/geometry.hpp"
#include "cubepu/rbf.hpp"

namespace cubepu {

enum class CenterSource { halton, grid, explicit_list };

struct PUConfig {
    KernelSpec kernel;
    std::size_t subdomain_count = 1;
    std::optional<std::size_t> m_max;
    CenterSource center_source = CenterSource::halton;
    std::vector<Point3> centers;  ///< used when center_source == explicit_list
    SearchMode search = SearchMode::cube;
    /// Drop subdomains that capture no node instead of failing the fit.
    bool allow_empty = false;
};

/// Spherical patch radius sqrt(2) / cbrt(d).
[[nodiscard]] double subdomain_radius(std::size_t d);

/// Subdomain centers for a config: Halton points in bases (7, 11, 13), a
/// cell-centered lattice of side ceil(cbrt(d)) truncated to d points, or the
/// explicit list.
[[nodiscard]] std::vector<Point3> make_centers(const PUConfig& config);

/// Geometry of one patch; shared between models fitted with different kernels.
struct Subdomain {
    Point3 center;
    double radius = 0.0;
    std::vector<std::size_t> node_ids;  ///< ascending
    std::vector<Point3> positions;      ///< gathered in node_ids order
    std::vector<double> values;

    [[nodiscard]] LocalSystem system(const KernelSpec& kernel) const { return {positions, values, kernel}; }
};

struct FitStats {
    std::size_t ill_conditioned = 0;  ///< local solves with condition_estimate >= kIllConditioned
    std::size_t fallback_solves = 0;  ///< local solves that needed LU
    std::size_t empty_dropped = 0;    ///< only nonzero with allow_empty
    std::size_t min_nodes = 0;
    std::size_t max_nodes = 0;
    double mean_nodes = 0.0;
};

struct EvalStats {
    std::size_t uncovered = 0;  ///< points served by the nearest-subdomain fallback
};

/// Indices plus captured patches; everything in a fit that does not depend on
/// the kernel.
struct PUGeometry {
    std::vector<DataSite> nodes;
    double radius = 0.0;
    PointSearch node_index;
    PointSearch center_index;  ///< over the centers of `subdomains`
    std::vector<Subdomain> subdomains;
    std::size_t empty_dropped = 0;
};

/// Builds the search structures and captures every subdomain's nodes.
/// Throws DomainError, EmptySubdomainError.
[[nodiscard]] std::shared_ptr<const PUGeometry> build_geometry(std::vector<DataSite> nodes,
                                                               const PUConfig& config);

/// The fitted global interpolant, immutable; evaluation is safe from many threads.
class PUModel {
public:
    PUModel(PUConfig config, std::shared_ptr<const PUGeometry> geometry);

    [[nodiscard]] const PUConfig& config() const noexcept { return config_; }
    [[nodiscard]] const PUGeometry& geometry() const noexcept { return *geometry_; }
    [[nodiscard]] std::shared_ptr<const PUGeometry> shared_geometry() const noexcept { return geometry_; }
    [[nodiscard]] std::span<const Subdomain> subdomains() const noexcept { return geometry_->subdomains; }
    [[nodiscard]] std::span<const DataSite> nodes() const noexcept { return geometry_->nodes; }
    [[nodiscard]] double radius() const noexcept { return geometry_->radius; }
    [[nodiscard]] const LocalCoefficients& coefficients(std::size_t j) const { return coefficients_.at(j); }
    [[nodiscard]] const FitStats& stats() const noexcept { return stats_; }

    /// Ids of subdomains whose center lies within the radius of p.
    [[nodiscard]] std::vector<std::size_t> covering(const Point3& p) const;

    /// Local interpolant R_j(p).
    [[nodiscard]] double local_value(std::size_t j, const Point3& p) const;

    [[nodiscard]] double evaluate(const Point3& p, EvalStats* stats = nullptr) const;
    [[nodiscard]] std::vector<double> evaluate_batch(std::span<const Point3> points,
                                                     EvalStats* stats = nullptr) const;

private:
    PUConfig config_;
    std::shared_ptr<const PUGeometry> geometry_;
    std::vector<LocalCoefficients> coefficients_;
    FitStats stats_;
};

/// Normalized inverse-distance weights over `covering`. Centers closer than
/// 1e-14 to p share the weight equally and the rest get zero.
/// Throws UncoveredPointError when covering is empty.
[[nodiscard]] std::vector<double> shepard_weights(const PUModel& model, const Point3& p,
                                                  std::span<const std::size_t> covering);

/// Full fit: geometry plus one local solve per subdomain.
[[nodiscard]] PUModel fit(std::vector<DataSite> nodes, PUConfig config);

/// Same geometry, new kernel (only the local solves rerun).
[[nodiscard]] PUModel refit(const PUModel& model, const KernelSpec& kernel);

}  // namespace cubepu
