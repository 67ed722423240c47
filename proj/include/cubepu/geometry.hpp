#pragma once

#include <cmath>
#include <string>

namespace cubepu {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend bool operator==(const Point3&, const Point3&) = default;

    [[nodiscard]] bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

/// A node position together with the sampled function value.
struct DataSite {
    Point3 position;
    double value = 0.0;
};

/// Closed axis-aligned box, by default the unit cube [0,1]^3.
struct UnitCube {
    Point3 lo{0.0, 0.0, 0.0};
    Point3 hi{1.0, 1.0, 1.0};
};

[[nodiscard]] inline double squared_distance(const Point3& a, const Point3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return dx * dx + dy * dy + dz * dz;
}

[[nodiscard]] inline double distance(const Point3& a, const Point3& b) {
    return std::sqrt(squared_distance(a, b));
}

[[nodiscard]] inline bool contains(const UnitCube& cube, const Point3& p) {
    return p.x >= cube.lo.x && p.x <= cube.hi.x &&
           p.y >= cube.lo.y && p.y <= cube.hi.y &&
           p.z >= cube.lo.z && p.z <= cube.hi.z;
}

[[nodiscard]] inline bool in_unit_cube(const Point3& p) { return contains(UnitCube{}, p); }

std::string to_string(const Point3& p);

}  // namespace cubepu
