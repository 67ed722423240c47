#include "cubepu/geometry.hpp"

#include <sstream>

namespace cubepu {

std::string to_string(const Point3& p) {
    std::ostringstream os;
    os.precision(17);
    os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
    return os.str();
}

}  // namespace cubepu
