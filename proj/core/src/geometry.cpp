#include "gknn/geometry.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>

#include "gknn/errors.hpp"

namespace gknn {

std::ostream& operator<<(std::ostream& os, const Point3& p) {
    return os << '(' << p.x << ", " << p.y << ", " << p.z << ')';
}

std::ostream& operator<<(std::ostream& os, const Aabb& box) {
    return os << '[' << box.min << ", " << box.max << ']';
}

Aabb Aabb::merge(const Aabb& a, const Aabb& b) {
    return {{std::min(a.min.x, b.min.x), std::min(a.min.y, b.min.y), std::min(a.min.z, b.min.z)},
            {std::max(a.max.x, b.max.x), std::max(a.max.y, b.max.y), std::max(a.max.z, b.max.z)}};
}

Aabb Aabb::empty() {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {{inf, inf, inf}, {-inf, -inf, -inf}};
}

Aabb aabb_around(const Point3& center, double half_width) {
    if (!std::isfinite(half_width) || half_width < 0.0) {
        std::ostringstream msg;
        msg << "aabb_around: half width must be finite and non-negative, got " << half_width;
        throw InputError(msg.str());
    }
    if (!center.is_finite()) {
        throw InputError("aabb_around: center must be finite");
    }
    const Point3 h{half_width, half_width, half_width};
    return {center - h, center + h};
}

}  // namespace gknn
