#pragma once

#include <cmath>
#include <iosfwd>

namespace gknn {

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// A point (or vector) in 3D. Queries and indexed data both live here.
struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    [[nodiscard]] double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    [[nodiscard]] bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }

    friend bool operator==(const Point3&, const Point3&) = default;
    friend Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend Point3 operator*(const Point3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
};

std::ostream& operator<<(std::ostream& os, const Point3& p);

[[nodiscard]] inline double dot(const Point3& a, const Point3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

/// Closed axis-aligned box. min <= max componentwise; zero-width boxes are valid.
struct Aabb {
    Point3 min;
    Point3 max;

    [[nodiscard]] bool is_valid() const {
        return min.is_finite() && max.is_finite() && min.x <= max.x && min.y <= max.y && min.z <= max.z;
    }
    [[nodiscard]] Point3 center() const { return (min + max) * 0.5; }
    [[nodiscard]] Point3 extent() const { return max - min; }

    /// Smallest box enclosing both.
    [[nodiscard]] static Aabb merge(const Aabb& a, const Aabb& b);
    /// Box that nothing is contained in; identity for merge().
    [[nodiscard]] static Aabb empty();

    friend bool operator==(const Aabb&, const Aabb&) = default;
};

std::ostream& operator<<(std::ostream& os, const Aabb& box);

/// A ray of zero length. Only the origin matters: containment in a box does
/// not depend on the direction a ray would be cast in.
struct PointQuery {
    Point3 origin;
};

/// Box with min = center - h and max = center + h on every axis.
/// Throws InputError for a negative or non-finite half width or a non-finite center.
[[nodiscard]] Aabb aabb_around(const Point3& center, double half_width);

/// Closed containment: min <= p <= max on every axis.
[[nodiscard]] inline bool aabb_contains(const Aabb& box, const Point3& p) {
    return box.min.x <= p.x && p.x <= box.max.x &&
           box.min.y <= p.y && p.y <= box.max.y &&
           box.min.z <= p.z && p.z <= box.max.z;
}

[[nodiscard]] inline double squared_l2_distance(const Point3& a, const Point3& b) {
    const Point3 d = a - b;
    return d.x * d.x + d.y * d.y + d.z * d.z;
}

[[nodiscard]] inline double l2_distance(const Point3& a, const Point3& b) {
    return std::sqrt(squared_l2_distance(a, b));
}

}  // namespace gknn
