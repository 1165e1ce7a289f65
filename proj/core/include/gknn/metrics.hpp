#pragma once

#include <string>
#include <string_view>

#include "gknn/geometry.hpp"

namespace gknn {

enum class MetricKind {
    Lp,        // Minkowski distance, p >= 1
    LInf,      // Chebyshev distance
    Cosine,    // 1 - cosine similarity, via normalization
    Angular,   // angle between vectors in radians, via normalization
    Euclid2D,  // planar Euclidean distance, via embedding into z = 0
    Hamming3,  // Hamming distance between bit strings of length <= 3, via cube vertices
};

/// The target distance measure of a search.
///
/// Lp and LInf are searched natively by filter-refine. The other kinds have no
/// finite inclusion radius and are searched by first mapping points through a
/// monotone transform (see transforms.hpp).
class MetricSpec {
public:
    [[nodiscard]] static MetricSpec lp(double p);
    [[nodiscard]] static MetricSpec l1() { return lp(1.0); }
    [[nodiscard]] static MetricSpec l2() { return lp(2.0); }
    [[nodiscard]] static MetricSpec linf() { return MetricSpec(MetricKind::LInf, 0.0); }
    [[nodiscard]] static MetricSpec cosine() { return MetricSpec(MetricKind::Cosine, 0.0); }
    [[nodiscard]] static MetricSpec angular() { return MetricSpec(MetricKind::Angular, 0.0); }
    [[nodiscard]] static MetricSpec euclid2d() { return MetricSpec(MetricKind::Euclid2D, 0.0); }
    [[nodiscard]] static MetricSpec hamming3() { return MetricSpec(MetricKind::Hamming3, 0.0); }

    /// Parses the canonical CLI form: "lp:<p>", "linf", "cosine", "angular",
    /// "euclid2d" or "hamming3". Throws InputError on anything else.
    [[nodiscard]] static MetricSpec parse(std::string_view text);

    [[nodiscard]] MetricKind kind() const { return kind_; }
    /// Exponent; only meaningful for MetricKind::Lp.
    [[nodiscard]] double p() const { return p_; }
    /// True for metrics searched directly by filter-refine (Lp, LInf).
    [[nodiscard]] bool is_native() const { return kind_ == MetricKind::Lp || kind_ == MetricKind::LInf; }

    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const MetricSpec&, const MetricSpec&) = default;

private:
    MetricSpec(MetricKind kind, double p) : kind_(kind), p_(p) {}

    MetricKind kind_;
    double p_;
};

/// Un-rooted Minkowski sum: sum_i |a_i - b_i|^p. Throws InputError for p < 1 or non-finite p.
[[nodiscard]] double lp_weight(const Point3& a, const Point3& b, double p);

/// max_i |a_i - b_i|.
[[nodiscard]] double linf_weight(const Point3& a, const Point3& b);

/// Comparison key for a native metric: lp_weight for Lp, linf_weight for LInf.
/// Order-isomorphic to the true distance.
[[nodiscard]] double metric_weight(const MetricSpec& metric, const Point3& a, const Point3& b);

/// The weight a point at exactly distance r has: r^p for Lp, r for LInf.
[[nodiscard]] double weight_bound(const MetricSpec& metric, double r);

/// Inverse of weight_bound: the distance a weight corresponds to.
[[nodiscard]] double weight_to_distance(const MetricSpec& metric, double weight);

/// Tight L2 radius f(r) of a sphere circumscribing the radius-r ball of a
/// native metric in `dimension` dimensions:
///   r                          for 1 <= p <= 2
///   r * d^(1/2 - 1/p)          for 2 < p < inf
///   r * sqrt(d)                for LInf
/// Throws InputError for transform-backed metrics, r <= 0, or dimension outside {2, 3}.
[[nodiscard]] double inclusion_radius(const MetricSpec& metric, double r, int dimension);

/// True iff q lies in the closed metric ball of radius r around center.
[[nodiscard]] bool in_lp_ball(const Point3& q, const Point3& center, const MetricSpec& metric, double r);

}  // namespace gknn
