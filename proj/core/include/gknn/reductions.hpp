#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gknn/bvh.hpp"
#include "gknn/geometry.hpp"
#include "gknn/metrics.hpp"

namespace gknn {

/// Parameters of one k-NN search over a native metric.
struct ReductionConfig {
    MetricSpec metric = MetricSpec::l2();
    double radius = 1.0;  // in target-metric units
    std::size_t k = 10;
    bool enhanced = false;  // custom-geometry user filter and tight boxes
    std::size_t leaf_size = Bvh::kDefaultLeafSize;
    int dimension = 3;  // 2 or 3; only affects the LInf / p > 2 inclusion radius

    /// Throws InputError when a field is out of range or the metric is not native.
    void validate() const;
    /// As validate(), but accepts transform-backed metrics.
    void validate_source() const;
};

struct Neighbor {
    std::uint32_t id = 0;
    double distance = 0.0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Neighbors are sorted ascending by (distance, id), at most k long, all within the radius.
///
/// Counters, each a subset of the previous:
///   hit_count       - AnyHit callbacks (query point inside a primitive box)
///   candidate_count - hits inside the user geometry: the radius-r' sphere for the
///                     plain pipeline, the radius-r metric ball for the enhanced one
///   in_range_count  - hits within target-metric distance r, offered to refinement
struct QueryResult {
    std::vector<Neighbor> neighbors;
    std::size_t hit_count = 0;
    std::size_t candidate_count = 0;
    std::size_t in_range_count = 0;
    std::size_t node_visits = 0;
};

/// Half width of each primitive box: inclusion_radius(metric, r, d) for the
/// plain pipeline, r for the enhanced one (a metric ball of radius r spans
/// exactly r along every axis).
[[nodiscard]] double scene_half_width(const ReductionConfig& config);

/// One primitive per point, box centered on the point with the given half width. Ids are indices.
[[nodiscard]] std::vector<Primitive> make_primitives(std::span<const Point3> points, double half_width);

/// Filter-refine with a circumscribing sphere. `bvh` must have been built over
/// make_primitives(points, scene_half_width(config)) with enhanced == false.
///
/// Per hit: keep if squared L2 <= r'^2 (sphere), then if the metric weight is
/// <= r^p (metric ball), then offer to the top-k heap.
[[nodiscard]] QueryResult filter_refine_query(const Bvh& bvh, const Point3& q, const ReductionConfig& config);

/// Filter-refine with the metric ball as user geometry and boxes of half width r.
/// Same result contract as filter_refine_query. For LInf the box is the ball, so
/// every hit is a candidate.
[[nodiscard]] QueryResult enhanced_query(const Bvh& bvh, const Point3& q, const ReductionConfig& config);

/// A built index: dataset points plus the BVH over their primitive boxes.
class LpIndex {
public:
    /// Throws InputError for an empty dataset, non-finite points, or an invalid config.
    LpIndex(std::vector<Point3> points, const ReductionConfig& config);

    /// Runs filter_refine_query or enhanced_query according to config().enhanced.
    [[nodiscard]] QueryResult query(const Point3& q) const;

    /// Queries in input order. Work is split into contiguous ranges across `threads` workers.
    [[nodiscard]] std::vector<QueryResult> query_batch(std::span<const Point3> queries, std::size_t threads = 1) const;

    [[nodiscard]] const Bvh& bvh() const { return bvh_; }
    [[nodiscard]] const ReductionConfig& config() const { return config_; }
    [[nodiscard]] std::span<const Point3> points() const { return points_; }
    [[nodiscard]] double half_width() const { return half_width_; }

private:
    std::vector<Point3> points_;
    ReductionConfig config_;
    double half_width_;
    Bvh bvh_;
};

}  // namespace gknn
