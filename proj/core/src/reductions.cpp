#include "gknn/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "gknn/errors.hpp"
#include "gknn/neighbor_heap.hpp"

namespace gknn {

namespace {

std::vector<Neighbor> finish(const NeighborHeap& heap, const MetricSpec& metric) {
    std::vector<Neighbor> out;
    out.reserve(heap.size());
    for (const WeightedId& entry : heap.sorted()) {
        out.push_back({entry.id, weight_to_distance(metric, entry.weight)});
    }
    return out;
}

void require_finite_query(const Point3& q) {
    if (!q.is_finite()) throw InputError("query point must be finite");
}

}  // namespace

void ReductionConfig::validate() const {
    if (!metric.is_native()) {
        throw InputError("metric '" + metric.to_string() + "' is not searched natively; use a transformed index");
    }
    validate_source();
}

void ReductionConfig::validate_source() const {
    if (!std::isfinite(radius) || radius <= 0.0) {
        std::ostringstream msg;
        msg << "radius must be finite and > 0, got " << radius;
        throw InputError(msg.str());
    }
    if (k == 0) throw InputError("k must be positive");
    if (leaf_size == 0) throw InputError("leaf size must be positive");
    if (dimension != 2 && dimension != 3) throw InputError("dimension must be 2 or 3");
}

double scene_half_width(const ReductionConfig& config) {
    config.validate();
    if (config.enhanced) return config.radius;
    return inclusion_radius(config.metric, config.radius, config.dimension);
}

std::vector<Primitive> make_primitives(std::span<const Point3> points, double half_width) {
    std::vector<Primitive> prims;
    prims.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!points[i].is_finite()) throw InputError("data point " + std::to_string(i) + " is not finite");
        prims.push_back({static_cast<std::uint32_t>(i), aabb_around(points[i], half_width), points[i]});
    }
    return prims;
}

QueryResult filter_refine_query(const Bvh& bvh, const Point3& q, const ReductionConfig& config) {
    require_finite_query(q);
    const double sphere_radius = inclusion_radius(config.metric, config.radius, config.dimension);
    const double sphere_bound = sphere_radius * sphere_radius;
    const double bound = weight_bound(config.metric, config.radius);

    QueryResult result;
    NeighborHeap heap(config.k);
    const TraversalStats stats = bvh.traverse(PointQuery{q}, [&](const HitRecord& hit) {
        if (squared_l2_distance(hit.center, q) <= sphere_bound) {
            ++result.candidate_count;
            const double w = metric_weight(config.metric, hit.center, q);
            if (w <= bound) {
                ++result.in_range_count;
                heap.offer(hit.id, w);
            }
        }
        return HitAction::Continue;
    });
    result.hit_count = stats.hits;
    result.node_visits = stats.node_visits;
    result.neighbors = finish(heap, config.metric);
    return result;
}

QueryResult enhanced_query(const Bvh& bvh, const Point3& q, const ReductionConfig& config) {
    require_finite_query(q);
    const double bound = weight_bound(config.metric, config.radius);
    const bool box_is_ball = config.metric.kind() == MetricKind::LInf;

    QueryResult result;
    NeighborHeap heap(config.k);
    const TraversalStats stats = bvh.traverse(PointQuery{q}, [&](const HitRecord& hit) {
        const double w = metric_weight(config.metric, hit.center, q);
        const bool in_range = w <= bound;
        if (box_is_ball || in_range) ++result.candidate_count;
        if (in_range) {
            ++result.in_range_count;
            heap.offer(hit.id, w);
        }
        return HitAction::Continue;
    });
    result.hit_count = stats.hits;
    result.node_visits = stats.node_visits;
    result.neighbors = finish(heap, config.metric);
    return result;
}

LpIndex::LpIndex(std::vector<Point3> points, const ReductionConfig& config)
    : points_(std::move(points)), config_(config), half_width_(scene_half_width(config)),
      bvh_(Bvh::build(make_primitives(points_, half_width_), config.leaf_size)) {}

QueryResult LpIndex::query(const Point3& q) const {
    return config_.enhanced ? enhanced_query(bvh_, q, config_) : filter_refine_query(bvh_, q, config_);
}

std::vector<QueryResult> LpIndex::query_batch(std::span<const Point3> queries, std::size_t threads) const {
    std::vector<QueryResult> results(queries.size());
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(queries.size(), 1));
    if (threads == 1) {
        for (std::size_t i = 0; i < queries.size(); ++i) results[i] = query(queries[i]);
        return results;
    }
    const std::size_t chunk = (queries.size() + threads - 1) / threads;
    std::vector<std::jthread> workers;
    std::vector<std::exception_ptr> errors(threads);
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                const std::size_t end = std::min(queries.size(), (t + 1) * chunk);
                for (std::size_t i = t * chunk; i < end; ++i) results[i] = query(queries[i]);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    workers.clear();  // joins
    for (const auto& error : errors) {
        if (error) std::rethrow_exception(error);
    }
    return results;
}

}  // namespace gknn
