#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "gknn/geometry.hpp"

namespace gknn {

/// One indexed object: the box handed to the accelerator and the data point it was built around.
struct Primitive {
    std::uint32_t id = 0;
    Aabb box;
    Point3 center;
};

/// What the accelerator reports to the AnyHit callback.
struct HitRecord {
    std::uint32_t id = 0;
    Point3 center;
};

enum class HitAction { Continue, Terminate };

struct TraversalStats {
    std::size_t hits = 0;         // AnyHit callbacks delivered
    std::size_t node_visits = 0;  // node boxes tested against the query point
};

/// Binary bounding volume hierarchy over primitive boxes, answering
/// point-containment queries.
///
/// Built top-down by median split on the longest axis of the centroid extent
/// (ties prefer x, then y, then z) until a node holds at most leaf_size
/// primitives. Immutable after construction; concurrent traversals are safe.
class Bvh {
public:
    static constexpr std::size_t kDefaultLeafSize = 4;

    struct Node {
        Aabb box;
        // Internal nodes: child indices. Leaves: left == right == kNone.
        std::uint32_t left = kNone;
        std::uint32_t right = kNone;
        // Leaves: range [first, first + count) into primitives().
        std::uint32_t first = 0;
        std::uint32_t count = 0;

        [[nodiscard]] bool is_leaf() const { return left == kNone; }
    };
    static constexpr std::uint32_t kNone = 0xffffffffu;

    /// Throws InputError for an empty input, an invalid box, or leaf_size == 0.
    static Bvh build(std::span<const Primitive> primitives, std::size_t leaf_size = kDefaultLeafSize);

    /// Calls anyhit once per primitive whose box contains q.origin, depth first
    /// with the left child first. Stops as soon as anyhit returns Terminate.
    template <typename AnyHit>
    TraversalStats traverse(const PointQuery& q, AnyHit&& anyhit) const;

    [[nodiscard]] std::span<const Node> nodes() const { return nodes_; }
    /// Primitives in leaf order.
    [[nodiscard]] std::span<const Primitive> primitives() const { return primitives_; }
    [[nodiscard]] std::size_t leaf_size() const { return leaf_size_; }
    [[nodiscard]] const Aabb& bounds() const { return nodes_.front().box; }
    [[nodiscard]] std::size_t depth() const;
    [[nodiscard]] std::size_t leaf_count() const;

    /// Indented text dump, one node per line.
    [[nodiscard]] std::string dump() const;

private:
    std::vector<Node> nodes_;
    std::vector<Primitive> primitives_;
    std::size_t leaf_size_ = kDefaultLeafSize;
};

/// Number of AnyHit callbacks delivered; traversal stops early on Terminate.
template <typename AnyHit>
std::size_t traverse_point(const Bvh& bvh, const PointQuery& q, AnyHit&& anyhit) {
    return bvh.traverse(q, std::forward<AnyHit>(anyhit)).hits;
}

/// Node boxes tested by a full traversal (every hit answered with Continue).
[[nodiscard]] std::size_t node_visits(const Bvh& bvh, const PointQuery& q);

template <typename AnyHit>
TraversalStats Bvh::traverse(const PointQuery& q, AnyHit&& anyhit) const {
    static_assert(std::is_invocable_r_v<HitAction, AnyHit&, const HitRecord&>,
                  "AnyHit must be callable as HitAction(const HitRecord&)");
    TraversalStats stats;
    // Depth is bounded by log2(n / leaf_size) + 1 for median splits; 64 covers any 32-bit id space.
    std::uint32_t stack[64];
    std::size_t top = 0;
    stack[top++] = 0;
    while (top > 0) {
        const Node& node = nodes_[stack[--top]];
        ++stats.node_visits;
        if (!aabb_contains(node.box, q.origin)) continue;
        if (node.is_leaf()) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const Primitive& prim = primitives_[i];
                if (!aabb_contains(prim.box, q.origin)) continue;
                ++stats.hits;
                if (anyhit(HitRecord{prim.id, prim.center}) == HitAction::Terminate) return stats;
            }
        } else {
            stack[top++] = node.right;
            stack[top++] = node.left;
        }
    }
    return stats;
}

}  // namespace gknn
