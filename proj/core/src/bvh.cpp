#include "gknn/bvh.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "gknn/errors.hpp"

namespace gknn {

namespace {

struct Builder {
    std::vector<Bvh::Node>& nodes;
    std::vector<Primitive>& prims;
    std::size_t leaf_size;

    static int longest_axis(const Aabb& centroids) {
        const Point3 e = centroids.extent();
        int axis = 0;
        if (e.y > e[axis]) axis = 1;
        if (e.z > e[axis]) axis = 2;
        return axis;
    }

    std::uint32_t build(std::uint32_t first, std::uint32_t count) {
        const auto index = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();

        Aabb box = Aabb::empty();
        Aabb centroids = Aabb::empty();
        for (std::uint32_t i = first; i < first + count; ++i) {
            box = Aabb::merge(box, prims[i].box);
            centroids = Aabb::merge(centroids, Aabb{prims[i].center, prims[i].center});
        }
        nodes[index].box = box;

        if (count <= leaf_size) {
            nodes[index].first = first;
            nodes[index].count = count;
            return index;
        }

        const int axis = longest_axis(centroids);
        const std::uint32_t half = count / 2;
        const auto begin = prims.begin() + first;
        // Ids break coordinate ties so the partition does not depend on input order.
        std::nth_element(begin, begin + half, begin + count, [axis](const Primitive& a, const Primitive& b) {
            const double ca = a.center[axis];
            const double cb = b.center[axis];
            return ca < cb || (ca == cb && a.id < b.id);
        });

        const std::uint32_t left = build(first, half);
        const std::uint32_t right = build(first + half, count - half);
        nodes[index].left = left;
        nodes[index].right = right;
        return index;
    }
};

}  // namespace

Bvh Bvh::build(std::span<const Primitive> primitives, std::size_t leaf_size) {
    if (primitives.empty()) throw InputError("Bvh::build: no primitives");
    if (leaf_size == 0) throw InputError("Bvh::build: leaf_size must be positive");
    if (primitives.size() >= std::numeric_limits<std::uint32_t>::max()) {
        throw InputError("Bvh::build: too many primitives");
    }
    for (const Primitive& prim : primitives) {
        if (!prim.box.is_valid() || !prim.center.is_finite()) {
            throw InputError("Bvh::build: invalid box for primitive " + std::to_string(prim.id));
        }
    }

    Bvh bvh;
    bvh.leaf_size_ = leaf_size;
    bvh.primitives_.assign(primitives.begin(), primitives.end());
    bvh.nodes_.reserve(2 * (primitives.size() / leaf_size + 1));
    Builder builder{bvh.nodes_, bvh.primitives_, leaf_size};
    builder.build(0, static_cast<std::uint32_t>(primitives.size()));
    return bvh;
}

std::size_t Bvh::depth() const {
    std::size_t deepest = 0;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0u, 1u}};
    while (!stack.empty()) {
        const auto [index, level] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, level);
        const Node& node = nodes_[index];
        if (!node.is_leaf()) {
            stack.emplace_back(node.left, level + 1);
            stack.emplace_back(node.right, level + 1);
        }
    }
    return deepest;
}

std::size_t Bvh::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
}

std::string Bvh::dump() const {
    std::ostringstream out;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{0u, 0u}};
    while (!stack.empty()) {
        const auto [index, level] = stack.back();
        stack.pop_back();
        const Node& node = nodes_[index];
        out << std::string(2 * level, ' ');
        if (node.is_leaf()) {
            out << "leaf " << node.box << " ids:";
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) out << ' ' << primitives_[i].id;
        } else {
            out << "node " << node.box;
            stack.emplace_back(node.right, level + 1);
            stack.emplace_back(node.left, level + 1);
        }
        out << '\n';
    }
    return out.str();
}

std::size_t node_visits(const Bvh& bvh, const PointQuery& q) {
    return bvh.traverse(q, [](const HitRecord&) { return HitAction::Continue; }).node_visits;
}

}  // namespace gknn
