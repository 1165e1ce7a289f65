#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gknn {

struct WeightedId {
    std::uint32_t id = 0;
    double weight = 0.0;

    friend bool operator==(const WeightedId&, const WeightedId&) = default;
};

/// Orders by weight, then by id.
[[nodiscard]] inline bool ranks_before(const WeightedId& a, const WeightedId& b) {
    return a.weight < b.weight || (a.weight == b.weight && a.id < b.id);
}

/// Bounded max-heap keeping the k best (weight, id) pairs seen so far.
class NeighborHeap {
public:
    /// Throws InputError for capacity 0.
    explicit NeighborHeap(std::size_t capacity);

    /// Inserts if fewer than k entries are held or (weight, id) ranks before the
    /// worst kept entry, evicting that entry. Returns whether it was kept.
    bool offer(std::uint32_t id, double weight);

    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] std::size_t capacity() const { return capacity_; }
    [[nodiscard]] bool full() const { return entries_.size() == capacity_; }
    /// Largest kept weight; +infinity while not full.
    [[nodiscard]] double worst_weight() const;

    /// Contents sorted ascending by (weight, id).
    [[nodiscard]] std::vector<WeightedId> sorted() const;

private:
    std::size_t capacity_;
    std::vector<WeightedId> entries_;  // max-heap on ranks_before
};

}  // namespace gknn
