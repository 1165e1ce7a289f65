#include "gknn/neighbor_heap.hpp"

#include <algorithm>
#include <limits>

#include "gknn/errors.hpp"

namespace gknn {

NeighborHeap::NeighborHeap(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw InputError("NeighborHeap: k must be positive");
    entries_.reserve(capacity);
}

bool NeighborHeap::offer(std::uint32_t id, double weight) {
    const WeightedId candidate{id, weight};
    if (entries_.size() < capacity_) {
        entries_.push_back(candidate);
        std::push_heap(entries_.begin(), entries_.end(), ranks_before);
        return true;
    }
    if (!ranks_before(candidate, entries_.front())) return false;
    std::pop_heap(entries_.begin(), entries_.end(), ranks_before);
    entries_.back() = candidate;
    std::push_heap(entries_.begin(), entries_.end(), ranks_before);
    return true;
}

double NeighborHeap::worst_weight() const {
    if (!full()) return std::numeric_limits<double>::infinity();
    return entries_.front().weight;
}

std::vector<WeightedId> NeighborHeap::sorted() const {
    std::vector<WeightedId> out = entries_;
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

}  // namespace gknn
