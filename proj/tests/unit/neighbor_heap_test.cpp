#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <vector>

#include "gknn/errors.hpp"
#include "gknn/neighbor_heap.hpp"
#include "test_support.hpp"

using namespace gknn;

TEST(NeighborHeap, KeepsKSmallest) {
    NeighborHeap heap(3);
    EXPECT_EQ(heap.worst_weight(), std::numeric_limits<double>::infinity());
    for (auto [id, w] : std::vector<std::pair<std::uint32_t, double>>{{0, 5}, {1, 1}, {2, 4}, {3, 2}, {4, 9}}) {
        heap.offer(id, w);
    }
    EXPECT_EQ(heap.sorted(), (std::vector<WeightedId>{{1, 1}, {3, 2}, {2, 4}}));
    EXPECT_EQ(heap.worst_weight(), 4.0);
}

TEST(NeighborHeap, TiesKeepSmallerId) {
    NeighborHeap heap(2);
    EXPECT_TRUE(heap.offer(7, 1.0));
    EXPECT_TRUE(heap.offer(5, 1.0));
    EXPECT_FALSE(heap.offer(9, 1.0));
    EXPECT_TRUE(heap.offer(2, 1.0));
    EXPECT_EQ(heap.sorted(), (std::vector<WeightedId>{{2, 1.0}, {5, 1.0}}));
}

TEST(NeighborHeap, RejectsZeroCapacity) { EXPECT_THROW(NeighborHeap(0), InputError); }

TEST(NeighborHeap, RandomMultisetsMatchSort) {
    gknn_test::Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 1 + rng.index(20);
        const std::size_t n = rng.index(100);
        std::vector<WeightedId> all;
        NeighborHeap heap(k);
        for (std::size_t i = 0; i < n; ++i) {
            // Coarse weights so ties are common.
            const WeightedId e{static_cast<std::uint32_t>(rng.index(1000)), static_cast<double>(rng.index(10))};
            all.push_back(e);
            heap.offer(e.id, e.weight);
        }
        std::sort(all.begin(), all.end(), ranks_before);
        all.resize(std::min(k, all.size()));
        const auto kept = heap.sorted();
        ASSERT_EQ(kept, all);
        if (heap.full()) {
            EXPECT_EQ(heap.worst_weight(), kept.back().weight);
        }
    }
}
