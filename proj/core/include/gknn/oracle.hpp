#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gknn/metrics.hpp"
#include "gknn/reductions.hpp"
#include "gknn/transforms.hpp"

namespace gknn {

/// Exact distance under `metric`, computed straight from its definition
/// without any transform or index. Cosine is 1 - cosine similarity and
/// Angular is in radians.
[[nodiscard]] double source_distance(const MetricSpec& metric, const SourcePoint& a, const SourcePoint& b);

/// The k nearest points by exhaustive scan, sorted by (distance, id). With a
/// radius bound only points at distance <= bound qualify. k > n returns all n.
[[nodiscard]] std::vector<Neighbor> brute_force_knn(std::span<const SourcePoint> points, const SourcePoint& q,
                                                    const MetricSpec& metric, std::size_t k,
                                                    std::optional<double> radius = std::nullopt);
[[nodiscard]] std::vector<Neighbor> brute_force_knn(std::span<const Point3> points, const Point3& q,
                                                    const MetricSpec& metric, std::size_t k,
                                                    std::optional<double> radius = std::nullopt);

/// Exact neighbor lists for a batch of queries.
struct GroundTruth {
    MetricSpec metric = MetricSpec::l2();
    std::size_t k = 0;
    std::optional<double> radius;
    std::vector<std::vector<Neighbor>> rows;

    [[nodiscard]] static GroundTruth compute(std::span<const SourcePoint> points, std::span<const SourcePoint> queries,
                                             const MetricSpec& metric, std::size_t k,
                                             std::optional<double> radius = std::nullopt);

    [[nodiscard]] std::string to_json() const;
    /// Throws InputError on malformed content.
    [[nodiscard]] static GroundTruth from_json(std::string_view text);
};

/// |result ids ∩ truth ids| / |truth ids|. Throws InputError for an empty truth.
[[nodiscard]] double recall(std::span<const Neighbor> result, std::span<const Neighbor> truth);

struct RecallSummary {
    double mean = 0.0;
    std::size_t counted = 0;   // queries with a non-empty truth
    std::size_t excluded = 0;  // queries whose truth was empty
};

/// Per-query mean of recall(). Throws InputError for empty or mismatched inputs,
/// or when every truth row is empty.
[[nodiscard]] RecallSummary aggregate_recall(std::span<const std::vector<Neighbor>> results,
                                             std::span<const std::vector<Neighbor>> truths);

/// Mean of already computed per-query recalls. Throws InputError for an empty input.
[[nodiscard]] double aggregate_recall(std::span<const double> per_query);

}  // namespace gknn
