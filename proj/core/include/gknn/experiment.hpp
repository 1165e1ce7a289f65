#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gknn/dataset.hpp"
#include "gknn/oracle.hpp"
#include "gknn/reductions.hpp"

namespace gknn {

struct ExperimentConfig {
    /// metric is the source metric; radius is in source units.
    ReductionConfig reduction;
    std::size_t repeats = 1;
    std::size_t threads = 1;
    std::optional<std::uint64_t> seed;  // echoed only
};

struct QueryReport {
    std::vector<Neighbor> neighbors;
    double recall = 0.0;
    std::size_t hit_count = 0;
    std::size_t candidate_count = 0;
    std::size_t in_range_count = 0;
    std::size_t node_visits = 0;
};

struct RunReport {
    ExperimentConfig config;
    std::size_t data_count = 0;
    std::vector<double> build_ms;   // one sample per repeat
    std::vector<double> search_ms;  // one sample per repeat, whole query batch
    std::vector<QueryReport> queries;
    double mean_recall = 0.0;
    std::size_t recall_excluded = 0;
    double mean_hit_count = 0.0;
    double mean_candidate_count = 0.0;
    double mean_in_range_count = 0.0;
    std::size_t total_node_visits = 0;

    [[nodiscard]] double mean_build_ms() const;
    [[nodiscard]] double mean_search_ms() const;

    /// Versioned JSON document. Wall-clock measurements live only under "timings".
    [[nodiscard]] std::string to_json(int indent = -1) const;
};

/// Builds the index `repeats` times and runs every query each time. Recall is
/// measured against the exact unbounded top-k; pass `truth` to reuse a cached
/// oracle (it must cover every query with at least k entries per row, or all
/// n when n < k). Throws InvariantError if repeats disagree.
[[nodiscard]] RunReport run_experiment(const Dataset& dataset, const ExperimentConfig& config,
                                       const GroundTruth* truth = nullptr);

enum class SweepAxis { Radius, K, Queries };

[[nodiscard]] SweepAxis parse_sweep_axis(std::string_view text);
[[nodiscard]] std::string to_string(SweepAxis axis);

/// One run per value (values must be strictly increasing). K and query counts
/// must be whole numbers. The oracle is computed once for the largest k / query count.
[[nodiscard]] std::vector<RunReport> sweep(const Dataset& dataset, const ExperimentConfig& base, SweepAxis axis,
                                           std::span<const double> values);

/// JSON array of run reports.
[[nodiscard]] std::string sweep_to_json(std::span<const RunReport> reports, SweepAxis axis, int indent = -1);

}  // namespace gknn
