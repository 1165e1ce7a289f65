#include "gknn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "gknn/errors.hpp"
#include "gknn/transforms.hpp"

namespace gknn {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

double mean_of(std::span<const double> v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

bool same_neighbors(std::span<const QueryResult> a, std::span<const QueryResult> b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const QueryResult& x, const QueryResult& y) { return x.neighbors == y.neighbors; });
}

GroundTruth truncated(const GroundTruth& full, std::size_t k, std::size_t queries) {
    GroundTruth out{full.metric, k, full.radius, {}};
    for (std::size_t i = 0; i < queries; ++i) {
        const auto& row = full.rows.at(i);
        out.rows.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(std::min(k, row.size())));
    }
    return out;
}

std::size_t whole(double v, const char* what) {
    if (!(v >= 1.0) || v != std::floor(v)) {
        throw InputError(std::string("sweep: ") + what + " values must be positive integers");
    }
    return static_cast<std::size_t>(v);
}

nlohmann::json neighbor_json(const Neighbor& n, const MetricSpec& metric) {
    nlohmann::json j = {{"id", n.id}, {"distance", n.distance}};
    if (metric.kind() == MetricKind::Cosine) j["similarity"] = 1.0 - n.distance;
    return j;
}

nlohmann::json report_json(const RunReport& r) {
    const ReductionConfig& c = r.config.reduction;
    nlohmann::json queries = nlohmann::json::array();
    for (std::size_t i = 0; i < r.queries.size(); ++i) {
        const QueryReport& q = r.queries[i];
        nlohmann::json neighbors = nlohmann::json::array();
        for (const Neighbor& n : q.neighbors) neighbors.push_back(neighbor_json(n, c.metric));
        queries.push_back({
            {"query", i},
            {"recall", q.recall},
            {"hit_count", q.hit_count},
            {"candidate_count", q.candidate_count},
            {"in_range_count", q.in_range_count},
            {"node_visits", q.node_visits},
            {"neighbors", std::move(neighbors)},
        });
    }
    return {
        {"schema", "gknn.report/1"},
        {"config",
         {
             {"metric", c.metric.to_string()},
             {"radius", c.radius},
             {"k", c.k},
             {"enhanced", c.enhanced},
             {"leaf_size", c.leaf_size},
             {"dimension", c.dimension},
             {"repeats", r.config.repeats},
             {"seed", r.config.seed ? nlohmann::json(*r.config.seed) : nlohmann::json(nullptr)},
         }},
        {"dataset", {{"data_count", r.data_count}, {"query_count", r.queries.size()}}},
        {"recall", {{"aggregation", "per-query-mean"}, {"mean", r.mean_recall}, {"excluded", r.recall_excluded}}},
        {"mean_hit_count", r.mean_hit_count},
        {"mean_candidate_count", r.mean_candidate_count},
        {"mean_in_range_count", r.mean_in_range_count},
        {"total_node_visits", r.total_node_visits},
        {"queries", std::move(queries)},
        {"timings",
         {
             {"build_ms", r.build_ms},
             {"search_ms", r.search_ms},
             {"mean_build_ms", r.mean_build_ms()},
             {"mean_search_ms", r.mean_search_ms()},
         }},
    };
}

}  // namespace

double RunReport::mean_build_ms() const { return mean_of(build_ms); }
double RunReport::mean_search_ms() const { return mean_of(search_ms); }

std::string RunReport::to_json(int indent) const { return report_json(*this).dump(indent); }

RunReport run_experiment(const Dataset& dataset, const ExperimentConfig& config, const GroundTruth* truth) {
    if (config.repeats == 0) throw InputError("repeats must be positive");
    if (dataset.queries.empty()) throw InputError("no query points");
    config.reduction.validate_source();

    GroundTruth computed;
    if (truth == nullptr) {
        computed = GroundTruth::compute(dataset.data, dataset.queries, config.reduction.metric, config.reduction.k);
        truth = &computed;
    }
    if (truth->rows.size() < dataset.queries.size()) throw InputError("ground truth covers fewer queries than requested");
    if (truth->metric != config.reduction.metric) throw InputError("ground truth was computed for a different metric");
    if (truth->k < config.reduction.k || truth->radius) {
        throw InputError("ground truth must be an unbounded top-k with k >= " + std::to_string(config.reduction.k));
    }
    const GroundTruth oracle = truncated(*truth, config.reduction.k, dataset.queries.size());

    RunReport report;
    report.config = config;
    report.data_count = dataset.data.size();

    std::vector<QueryResult> first;
    for (std::size_t rep = 0; rep < config.repeats; ++rep) {
        const auto build_start = Clock::now();
        const TransformedIndex index(dataset.data, config.reduction);
        report.build_ms.push_back(elapsed_ms(build_start));

        const auto search_start = Clock::now();
        std::vector<QueryResult> results = index.query_batch(dataset.queries, config.threads);
        report.search_ms.push_back(elapsed_ms(search_start));

        if (rep == 0) {
            first = std::move(results);
        } else if (!same_neighbors(first, results)) {
            throw InvariantError("run_experiment: repeat " + std::to_string(rep) + " returned different neighbors");
        }
    }

    std::vector<std::vector<Neighbor>> found;
    found.reserve(first.size());
    for (const QueryResult& r : first) found.push_back(r.neighbors);
    const RecallSummary summary = aggregate_recall(found, oracle.rows);
    report.mean_recall = summary.mean;
    report.recall_excluded = summary.excluded;

    double hits = 0.0, candidates = 0.0, in_range = 0.0;
    for (std::size_t i = 0; i < first.size(); ++i) {
        QueryResult& r = first[i];
        const double q_recall = oracle.rows[i].empty() ? 0.0 : recall(r.neighbors, oracle.rows[i]);
        if (r.hit_count < r.candidate_count || r.candidate_count < r.in_range_count ||
            r.in_range_count < r.neighbors.size()) {
            throw InvariantError("run_experiment: filter stage counts are not nested for query " + std::to_string(i));
        }
        hits += static_cast<double>(r.hit_count);
        candidates += static_cast<double>(r.candidate_count);
        in_range += static_cast<double>(r.in_range_count);
        report.total_node_visits += r.node_visits;
        report.queries.push_back(
            {std::move(r.neighbors), q_recall, r.hit_count, r.candidate_count, r.in_range_count, r.node_visits});
    }
    const auto count = static_cast<double>(report.queries.size());
    report.mean_hit_count = hits / count;
    report.mean_candidate_count = candidates / count;
    report.mean_in_range_count = in_range / count;
    return report;
}

SweepAxis parse_sweep_axis(std::string_view text) {
    if (text == "radius") return SweepAxis::Radius;
    if (text == "k") return SweepAxis::K;
    if (text == "queries") return SweepAxis::Queries;
    throw InputError("unknown sweep axis '" + std::string(text) + "' (expected radius, k or queries)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Radius: return "radius";
        case SweepAxis::K: return "k";
        case SweepAxis::Queries: return "queries";
    }
    return "unknown";
}

std::vector<RunReport> sweep(const Dataset& dataset, const ExperimentConfig& base, SweepAxis axis,
                             std::span<const double> values) {
    if (values.empty()) throw InputError("sweep: no values");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) throw InputError("sweep: values must be strictly increasing");
    }

    std::size_t max_k = base.reduction.k;
    std::size_t max_queries = dataset.queries.size();
    if (axis == SweepAxis::K) max_k = whole(values.back(), "k");
    if (axis == SweepAxis::Queries) {
        max_queries = whole(values.back(), "query count");
        if (max_queries > dataset.queries.size()) throw InputError("sweep: not enough query points");
    }
    const std::span<const SourcePoint> all_queries(dataset.queries.data(), max_queries);
    const GroundTruth truth = GroundTruth::compute(dataset.data, all_queries, base.reduction.metric, max_k);

    std::vector<RunReport> reports;
    for (double value : values) {
        ExperimentConfig config = base;
        Dataset slice{dataset.data, dataset.queries};
        switch (axis) {
            case SweepAxis::Radius: config.reduction.radius = value; break;
            case SweepAxis::K: config.reduction.k = whole(value, "k"); break;
            case SweepAxis::Queries: slice.queries.resize(whole(value, "query count")); break;
        }
        reports.push_back(run_experiment(slice, config, &truth));
    }
    return reports;
}

std::string sweep_to_json(std::span<const RunReport> reports, SweepAxis axis, int indent) {
    nlohmann::json out = nlohmann::json::array();
    for (const RunReport& r : reports) {
        nlohmann::json j = report_json(r);
        j["sweep_axis"] = to_string(axis);
        out.push_back(std::move(j));
    }
    return out.dump(indent);
}

}  // namespace gknn
