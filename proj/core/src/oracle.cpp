#include "gknn/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_set>

#include <json.hpp>

#include "gknn/errors.hpp"

namespace gknn {

namespace {

const Point3& as_point3(const SourcePoint& p) {
    if (const auto* v = std::get_if<Point3>(&p)) return *v;
    throw InputError("metric expects 3D points");
}

Point2 as_point2(const SourcePoint& p) {
    if (const auto* v = std::get_if<Point2>(&p)) return *v;
    if (const auto* v = std::get_if<Point3>(&p)) return {v->x, v->y};
    throw InputError("euclid2d expects 2D points");
}

const BitString& as_bits(const SourcePoint& p) {
    if (const auto* v = std::get_if<BitString>(&p)) return *v;
    throw InputError("hamming3 expects bit strings");
}

double unit_dot(const Point3& a, const Point3& b) {
    const double na = std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z);
    const double nb = std::sqrt(b.x * b.x + b.y * b.y + b.z * b.z);
    if (na == 0.0 || nb == 0.0) throw InputError("cosine/angular distance is undefined for the zero vector");
    return (a.x / na) * (b.x / nb) + (a.y / na) * (b.y / nb) + (a.z / na) * (b.z / nb);
}

std::vector<Neighbor> select_top_k(std::vector<Neighbor> all, std::size_t k) {
    const auto by_distance = [](const Neighbor& a, const Neighbor& b) {
        return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
    };
    const std::size_t keep = std::min(k, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), by_distance);
    all.resize(keep);
    return all;
}

template <typename Distance>
std::vector<Neighbor> scan(std::size_t n, std::size_t k, std::optional<double> radius, Distance&& distance) {
    if (k == 0) throw InputError("brute_force_knn: k must be positive");
    std::vector<Neighbor> all;
    all.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = distance(i);
        if (radius && !(d <= *radius)) continue;
        all.push_back({static_cast<std::uint32_t>(i), d});
    }
    return select_top_k(std::move(all), k);
}

}  // namespace

double source_distance(const MetricSpec& metric, const SourcePoint& a, const SourcePoint& b) {
    switch (metric.kind()) {
        case MetricKind::Lp: {
            const Point3& u = as_point3(a);
            const Point3& v = as_point3(b);
            const double p = metric.p();
            const double sum = std::pow(std::abs(u.x - v.x), p) + std::pow(std::abs(u.y - v.y), p) +
                               std::pow(std::abs(u.z - v.z), p);
            return std::pow(sum, 1.0 / p);
        }
        case MetricKind::LInf: {
            const Point3& u = as_point3(a);
            const Point3& v = as_point3(b);
            return std::max({std::abs(u.x - v.x), std::abs(u.y - v.y), std::abs(u.z - v.z)});
        }
        case MetricKind::Cosine: return 1.0 - unit_dot(as_point3(a), as_point3(b));
        case MetricKind::Angular: return std::acos(std::clamp(unit_dot(as_point3(a), as_point3(b)), -1.0, 1.0));
        case MetricKind::Euclid2D: {
            const Point2 u = as_point2(a);
            const Point2 v = as_point2(b);
            return std::hypot(u.x - v.x, u.y - v.y);
        }
        case MetricKind::Hamming3:
            return static_cast<double>(std::popcount(as_bits(a).value() ^ as_bits(b).value()));
    }
    throw InvariantError("source_distance: unhandled metric");
}

std::vector<Neighbor> brute_force_knn(std::span<const SourcePoint> points, const SourcePoint& q,
                                      const MetricSpec& metric, std::size_t k, std::optional<double> radius) {
    return scan(points.size(), k, radius, [&](std::size_t i) { return source_distance(metric, points[i], q); });
}

std::vector<Neighbor> brute_force_knn(std::span<const Point3> points, const Point3& q, const MetricSpec& metric,
                                      std::size_t k, std::optional<double> radius) {
    const SourcePoint query{q};
    return scan(points.size(), k, radius,
                [&](std::size_t i) { return source_distance(metric, SourcePoint{points[i]}, query); });
}

GroundTruth GroundTruth::compute(std::span<const SourcePoint> points, std::span<const SourcePoint> queries,
                                 const MetricSpec& metric, std::size_t k, std::optional<double> radius) {
    GroundTruth truth{metric, k, radius, {}};
    truth.rows.reserve(queries.size());
    for (const SourcePoint& q : queries) truth.rows.push_back(brute_force_knn(points, q, metric, k, radius));
    return truth;
}

std::string GroundTruth::to_json() const {
    nlohmann::json rows_json = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json row_json = nlohmann::json::array();
        for (const Neighbor& n : row) row_json.push_back({{"id", n.id}, {"distance", n.distance}});
        rows_json.push_back(std::move(row_json));
    }
    nlohmann::json out = {
        {"schema", "gknn.ground_truth/1"},
        {"metric", metric.to_string()},
        {"k", k},
        {"radius", radius ? nlohmann::json(*radius) : nlohmann::json(nullptr)},
        {"rows", std::move(rows_json)},
    };
    return out.dump();
}

GroundTruth GroundTruth::from_json(std::string_view text) {
    try {
        const nlohmann::json in = nlohmann::json::parse(text);
        if (in.at("schema") != "gknn.ground_truth/1") throw InputError("unsupported ground truth schema");
        GroundTruth truth;
        truth.metric = MetricSpec::parse(in.at("metric").get<std::string>());
        truth.k = in.at("k").get<std::size_t>();
        if (!in.at("radius").is_null()) truth.radius = in.at("radius").get<double>();
        for (const auto& row_json : in.at("rows")) {
            std::vector<Neighbor> row;
            for (const auto& n : row_json) row.push_back({n.at("id").get<std::uint32_t>(), n.at("distance").get<double>()});
            truth.rows.push_back(std::move(row));
        }
        return truth;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed ground truth: ") + e.what());
    }
}

double recall(std::span<const Neighbor> result, std::span<const Neighbor> truth) {
    if (truth.empty()) throw InputError("recall: empty ground truth");
    std::unordered_set<std::uint32_t> truth_ids;
    for (const Neighbor& n : truth) truth_ids.insert(n.id);
    std::unordered_set<std::uint32_t> seen;
    std::size_t common = 0;
    for (const Neighbor& n : result) {
        if (truth_ids.contains(n.id) && seen.insert(n.id).second) ++common;
    }
    return static_cast<double>(common) / static_cast<double>(truth_ids.size());
}

RecallSummary aggregate_recall(std::span<const std::vector<Neighbor>> results,
                               std::span<const std::vector<Neighbor>> truths) {
    if (results.empty()) throw InputError("aggregate_recall: no queries");
    if (results.size() != truths.size()) throw InputError("aggregate_recall: result and truth counts differ");
    RecallSummary summary;
    double total = 0.0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (truths[i].empty()) {
            ++summary.excluded;
            continue;
        }
        total += recall(results[i], truths[i]);
        ++summary.counted;
    }
    if (summary.counted == 0) throw InputError("aggregate_recall: every ground truth row is empty");
    summary.mean = total / static_cast<double>(summary.counted);
    return summary;
}

double aggregate_recall(std::span<const double> per_query) {
    if (per_query.empty()) throw InputError("aggregate_recall: no queries");
    double total = 0.0;
    for (double r : per_query) total += r;
    return total / static_cast<double>(per_query.size());
}

}  // namespace gknn
