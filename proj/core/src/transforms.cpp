#include "gknn/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gknn/errors.hpp"

namespace gknn {

namespace {

ReductionConfig resolve(const ReductionConfig& source) {
    if (!std::isfinite(source.radius) || source.radius <= 0.0) {
        throw InputError("radius must be finite and > 0");
    }
    ReductionConfig pipeline = source;
    pipeline.metric = plan_for(source.metric).pipeline_metric;
    pipeline.radius = to_pipeline_radius(source.metric, source.radius);
    return pipeline;
}

const char* kind_name(TransformKind kind) {
    switch (kind) {
        case TransformKind::Normalize: return "normalize";
        case TransformKind::Embed2D: return "embed2d";
        case TransformKind::HammingVertex: return "hamming-vertex";
    }
    return "unknown";
}

}  // namespace

BitString::BitString(std::string_view bits) {
    if (bits.empty() || bits.size() > 3 ||
        !std::all_of(bits.begin(), bits.end(), [](char c) { return c == '0' || c == '1'; })) {
        throw InputError("bit string must be 1 to 3 characters of 0/1, got '" + std::string(bits) + "'");
    }
    padded_ = std::string(3 - bits.size(), '0') + std::string(bits);
}

unsigned BitString::value() const {
    unsigned v = 0;
    for (char c : padded_) v = (v << 1) | static_cast<unsigned>(c == '1');
    return v;
}

Point3 normalize(const Point3& p) {
    const double norm = std::sqrt(dot(p, p));
    if (!std::isfinite(norm) || norm == 0.0) {
        throw InputError("cannot normalize a zero or non-finite vector");
    }
    return {p.x / norm, p.y / norm, p.z / norm};
}

Point3 embed_2d(const Point2& p) {
    return {p.x, p.y, 0.0};
}

Point3 hamming_vertex(const BitString& bits) {
    const std::string& b = bits.padded();
    return {b[0] == '1' ? 1.0 : 0.0, b[1] == '1' ? 1.0 : 0.0, b[2] == '1' ? 1.0 : 0.0};
}

Point3 apply_transform(const Transform& t, const SourcePoint& p) {
    switch (t.kind) {
        case TransformKind::Normalize:
            if (const auto* v = std::get_if<Point3>(&p)) return normalize(*v);
            break;
        case TransformKind::Embed2D:
            if (const auto* v = std::get_if<Point2>(&p)) return embed_2d(*v);
            if (const auto* v = std::get_if<Point3>(&p)) return {v->x, v->y, 0.0};
            break;
        case TransformKind::HammingVertex:
            if (const auto* v = std::get_if<BitString>(&p)) return hamming_vertex(*v);
            break;
    }
    throw InputError(std::string("transform '") + kind_name(t.kind) + "' does not accept this kind of point");
}

Point3 apply_chain(std::span<const Transform> chain, const SourcePoint& p) {
    if (chain.empty()) {
        if (const auto* v = std::get_if<Point3>(&p)) return *v;
        throw InputError("a native metric needs 3D points");
    }
    Point3 out = apply_transform(chain.front(), p);
    for (const Transform& t : chain.subspan(1)) out = apply_transform(t, SourcePoint{out});
    return out;
}

std::vector<Point3> transform_all(std::span<const Transform> chain, std::span<const SourcePoint> points,
                                  std::string_view what) {
    std::vector<Point3> out;
    out.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        try {
            out.push_back(apply_chain(chain, points[i]));
        } catch (const InputError& e) {
            throw InputError(std::string(what) + " " + std::to_string(i) + ": " + e.what());
        }
        if (!out.back().is_finite()) {
            throw InputError(std::string(what) + " " + std::to_string(i) + " is not finite");
        }
    }
    return out;
}

TransformPlan plan_for(const MetricSpec& source) {
    switch (source.kind()) {
        case MetricKind::Cosine:
        case MetricKind::Angular: return {{Transform{TransformKind::Normalize}}, MetricSpec::l2()};
        case MetricKind::Euclid2D: return {{Transform{TransformKind::Embed2D}}, MetricSpec::l2()};
        case MetricKind::Hamming3: return {{Transform{TransformKind::HammingVertex}}, MetricSpec::l1()};
        case MetricKind::Lp:
        case MetricKind::LInf: break;
    }
    return {{}, source};
}

double to_pipeline_radius(const MetricSpec& source, double radius) {
    switch (source.kind()) {
        case MetricKind::Angular: return 2.0 * std::sin(std::min(radius, std::numbers::pi) / 2.0);
        case MetricKind::Cosine: return std::sqrt(2.0 * std::min(radius, 2.0));
        default: return radius;
    }
}

double from_pipeline_distance(const MetricSpec& source, double distance) {
    switch (source.kind()) {
        case MetricKind::Angular: return 2.0 * std::asin(std::min(distance / 2.0, 1.0));
        case MetricKind::Cosine: return distance * distance / 2.0;
        default: return distance;
    }
}

double cosine_similarity_from_chord(double chord) {
    return 1.0 - chord * chord / 2.0;
}

TransformedIndex::TransformedIndex(std::span<const SourcePoint> data, const ReductionConfig& source_config)
    : chain_(plan_for(source_config.metric).chain), source_metric_(source_config.metric),
      index_(transform_all(chain_, data, "data point"), resolve(source_config)) {}

TransformedIndex::TransformedIndex(std::span<const SourcePoint> data, std::vector<Transform> chain,
                                   const ReductionConfig& pipeline_config)
    : chain_(std::move(chain)), source_metric_(pipeline_config.metric),
      index_(transform_all(chain_, data, "data point"), pipeline_config) {}

QueryResult TransformedIndex::to_source_units(QueryResult result) const {
    for (Neighbor& n : result.neighbors) n.distance = from_pipeline_distance(source_metric_, n.distance);
    return result;
}

QueryResult TransformedIndex::query(const SourcePoint& q) const {
    Point3 mapped;
    try {
        mapped = apply_chain(chain_, q);
    } catch (const InputError& e) {
        throw InputError(std::string("query: ") + e.what());
    }
    return to_source_units(index_.query(mapped));
}

std::vector<QueryResult> TransformedIndex::query_batch(std::span<const SourcePoint> queries, std::size_t threads) const {
    const std::vector<Point3> mapped = transform_all(chain_, queries, "query point");
    std::vector<QueryResult> results = index_.query_batch(mapped, threads);
    for (QueryResult& r : results) r = to_source_units(std::move(r));
    return results;
}

std::vector<QueryResult> transformed_query(std::span<const SourcePoint> data, std::span<const SourcePoint> queries,
                                           const ReductionConfig& source_config) {
    return TransformedIndex(data, source_config).query_batch(queries);
}

}  // namespace gknn
