#pragma once

#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gknn/geometry.hpp"
#include "gknn/metrics.hpp"
#include "gknn/reductions.hpp"

namespace gknn {

/// A bit string of length 1..3, most significant (x) bit first.
class BitString {
public:
    /// Throws InputError unless `bits` is 1..3 characters of '0'/'1'.
    explicit BitString(std::string_view bits);

    /// Left-padded to three bits.
    [[nodiscard]] const std::string& padded() const { return padded_; }
    [[nodiscard]] unsigned value() const;

    friend bool operator==(const BitString&, const BitString&) = default;

private:
    std::string padded_;
};

/// A point in the domain space of some metric, before any transform.
using SourcePoint = std::variant<Point3, Point2, BitString>;

enum class TransformKind {
    Normalize,      // p -> p / |p|
    Embed2D,        // (x, y) -> (x, y, 0); a Point3 input has its z zeroed
    HammingVertex,  // bit string -> unit cube vertex
};

/// Order-preserving map from a source metric into 3D space.
struct Transform {
    TransformKind kind;
};

[[nodiscard]] Point3 normalize(const Point3& p);
[[nodiscard]] Point3 embed_2d(const Point2& p);
[[nodiscard]] Point3 hamming_vertex(const BitString& bits);

/// Throws InputError when the input variant does not fit the transform or
/// Normalize meets a zero (or non-finite) vector.
[[nodiscard]] Point3 apply_transform(const Transform& t, const SourcePoint& p);

/// Applies transforms left to right; each one after the first sees the previous Point3 output.
[[nodiscard]] Point3 apply_chain(std::span<const Transform> chain, const SourcePoint& p);

/// apply_chain over a whole set. Errors name the offending index; `what` labels the set.
[[nodiscard]] std::vector<Point3> transform_all(std::span<const Transform> chain, std::span<const SourcePoint> points,
                                                std::string_view what = "point");

/// How a transform-backed metric is searched: which transforms, and which native
/// metric runs in the transformed space.
struct TransformPlan {
    std::vector<Transform> chain;
    MetricSpec pipeline_metric;
};

/// Cosine, Angular -> Normalize then L2; Euclid2D -> Embed2D then L2; Hamming3 -> HammingVertex then L1.
/// Native metrics get an empty chain. Never throws.
[[nodiscard]] TransformPlan plan_for(const MetricSpec& source);

/// Converts a radius in source-metric units to the transformed space. For
/// unit vectors, angle a has chord 2 sin(a/2) and cosine distance c has chord sqrt(2c).
[[nodiscard]] double to_pipeline_radius(const MetricSpec& source, double radius);

/// Converts a transformed-space distance back to source-metric units.
[[nodiscard]] double from_pipeline_distance(const MetricSpec& source, double distance);

/// Cosine similarity of two unit vectors separated by the given chord: 1 - chord^2 / 2.
[[nodiscard]] double cosine_similarity_from_chord(double chord);

/// Index over transformed points answering queries in the source metric.
///
/// The config carries the source metric and a radius in source units. It is
/// resolved to the pipeline metric, and data and queries both pass through the
/// same transform chain. Reported distances are converted back to source units.
class TransformedIndex {
public:
    TransformedIndex(std::span<const SourcePoint> data, const ReductionConfig& source_config);
    /// Explicit composition: any chain followed by any native-metric reduction.
    /// Distances are reported in pipeline units.
    TransformedIndex(std::span<const SourcePoint> data, std::vector<Transform> chain, const ReductionConfig& pipeline_config);

    [[nodiscard]] QueryResult query(const SourcePoint& q) const;
    [[nodiscard]] std::vector<QueryResult> query_batch(std::span<const SourcePoint> queries, std::size_t threads = 1) const;

    [[nodiscard]] const LpIndex& pipeline() const { return index_; }
    [[nodiscard]] std::span<const Transform> chain() const { return chain_; }
    [[nodiscard]] const MetricSpec& source_metric() const { return source_metric_; }

private:
    [[nodiscard]] QueryResult to_source_units(QueryResult result) const;

    std::vector<Transform> chain_;
    MetricSpec source_metric_;
    LpIndex index_;
};

/// Builds a TransformedIndex and answers every query in order.
[[nodiscard]] std::vector<QueryResult> transformed_query(std::span<const SourcePoint> data,
                                                         std::span<const SourcePoint> queries,
                                                         const ReductionConfig& source_config);

}  // namespace gknn
