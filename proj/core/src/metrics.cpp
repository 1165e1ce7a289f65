#include "gknn/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gknn/errors.hpp"

namespace gknn {

namespace {

void require_valid_exponent(double p) {
    if (!std::isfinite(p) || p < 1.0) {
        std::ostringstream msg;
        msg << "Lp exponent must be finite and >= 1, got " << p;
        throw InputError(msg.str());
    }
}

void require_native(const MetricSpec& metric, const char* where) {
    if (!metric.is_native()) {
        throw InputError(std::string(where) + ": metric '" + metric.to_string() +
                         "' has no inclusion radius; resolve it through a transform first");
    }
}

double pow_abs(double delta, double p) {
    const double a = std::abs(delta);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

}  // namespace

MetricSpec MetricSpec::lp(double p) {
    require_valid_exponent(p);
    return MetricSpec(MetricKind::Lp, p);
}

MetricSpec MetricSpec::parse(std::string_view text) {
    if (text == "linf") return linf();
    if (text == "cosine") return cosine();
    if (text == "angular") return angular();
    if (text == "euclid2d") return euclid2d();
    if (text == "hamming3") return hamming3();
    if (text.starts_with("lp:")) {
        const std::string_view number = text.substr(3);
        double p = 0.0;
        const auto [end, ec] = std::from_chars(number.data(), number.data() + number.size(), p);
        if (ec != std::errc() || end != number.data() + number.size() || number.empty()) {
            throw InputError("invalid Lp exponent in metric '" + std::string(text) + "'");
        }
        return lp(p);
    }
    throw InputError("unknown metric '" + std::string(text) +
                     "' (expected lp:<p>, linf, cosine, angular, euclid2d or hamming3)");
}

std::string MetricSpec::to_string() const {
    switch (kind_) {
        case MetricKind::Lp: {
            char buf[64];
            const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p_);
            return "lp:" + std::string(buf, end);
        }
        case MetricKind::LInf: return "linf";
        case MetricKind::Cosine: return "cosine";
        case MetricKind::Angular: return "angular";
        case MetricKind::Euclid2D: return "euclid2d";
        case MetricKind::Hamming3: return "hamming3";
    }
    return "unknown";
}

double lp_weight(const Point3& a, const Point3& b, double p) {
    require_valid_exponent(p);
    return pow_abs(a.x - b.x, p) + pow_abs(a.y - b.y, p) + pow_abs(a.z - b.z, p);
}

double linf_weight(const Point3& a, const Point3& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)});
}

double metric_weight(const MetricSpec& metric, const Point3& a, const Point3& b) {
    require_native(metric, "metric_weight");
    if (metric.kind() == MetricKind::LInf) return linf_weight(a, b);
    return lp_weight(a, b, metric.p());
}

double weight_bound(const MetricSpec& metric, double r) {
    require_native(metric, "weight_bound");
    if (metric.kind() == MetricKind::LInf) return r;
    return pow_abs(r, metric.p());
}

double weight_to_distance(const MetricSpec& metric, double weight) {
    require_native(metric, "weight_to_distance");
    if (metric.kind() == MetricKind::LInf || metric.p() == 1.0) return weight;
    if (metric.p() == 2.0) return std::sqrt(weight);
    return std::pow(weight, 1.0 / metric.p());
}

double inclusion_radius(const MetricSpec& metric, double r, int dimension) {
    require_native(metric, "inclusion_radius");
    if (!std::isfinite(r) || r <= 0.0) {
        std::ostringstream msg;
        msg << "inclusion_radius: radius must be finite and > 0, got " << r;
        throw InputError(msg.str());
    }
    if (dimension != 2 && dimension != 3) {
        throw InputError("inclusion_radius: dimension must be 2 or 3, got " + std::to_string(dimension));
    }
    const double d = static_cast<double>(dimension);
    if (metric.kind() == MetricKind::LInf) return r * std::sqrt(d);
    if (metric.p() <= 2.0) return r;
    return r * std::pow(d, 0.5 - 1.0 / metric.p());
}

bool in_lp_ball(const Point3& q, const Point3& center, const MetricSpec& metric, double r) {
    return metric_weight(metric, q, center) <= weight_bound(metric, r);
}

}  // namespace gknn
