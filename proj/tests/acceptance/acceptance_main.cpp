// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.
//
//   gknn_acceptance [--cli PATH_TO_GKNN]

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gknn/bvh.hpp"
#include "gknn/experiment.hpp"
#include "gknn/metrics.hpp"
#include "gknn/oracle.hpp"
#include "gknn/reductions.hpp"
#include "gknn/transforms.hpp"
#include "test_support.hpp"

using namespace gknn;
using gknn_test::Rng;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

std::string cli_path;

ReductionConfig config_for(MetricSpec metric, double r, std::size_t k, bool enhanced) {
    ReductionConfig c;
    c.metric = metric;
    c.radius = r;
    c.k = k;
    c.enhanced = enhanced;
    return c;
}

std::vector<std::uint32_t> ids_of(const std::vector<Neighbor>& ns) {
    std::vector<std::uint32_t> out;
    for (const auto& n : ns) out.push_back(n.id);
    return out;
}

// 1 and 2 share the same runs.
struct EquivalenceRuns {
    bool computed = false;
    Outcome exactness;
    Outcome plain_enhanced;
    double seconds = 0.0;
};

EquivalenceRuns& equivalence_runs() {
    static EquivalenceRuns runs;
    if (runs.computed) return runs;
    runs.computed = true;

    constexpr int kDatasets = 20;
    constexpr std::size_t kN = 10000, kQueries = 100, kK = 10;
    const std::vector<MetricSpec> metrics = {MetricSpec::l1(), MetricSpec::l2(), MetricSpec::lp(3), MetricSpec::linf()};
    std::vector<double> plain_cand(metrics.size(), 0.0), enhanced_cand(metrics.size(), 0.0);
    std::size_t queries_checked = 0, identical = 0;

    const auto start = std::chrono::steady_clock::now();
    for (int ds = 0; ds < kDatasets; ++ds) {
        Rng rng(1000 + ds);
        const auto data = gknn_test::uniform_points(rng, kN);
        const auto queries = gknn_test::uniform_points(rng, kQueries);
        for (std::size_t m = 0; m < metrics.size(); ++m) {
            const MetricSpec& metric = metrics[m];
            std::vector<std::vector<Neighbor>> truth;
            double kth_max = 0.0;
            for (const Point3& q : queries) {
                truth.push_back(brute_force_knn(data, q, metric, kK));
                kth_max = std::max(kth_max, truth.back().back().distance);
            }
            // Every query's ball then holds at least k points.
            const double r = kth_max * 1.05;
            const LpIndex plain(data, config_for(metric, r, kK, false));
            const LpIndex enhanced(data, config_for(metric, r, kK, true));
            for (std::size_t i = 0; i < queries.size(); ++i) {
                const QueryResult a = plain.query(queries[i]);
                const QueryResult b = enhanced.query(queries[i]);
                ++queries_checked;
                for (const QueryResult* res : {&a, &b}) {
                    if (ids_of(res->neighbors) != ids_of(truth[i]) || recall(res->neighbors, truth[i]) != 1.0) {
                        runs.exactness.fail("dataset " + std::to_string(ds) + " metric " + metric.to_string() +
                                            " query " + std::to_string(i) + " differs from brute force");
                    }
                }
                if (a.neighbors == b.neighbors) ++identical;
                plain_cand[m] += static_cast<double>(a.candidate_count);
                enhanced_cand[m] += static_cast<double>(b.candidate_count);
            }
        }
    }
    runs.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (runs.seconds >= 60.0) runs.exactness.fail("runtime " + std::to_string(runs.seconds) + " s exceeds 60 s");
    if (runs.exactness.pass) {
        runs.exactness.detail = std::to_string(queries_checked) + " query/metric pairs x {plain, enhanced} exact, " +
                                std::to_string(runs.seconds) + " s";
    }

    if (identical != queries_checked) {
        runs.plain_enhanced.fail(std::to_string(queries_checked - identical) + " queries differ between pipelines");
    }
    std::ostringstream counts;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
        const double p = plain_cand[m] / static_cast<double>(kDatasets * kQueries);
        const double e = enhanced_cand[m] / static_cast<double>(kDatasets * kQueries);
        counts << metrics[m].to_string() << " plain " << p << " enhanced " << e << "; ";
        if (e > p) runs.plain_enhanced.fail("enhanced candidates exceed plain for " + metrics[m].to_string());
        if (metrics[m].kind() == MetricKind::LInf && !(e < p)) {
            runs.plain_enhanced.fail("enhanced candidates not strictly fewer for linf");
        }
    }
    if (runs.plain_enhanced.pass) runs.plain_enhanced.detail = "100% identical; mean candidates: " + counts.str();
    return runs;
}

Outcome oracle_equivalence() { return equivalence_runs().exactness; }
Outcome plain_enhanced_equivalence() { return equivalence_runs().plain_enhanced; }

Outcome inclusion_property() {
    Outcome out;
    Rng rng(3);
    std::size_t inside = 0, drawn = 0;
    while (inside < 100000) {
        ++drawn;
        const bool inf = rng.uniform() < 0.2;
        const MetricSpec metric = inf ? MetricSpec::linf() : MetricSpec::lp(rng.uniform(1.0, 10.0));
        const Point3 center = rng.point(-10, 10);
        const double r = rng.uniform(0.01, 5.0);
        // Drawn from a slightly inflated bounding cube so both sides of the boundary occur.
        const Point3 p = center + Point3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)} * (1.05 * r);
        if (!in_lp_ball(p, center, metric, r)) continue;
        ++inside;
        if (!(l2_distance(p, center) <= inclusion_radius(metric, r, 3))) {
            out.fail("violation for " + metric.to_string());
        }
    }

    // Tightness at the extremal directions: axis points for p <= 2, diagonals otherwise.
    for (int i = 0; i < 1000; ++i) {
        const double r = rng.uniform(0.01, 5.0);
        for (int d : {2, 3}) {
            for (const MetricSpec& metric : {MetricSpec::l1(), MetricSpec::lp(1.5), MetricSpec::l2(), MetricSpec::lp(3),
                                             MetricSpec::lp(7), MetricSpec::linf()}) {
                Point3 extreme;
                if (metric.kind() == MetricKind::LInf) {
                    extreme = {r, r, d == 3 ? r : 0.0};
                } else if (metric.p() <= 2.0) {
                    extreme = {r, 0.0, 0.0};
                } else {
                    const double c = r / std::pow(static_cast<double>(d), 1.0 / metric.p());
                    extreme = {c, c, d == 3 ? c : 0.0};
                }
                const Point3 origin{0, 0, 0};
                const double on_boundary = weight_to_distance(metric, metric_weight(metric, extreme, origin));
                if (std::abs(on_boundary - r) > 1e-9 || std::abs(l2_distance(extreme, origin) - inclusion_radius(metric, r, d)) > 1e-9) {
                    out.fail("not tight for " + metric.to_string() + " d=" + std::to_string(d));
                }
            }
        }
    }
    if (inclusion_radius(MetricSpec::linf(), 1.0, 2) != std::sqrt(2.0)) out.fail("linf d=2 r=1 anchor is not sqrt(2)");
    if (out.pass) out.detail = std::to_string(inside) + " in-ball tuples (of " + std::to_string(drawn) + " drawn), zero violations; tight within 1e-9; anchor exact";
    return out;
}

Outcome monotone_transforms() {
    Outcome out;
    Rng rng(4);
    const Transform normalize_t{TransformKind::Normalize};
    const Transform embed_t{TransformKind::Embed2D};
    std::size_t ties = 0;
    for (int i = 0; i < 100000; ++i) {
        const Point3 q = rng.point(-1, 1), a = rng.point(-1, 1), b = rng.point(-1, 1);
        const double ang_a = source_distance(MetricSpec::angular(), q, a);
        const double ang_b = source_distance(MetricSpec::angular(), q, b);
        if (ang_a == ang_b) {
            ++ties;
            continue;
        }
        const Point3 fq = apply_transform(normalize_t, q);
        if ((ang_a < ang_b) != (l2_distance(fq, apply_transform(normalize_t, a)) < l2_distance(fq, apply_transform(normalize_t, b)))) {
            out.fail("normalize order violation at triple " + std::to_string(i));
        }
    }
    for (int i = 0; i < 100000; ++i) {
        const Point2 q{rng.uniform(), rng.uniform()}, a{rng.uniform(), rng.uniform()}, b{rng.uniform(), rng.uniform()};
        const double da = source_distance(MetricSpec::euclid2d(), q, a);
        const double db = source_distance(MetricSpec::euclid2d(), q, b);
        if (da == db) continue;
        const Point3 fq = apply_transform(embed_t, q);
        if ((da < db) != (l2_distance(fq, apply_transform(embed_t, a)) < l2_distance(fq, apply_transform(embed_t, b)))) {
            out.fail("embed2d order violation at triple " + std::to_string(i));
        }
    }
    int pairs = 0;
    for (unsigned x = 0; x < 8; ++x) {
        for (unsigned y = 0; y < 8; ++y) {
            const auto bits = [](unsigned v) {
                return BitString(std::string{char('0' + ((v >> 2) & 1)), char('0' + ((v >> 1) & 1)), char('0' + (v & 1))});
            };
            const double via_l1 = weight_to_distance(MetricSpec::l1(),
                                                     lp_weight(hamming_vertex(bits(x)), hamming_vertex(bits(y)), 1.0));
            if (via_l1 != static_cast<double>(std::popcount(x ^ y))) out.fail("hamming mismatch");
            ++pairs;
        }
    }
    if (out.pass) {
        out.detail = "1e5 normalize triples (" + std::to_string(ties) + " exact ties skipped), 1e5 embed2d triples, " +
                     std::to_string(pairs) + " hamming pairs: zero violations";
    }
    return out;
}

Outcome bvh_contract() {
    Outcome out;
    Rng rng(5);
    std::size_t largest = 0, queries = 0;
    for (int scene = 0; scene < 50; ++scene) {
        const std::size_t n = 1000 * static_cast<std::size_t>(scene + 1);
        largest = std::max(largest, n);
        const double max_half = 0.5 / std::cbrt(static_cast<double>(n));
        std::vector<Primitive> prims;
        for (std::size_t i = 0; i < n; ++i) {
            const Point3 c = rng.point();
            prims.push_back({static_cast<std::uint32_t>(i), aabb_around(c, rng.uniform(0, 4 * max_half)), c});
        }
        const Bvh bvh = Bvh::build(prims, 1 + static_cast<std::size_t>(scene % 8));
        for (int k = 0; k < 20; ++k) {
            const Point3 q = rng.point(-0.05, 1.05);
            std::vector<std::uint32_t> got, expected;
            traverse_point(bvh, PointQuery{q}, [&](const HitRecord& h) {
                got.push_back(h.id);
                return HitAction::Continue;
            });
            for (const Primitive& p : prims) {
                if (aabb_contains(p.box, q)) expected.push_back(p.id);
            }
            std::sort(got.begin(), got.end());
            if (got != expected) out.fail("scene " + std::to_string(scene) + " hit set differs from linear scan");
            ++queries;
        }
    }

    // Two clusters of 512 unit boxes, 100 box widths apart.
    std::vector<Primitive> prims;
    for (std::uint32_t i = 0; i < 1024; ++i) {
        const double offset = i < 512 ? 0.0 : 108.0;
        const Point3 c = rng.point(offset, offset + 8.0);
        prims.push_back({i, aabb_around(c, 0.5), c});
    }
    const Bvh bvh = Bvh::build(prims, Bvh::kDefaultLeafSize);
    std::size_t worst = 0;
    for (int k = 0; k < 100; ++k) {
        worst = std::max(worst, node_visits(bvh, PointQuery{prims[rng.index(1024)].center}));
    }
    const double fraction = static_cast<double>(worst) / static_cast<double>(bvh.nodes().size());
    if (!(fraction < 0.15)) out.fail("two-cluster visits " + std::to_string(worst) + " of " + std::to_string(bvh.nodes().size()));
    if (out.pass) {
        out.detail = std::to_string(queries) + " queries over 50 scenes (up to " + std::to_string(largest) +
                     " boxes) exact; two-cluster worst visits " + std::to_string(worst) + "/" +
                     std::to_string(bvh.nodes().size()) + " nodes";
    }
    return out;
}

Outcome recall_vs_radius() {
    Outcome out;
    const Dataset dataset = synthetic_dataset(DatasetFormat::CsvXyz, 100000, 100, 6);
    std::ostringstream detail;
    for (const auto& [metric, enhanced] : {std::pair{MetricSpec::l1(), false}, std::pair{MetricSpec::linf(), true}}) {
        const GroundTruth truth = GroundTruth::compute(dataset.data, dataset.queries, metric, 10);
        double kth_max = 0.0;
        for (const auto& row : truth.rows) kth_max = std::max(kth_max, row.back().distance);
        const std::vector<double> factors = {0.1, 0.2, 0.35, 0.5, 0.7, 0.85, 1.0, 1.3};
        std::vector<double> radii;
        for (double f : factors) radii.push_back(f * kth_max);

        ExperimentConfig base;
        base.reduction = config_for(metric, radii.front(), 10, enhanced);
        const auto reports = sweep(dataset, base, SweepAxis::Radius, radii);
        for (std::size_t i = 0; i < reports.size(); ++i) {
            if (i > 0) {
                if (reports[i].mean_recall < reports[i - 1].mean_recall) out.fail(metric.to_string() + " recall decreased");
                if (!(reports[i].mean_candidate_count > reports[i - 1].mean_candidate_count)) {
                    out.fail(metric.to_string() + " mean candidate count did not grow");
                }
                for (std::size_t q = 0; q < reports[i].queries.size(); ++q) {
                    if (reports[i].queries[q].candidate_count < reports[i - 1].queries[q].candidate_count) {
                        out.fail(metric.to_string() + " per-query candidate count decreased");
                    }
                }
            }
            if (factors[i] >= 1.0 && reports[i].mean_recall != 1.0) {
                out.fail(metric.to_string() + " recall below 1 at r >= max k-th distance");
            }
        }
        detail << metric.to_string() << " recall";
        for (const auto& r : reports) detail << ' ' << r.mean_recall;
        detail << "; ";
    }
    if (out.pass) out.detail = detail.str();
    return out;
}

Outcome k_sensitivity() {
    Outcome out;
    const Dataset dataset = synthetic_dataset(DatasetFormat::CsvXyz, 50000, 100, 7);
    std::ostringstream detail;
    for (const auto& [metric, enhanced] : {std::pair{MetricSpec::l1(), false}, std::pair{MetricSpec::lp(3), true},
                                           std::pair{MetricSpec::linf(), false}}) {
        ExperimentConfig base;
        base.reduction = config_for(metric, 0.06, 1, enhanced);
        const std::vector<double> ks = {1, 10, 100};
        const auto reports = sweep(dataset, base, SweepAxis::K, ks);
        for (const auto& r : reports) {
            for (std::size_t q = 0; q < r.queries.size(); ++q) {
                if (r.queries[q].candidate_count != reports[0].queries[q].candidate_count) {
                    out.fail(metric.to_string() + " candidate count changed with k");
                }
            }
        }
        detail << metric.to_string() << " mean candidates " << reports[0].mean_candidate_count << "; ";
    }
    if (out.pass) out.detail = "identical across k in {1,10,100}: " + detail.str();
    return out;
}

Outcome recall_formula() {
    Outcome out;
    const std::vector<Neighbor> truth = {{1, 0}, {2, 0}, {3, 0}, {4, 0}};
    const std::vector<Neighbor> found = {{1, 0}, {2, 0}, {5, 0}, {6, 0}};
    const double r = recall(found, truth);
    if (r != 0.5) out.fail("got " + std::to_string(r));
    if (out.pass) out.detail = "recall = 0.5";
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Drops the "timings" object, the only place wall-clock values appear.
std::string without_timings(std::string text) {
    const std::size_t key = text.find("\"timings\"");
    if (key == std::string::npos) return text;
    const std::size_t open = text.find('{', key);
    int depth = 0;
    std::size_t close = open;
    for (; close < text.size(); ++close) {
        if (text[close] == '{') ++depth;
        if (text[close] == '}' && --depth == 0) break;
    }
    return text.erase(key, close + 1 - key);
}

Outcome cli_determinism() {
    Outcome out;
    if (cli_path.empty()) {
        out.fail("gknn CLI path not given (--cli)");
        return out;
    }
    const auto dir = std::filesystem::temp_directory_path();
    std::vector<std::string> args = {"--n 5000 --queries 25 --metric lp:3 --radius 0.08 --k 5 --seed 42",
                                     "--n 5000 --queries 25 --metric linf --radius 0.05 --k 5 --enhanced true --seed 9 --repeats 3",
                                     "--n 3000 --queries 10 --metric cosine --radius 0.01 --k 5 --seed 3"};
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string outputs[2];
        for (int run = 0; run < 2; ++run) {
            const auto file = dir / ("gknn_acceptance_" + std::to_string(i) + "_" + std::to_string(run) + ".json");
            const std::string cmd = "\"" + cli_path + "\" query " + args[i] + " --out \"" + file.string() + "\"";
            if (std::system(cmd.c_str()) != 0) {
                out.fail("command failed: " + cmd);
                return out;
            }
            outputs[run] = read_file(file);
            std::filesystem::remove(file);
        }
        if (outputs[0].find("\"timings\"") == std::string::npos) out.fail("no timings block in output");
        if (without_timings(outputs[0]) != without_timings(outputs[1])) out.fail("outputs differ for: " + args[i]);
    }
    if (out.pass) out.detail = std::to_string(args.size()) + " invocations byte-identical outside timings";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--cli") cli_path = argv[i + 1];
    }

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 oracle equivalence (exactness)", oracle_equivalence},
        {"2 plain/enhanced equivalence", plain_enhanced_equivalence},
        {"3 inclusion property", inclusion_property},
        {"4 monotone transform correctness", monotone_transforms},
        {"5 BVH contract", bvh_contract},
        {"6 recall-vs-radius trend", recall_vs_radius},
        {"7 fixed-radius k-sensitivity", k_sensitivity},
        {"8 recall formula", recall_formula},
        {"9 CLI determinism", cli_determinism},
    };

    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome outcome;
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome.fail(std::string("exception: ") + e.what());
        }
        std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << outcome.detail << std::endl;
        if (!outcome.pass) ++failures;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size() << " criteria passed"
              << std::endl;
    return failures == 0 ? 0 : 1;
}
