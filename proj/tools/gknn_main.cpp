// gknn: command-line driver for generalized k-NN search over an emulated
// ray-tracing pipeline.
//
//   gknn build-info --data pts.csv --n 1000 --metric linf --radius 0.1
//   gknn query      --n 10000 --queries 100 --metric lp:1 --radius 0.2 --k 10 --seed 7
//   gknn sweep      --n 10000 --queries 100 --metric lp:1 --axis radius --values 0.05,0.1,0.2
//   gknn oracle     --data pts.csv --n 1000 --queries 10 --metric cosine --k 10 --out truth.json
//
// Without --data a uniform synthetic dataset is drawn from --seed.
// Exit codes: 0 success, 2 input error, 3 internal invariant violation.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gknn/dataset.hpp"
#include "gknn/errors.hpp"
#include "gknn/experiment.hpp"
#include "gknn/oracle.hpp"
#include "gknn/transforms.hpp"

namespace {

constexpr int kExitInput = 2;
constexpr int kExitInvariant = 3;

struct Options {
    std::string data;
    std::string format;
    std::size_t n = 0;
    std::optional<std::size_t> queries;
    std::string query_file;
    std::string metric = "lp:2";
    double radius = 0.1;
    std::size_t k = 10;
    bool enhanced = false;
    std::size_t leaf_size = gknn::Bvh::kDefaultLeafSize;
    int dimension = 3;
    std::size_t repeats = 1;
    std::size_t threads = 1;
    std::uint64_t seed = 1;
    std::string out;
    std::string truth;
    std::string axis = "radius";
    std::string values;
};

void add_dataset_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--data", o.data, "Dataset file; omit for a synthetic uniform dataset");
    cmd.add_option("--format", o.format, "csv-xyz | bin-f32x4 | csv-2d | bits (default follows --metric)");
    cmd.add_option("--n", o.n, "Number of leading records used as data (default: all, or 10000 synthetic)");
    cmd.add_option("--queries", o.queries, "Number of query records following the data (default 100 synthetic)");
    cmd.add_option("--query-file", o.query_file, "Read queries from this file instead");
    cmd.add_option("--seed", o.seed, "Seed for synthetic data");
}

void add_search_options(CLI::App& cmd, Options& o) {
    cmd.add_option("--metric", o.metric, "lp:<p> | linf | cosine | angular | euclid2d | hamming3");
    cmd.add_option("--radius", o.radius, "Search radius in metric units");
    cmd.add_option("--k", o.k, "Neighbors per query");
    cmd.add_option("--enhanced", o.enhanced, "Custom-geometry user filter (true/false)");
    cmd.add_option("--leaf-size", o.leaf_size, "Max primitives per BVH leaf");
    cmd.add_option("--dimension", o.dimension, "Dimension used for the inclusion radius (2 or 3)");
    cmd.add_option("--threads", o.threads, "Query worker threads");
}

// euclid2d and hamming3 need 2-D points and bit strings; everything else reads xyz.
gknn::DatasetFormat resolve_format(const Options& o) {
    if (!o.format.empty()) return gknn::parse_format(o.format);
    switch (gknn::MetricSpec::parse(o.metric).kind()) {
    case gknn::MetricKind::Euclid2D: return gknn::DatasetFormat::Csv2d;
    case gknn::MetricKind::Hamming3: return gknn::DatasetFormat::Bits;
    default: return gknn::DatasetFormat::CsvXyz;
    }
}

gknn::Dataset acquire(const Options& o) {
    const gknn::DatasetFormat format = resolve_format(o);
    if (o.data.empty()) {
        if (!o.query_file.empty()) throw gknn::InputError("--query-file requires --data");
        return gknn::synthetic_dataset(format, o.n == 0 ? 10000 : o.n, o.queries.value_or(100), o.seed);
    }
    std::vector<gknn::SourcePoint> records = gknn::read_records(o.data, format);
    if (o.query_file.empty()) {
        const std::size_t q = o.queries.value_or(0);
        const std::size_t n = o.n != 0 ? o.n : (records.size() > q ? records.size() - q : 0);
        try {
            return gknn::split_records(std::move(records), n, q);
        } catch (const gknn::InputError& e) {
            throw gknn::InputError(o.data + ": " + e.what());
        }
    }
    std::vector<gknn::SourcePoint> query_records = gknn::read_records(o.query_file, format);
    const std::size_t n = o.n != 0 ? o.n : records.size();
    const std::size_t q = o.queries.value_or(query_records.size());
    if (q > query_records.size()) throw gknn::InputError(o.query_file + ": fewer than " + std::to_string(q) + " records");
    gknn::Dataset out = gknn::split_records(std::move(records), n, 0);
    out.queries.assign(query_records.begin(), query_records.begin() + static_cast<std::ptrdiff_t>(q));
    return out;
}

gknn::ExperimentConfig experiment_config(const Options& o) {
    gknn::ExperimentConfig c;
    c.reduction.metric = gknn::MetricSpec::parse(o.metric);
    c.reduction.radius = o.radius;
    c.reduction.k = o.k;
    c.reduction.enhanced = o.enhanced;
    c.reduction.leaf_size = o.leaf_size;
    c.reduction.dimension = o.dimension;
    c.reduction.validate_source();
    c.repeats = o.repeats;
    c.threads = o.threads;
    if (o.data.empty()) c.seed = o.seed;
    return c;
}

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw gknn::InputError("--values: cannot parse '" + item + "'");
        }
    }
    if (values.empty()) throw gknn::InputError("--values is empty");
    return values;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text << '\n';
        return;
    }
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw gknn::InputError("cannot write '" + o.out + "'");
    file << text << '\n';
}

std::string build_info(const Options& o) {
    const gknn::Dataset dataset = acquire(o);
    const gknn::ExperimentConfig config = experiment_config(o);
    const auto start = std::chrono::steady_clock::now();
    const gknn::TransformedIndex index(dataset.data, config.reduction);
    const double build_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

    const gknn::LpIndex& lp = index.pipeline();
    const gknn::Bvh& bvh = lp.bvh();
    const gknn::Aabb& bounds = bvh.bounds();
    nlohmann::json j = {
        {"schema", "gknn.build_info/1"},
        {"metric", config.reduction.metric.to_string()},
        {"pipeline_metric", lp.config().metric.to_string()},
        {"pipeline_radius", lp.config().radius},
        {"enhanced", config.reduction.enhanced},
        {"half_width", lp.half_width()},
        {"data_count", dataset.data.size()},
        {"node_count", bvh.nodes().size()},
        {"leaf_count", bvh.leaf_count()},
        {"leaf_size", bvh.leaf_size()},
        {"depth", bvh.depth()},
        {"bounds", {{bounds.min.x, bounds.min.y, bounds.min.z}, {bounds.max.x, bounds.max.y, bounds.max.z}}},
        {"timings", {{"build_ms", build_ms}}},
    };
    return j.dump(2);
}

std::string query(const Options& o) {
    const gknn::Dataset dataset = acquire(o);
    const gknn::ExperimentConfig config = experiment_config(o);
    std::optional<gknn::GroundTruth> truth;
    if (!o.truth.empty()) {
        std::ifstream in(o.truth);
        if (!in) throw gknn::InputError("cannot open '" + o.truth + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        truth = gknn::GroundTruth::from_json(buffer.str());
    }
    return gknn::run_experiment(dataset, config, truth ? &*truth : nullptr).to_json(2);
}

std::string sweep(const Options& o) {
    const gknn::Dataset dataset = acquire(o);
    const gknn::ExperimentConfig config = experiment_config(o);
    const gknn::SweepAxis axis = gknn::parse_sweep_axis(o.axis);
    const std::vector<double> values = parse_values(o.values);
    return gknn::sweep_to_json(gknn::sweep(dataset, config, axis, values), axis, 2);
}

std::string oracle(const Options& o) {
    const gknn::Dataset dataset = acquire(o);
    const gknn::ExperimentConfig config = experiment_config(o);
    return gknn::GroundTruth::compute(dataset.data, dataset.queries, config.reduction.metric, config.reduction.k).to_json();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized k-nearest-neighbor search over an emulated ray-tracing BVH"};
    app.require_subcommand(1);
    Options o;

    auto* info_cmd = app.add_subcommand("build-info", "Build the index and report tree statistics");
    auto* query_cmd = app.add_subcommand("query", "Run queries and report neighbors, recall and timings");
    auto* sweep_cmd = app.add_subcommand("sweep", "Repeat a query run over a range of radius, k or query counts");
    auto* oracle_cmd = app.add_subcommand("oracle", "Compute exact ground truth by exhaustive scan");

    for (CLI::App* cmd : {info_cmd, query_cmd, sweep_cmd, oracle_cmd}) {
        add_dataset_options(*cmd, o);
        add_search_options(*cmd, o);
        cmd->add_option("--out", o.out, "Write output here instead of stdout");
    }
    for (CLI::App* cmd : {query_cmd, sweep_cmd}) cmd->add_option("--repeats", o.repeats, "Index builds per run");
    query_cmd->add_option("--truth", o.truth, "Reuse ground truth written by the oracle subcommand");
    sweep_cmd->add_option("--axis", o.axis, "radius | k | queries")->required();
    sweep_cmd->add_option("--values", o.values, "Comma-separated, strictly increasing values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        std::string text;
        if (info_cmd->parsed()) text = build_info(o);
        if (query_cmd->parsed()) text = query(o);
        if (sweep_cmd->parsed()) text = sweep(o);
        if (oracle_cmd->parsed()) text = oracle(o);
        emit(o, text);
    } catch (const gknn::InputError& e) {
        std::cerr << "gknn: " << e.what() << '\n';
        return kExitInput;
    } catch (const gknn::InvariantError& e) {
        std::cerr << "gknn: internal error: " << e.what() << '\n';
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "gknn: internal error: " << e.what() << '\n';
        return kExitInvariant;
    }
    return 0;
}
