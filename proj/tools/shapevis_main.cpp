// Command-line front end: run the summarization pipeline, generate synthetic
// datasets, score segment quality, and benchmark scaling.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "shapevis/shapevis.hpp"

namespace {

using namespace shapevis;

PointCloud load_points(const std::string& path, const std::string& format, bool has_header,
                       std::optional<std::size_t> label_col) {
    if (format == "bin") return read_binary(path);
    if (format == "csv") return read_csv(path, has_header, label_col);
    throw std::runtime_error("unknown input format '" + format + "' (expected csv or bin)");
}

SummaryFormat resolve_out_format(const std::string& explicit_format, const std::string& path) {
    if (!explicit_format.empty()) return parse_summary_format(explicit_format);
    const auto dot = path.rfind('.');
    if (dot != std::string::npos) {
        const std::string ext = path.substr(dot + 1);
        if (ext == "graphml" || ext == "xml") return SummaryFormat::graphml;
        if (ext == "dot" || ext == "gv") return SummaryFormat::dot;
    }
    return SummaryFormat::json;
}

struct RunArgs {
    std::string input, format = "csv", out, out_format, report, config, dump_weights;
    bool has_header = false;
    int label_col = -1;
    std::size_t k = 0, beta = 0, m_cap = 0;
    unsigned walk_len = 0, hops = 0, threads = 0;
    std::uint64_t th = 0, seed = 0;
    double m_frac = 0.0;
    int level = 0;
    std::string tearing, metric;
    bool keep_self = false;
};

int cmd_run(const CLI::App& cmd, const RunArgs& args) {
    PipelineConfig cfg;
    if (cmd.count("--config")) apply_config_file(args.config, cfg);
    if (cmd.count("--k")) cfg.k = args.k;
    if (cmd.count("--beta")) cfg.beta = args.beta;
    if (cmd.count("--walk-len")) cfg.walk_len = args.walk_len;
    if (cmd.count("--th")) cfg.th = args.th;
    if (cmd.count("--m-cap")) cfg.m_cap = args.m_cap;
    if (cmd.count("--m-frac")) cfg.m_fraction = args.m_frac;
    if (cmd.count("--hops")) cfg.k_prime_hops = args.hops;
    if (cmd.count("--level")) cfg.level = args.level;
    if (cmd.count("--tearing")) parse_tearing_spec(args.tearing, cfg);
    if (cmd.count("--seed")) cfg.seed = args.seed;
    if (cmd.count("--threads")) cfg.threads = args.threads;
    if (cmd.count("--keep-self")) cfg.keep_self_transitions = args.keep_self;
    if (cmd.count("--metric"))
        cfg.metric = args.metric == "cosine" ? Metric::cosine : Metric::euclidean;

    std::optional<std::size_t> label_col;
    if (args.label_col >= 0) label_col = static_cast<std::size_t>(args.label_col);
    const PointCloud pc = load_points(args.input, args.format, args.has_header, label_col);

    const PipelineResult result = run_pipeline(pc, cfg);
    for (const std::string& w : result.report.warnings) std::cerr << "warning: " << w << '\n';

    if (!args.out.empty()) {
        write_summary(result.summary, resolve_out_format(args.out_format, args.out), args.out,
                      &result.point_assignment);
        std::cerr << "summary graph written to " << args.out << '\n';
    }
    if (!args.dump_weights.empty()) write_weight_triplets(result.landmark_graph, args.dump_weights);
    const nlohmann::json report = report_json(result.report);
    if (!args.report.empty()) {
        auto out = std::ofstream(args.report);
        if (!out) throw std::runtime_error("cannot open report file: " + args.report);
        out << report.dump(2) << '\n';
    }
    if (args.out.empty()) std::cout << report.dump(2) << '\n';
    return 0;
}

struct GenArgs {
    std::string kind, out, format = "csv";
    std::size_t n = 10000, d = 25, centers = 2;
    double sigma = 1.0, separation = 10.0, noise = 0.05;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenArgs& args) {
    PointCloud pc;
    if (args.kind == "sphere")
        pc = gen_sphere(args.n, args.d, args.seed);
    else if (args.kind == "blobs")
        pc = gen_blobs(args.n, args.d, args.centers, args.sigma, args.separation, args.seed);
    else if (args.kind == "annulus")
        pc = gen_annulus(args.n, args.noise, args.seed);
    else
        throw std::runtime_error("unknown dataset kind '" + args.kind +
                                 "' (expected sphere, blobs, or annulus)");
    if (args.format == "bin")
        write_binary(pc, args.out);
    else if (args.format == "csv")
        write_csv(pc, args.out);
    else
        throw std::runtime_error("unknown output format '" + args.format + "'");
    std::cerr << "wrote " << pc.count << " points (d=" << pc.dim << ") to " << args.out << '\n';
    return 0;
}

struct MetricsArgs {
    std::string graph, input, format = "csv";
    bool has_header = false;
    int label_col = -1;
    std::uint64_t seed = 1, pair_cap = kCosinePairCap;
};

int cmd_metrics(const MetricsArgs& args) {
    const SummaryFile file = read_summary_json(args.graph);
    if (file.point_assignment.empty())
        throw std::runtime_error(args.graph +
                                 " carries no point_assignment; re-export with JSON format");
    std::optional<std::size_t> label_col;
    if (args.label_col >= 0) label_col = static_cast<std::size_t>(args.label_col);
    const PointCloud pc = load_points(args.input, args.format, args.has_header, label_col);

    const Partition segments = pseudo_label(file.graph, args.seed);
    const std::vector<NodeId> per_point = point_segments(segments, file.point_assignment);
    std::vector<std::string> warnings;
    const double cosine = avg_intra_segment_cosine(pc, per_point, args.pair_cap, args.seed, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << '\n';

    std::vector<std::uint64_t> sizes(segments.community_count, 0);
    for (NodeId s : per_point) ++sizes[s];
    const nlohmann::json out = {{"segments", segments.community_count},
                                {"avg_intra_segment_cosine", cosine},
                                {"points", pc.count},
                                {"segment_sizes", sizes}};
    std::cout << out.dump(2) << '\n';
    return 0;
}

struct BenchArgs {
    std::string sizes, out;
    std::size_t d = 25;
    std::uint64_t seed = 1;
    std::size_t k = 0, beta = 0;
    unsigned threads = 0;
};

int cmd_bench(const CLI::App& cmd, const BenchArgs& args) {
    std::vector<std::size_t> sizes;
    std::size_t start = 0;
    while (start <= args.sizes.size()) {
        const std::size_t comma = args.sizes.find(',', start);
        const std::string token = args.sizes.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!token.empty()) sizes.push_back(std::stoull(token));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (sizes.empty()) throw std::runtime_error("--sizes expects a comma-separated list");

    PipelineConfig cfg;
    if (cmd.count("--k")) cfg.k = args.k;
    if (cmd.count("--beta")) cfg.beta = args.beta;
    if (cmd.count("--threads")) cfg.threads = args.threads;

    const ScalingTable table = scaling_run(sizes, args.d, cfg, args.seed);
    const std::string csv = scaling_csv(table);
    std::cout << csv;
    if (!args.out.empty()) {
        auto out = std::ofstream(args.out);
        if (!out) throw std::runtime_error("cannot open output file: " + args.out);
        out << csv;
    }
    if (table.slope)
        std::cerr << "log-log slope: " << *table.slope << '\n';
    else
        std::cerr << "log-log slope: null (need >= 2 successful sizes)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ShapeVis: compress a point cloud into a topology-preserving summary graph"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "run the summarization pipeline on a point file");
    run->add_option("--input", run_args.input, "input point file")->required();
    run->add_option("--format", run_args.format, "input format: csv or bin");
    run->add_flag("--has-header", run_args.has_header, "skip the first CSV row");
    run->add_option("--label-col", run_args.label_col, "CSV column holding integer labels");
    run->add_option("--k", run_args.k, "kNN graph degree");
    run->add_option("--beta", run_args.beta, "random walks per landmark");
    run->add_option("--walk-len", run_args.walk_len, "walk length l; lengths drawn from [l/2, l]");
    run->add_option("--th", run_args.th, "walk-count threshold");
    run->add_option("--m-cap", run_args.m_cap, "sample size cap");
    run->add_option("--m-frac", run_args.m_frac, "sample fraction of N");
    run->add_option("--hops", run_args.hops, "landmark cover hop radius");
    run->add_option("--level", run_args.level, "dendrogram level p");
    run->add_option("--tearing", run_args.tearing, "tearing mode: paper|fixed:<v>|all|none");
    run->add_option("--seed", run_args.seed, "RNG seed");
    run->add_option("--threads", run_args.threads, "worker threads (0 = auto)");
    run->add_option("--out", run_args.out, "summary graph output path");
    run->add_option("--out-format", run_args.out_format, "output format: json|graphml|dot");
    run->add_option("--report", run_args.report, "write the run report JSON here");
    run->add_option("--config", run_args.config, "key=value config file (flags override)");
    run->add_option("--dump-weights", run_args.dump_weights,
                    "debug dump of landmark weights as 'i j w' triplets");
    run->add_flag("--keep-self", run_args.keep_self, "retain self-transition walk counts");
    run->add_option("--metric", run_args.metric, "distance metric: euclidean|cosine");

    GenArgs gen_args;
    CLI::App* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    gen->add_option("--kind", gen_args.kind, "sphere|blobs|annulus")->required();
    gen->add_option("--n", gen_args.n, "number of points");
    gen->add_option("--d", gen_args.d, "dimension (sphere/blobs)");
    gen->add_option("--centers", gen_args.centers, "blob count");
    gen->add_option("--sigma", gen_args.sigma, "blob standard deviation");
    gen->add_option("--separation", gen_args.separation, "minimum blob center distance");
    gen->add_option("--noise", gen_args.noise, "annulus radial noise");
    gen->add_option("--seed", gen_args.seed, "RNG seed");
    gen->add_option("--out", gen_args.out, "output path")->required();
    gen->add_option("--format", gen_args.format, "output format: csv or bin");

    MetricsArgs metrics_args;
    CLI::App* metrics = app.add_subcommand("metrics", "segment-quality metrics for a summary graph");
    metrics->add_option("--graph", metrics_args.graph, "summary graph JSON (with point_assignment)")
        ->required();
    metrics->add_option("--input", metrics_args.input, "point file the graph was built from")
        ->required();
    metrics->add_option("--format", metrics_args.format, "input format: csv or bin");
    metrics->add_flag("--has-header", metrics_args.has_header, "skip the first CSV row");
    metrics->add_option("--label-col", metrics_args.label_col, "CSV column holding labels");
    metrics->add_option("--seed", metrics_args.seed, "RNG seed for segmentation and sampling");
    metrics->add_option("--pair-cap", metrics_args.pair_cap, "max cosine pairs per segment");

    BenchArgs bench_args;
    CLI::App* bench = app.add_subcommand("bench", "scaling benchmark on uniform sphere samples");
    bench->add_option("--sizes", bench_args.sizes, "comma-separated point counts, ascending")
        ->required();
    bench->add_option("--d", bench_args.d, "sphere dimension");
    bench->add_option("--seed", bench_args.seed, "RNG seed");
    bench->add_option("--k", bench_args.k, "kNN graph degree");
    bench->add_option("--beta", bench_args.beta, "walks per landmark");
    bench->add_option("--threads", bench_args.threads, "worker threads (0 = auto)");
    bench->add_option("--out", bench_args.out, "also write the CSV table here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (run->parsed()) return cmd_run(*run, run_args);
        if (gen->parsed()) return cmd_gen(gen_args);
        if (metrics->parsed()) return cmd_metrics(metrics_args);
        if (bench->parsed()) return cmd_bench(*bench, bench_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
