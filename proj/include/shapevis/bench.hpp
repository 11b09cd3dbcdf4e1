#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "shapevis/pipeline.hpp"
#include "shapevis/synth.hpp"

namespace shapevis {

struct ScalingRow {
    std::size_t n = 0;
    bool failed = false;
    std::string error;
    double seconds = 0.0;
    double knn_s = 0.0, walks_s = 0.0, louvain_s = 0.0, tearing_s = 0.0;
    std::size_t landmarks = 0, communities = 0;
};

struct ScalingTable {
    std::vector<ScalingRow> rows;
    std::optional<double> slope;   // log-log wall-time growth exponent
};

/// One pipeline run per requested size on a uniform d-sphere sample; reports
/// wall times, stage breakdown, and the fitted log-log slope (null with
/// fewer than two successful rows).
inline ScalingTable scaling_run(const std::vector<std::size_t>& sizes, std::size_t d,
                                const PipelineConfig& cfg, std::uint64_t seed) {
    if (!std::is_sorted(sizes.begin(), sizes.end()))
        throw std::invalid_argument("sizes must be ascending");
    ScalingTable table;
    for (std::size_t n : sizes) {
        ScalingRow row;
        row.n = n;
        try {
            const PointCloud pc = gen_sphere(n, d, seed);
            PipelineConfig run_cfg = cfg;
            run_cfg.seed = seed;
            const PipelineResult result = run_pipeline(pc, run_cfg);
            const auto& times = result.report.stage_times_ms;
            auto ms = [&](const char* key) {
                const auto it = times.find(key);
                return it == times.end() ? 0.0 : it->second;
            };
            row.seconds = ms("total") / 1000.0;
            row.knn_s = ms("knn") / 1000.0;
            row.walks_s = (ms("walks") + ms("weighting")) / 1000.0;
            row.louvain_s = (ms("louvain") + ms("induce")) / 1000.0;
            row.tearing_s = ms("tearing") / 1000.0;
            row.landmarks = result.report.landmarks;
            row.communities = result.report.communities;
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }

    // Least-squares slope of log(seconds) against log(n).
    std::vector<double> xs, ys;
    for (const ScalingRow& r : table.rows) {
        if (r.failed || r.seconds <= 0.0) continue;
        xs.push_back(std::log(double(r.n)));
        ys.push_back(std::log(r.seconds));
    }
    if (xs.size() >= 2) {
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            mx += xs[i];
            my += ys[i];
        }
        mx /= double(xs.size());
        my /= double(xs.size());
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            num += (xs[i] - mx) * (ys[i] - my);
            den += (xs[i] - mx) * (xs[i] - mx);
        }
        if (den > 0.0) table.slope = num / den;
    }
    return table;
}

inline std::string scaling_csv(const ScalingTable& table) {
    std::string out = "n,seconds,knn_s,walks_s,louvain_s,tearing_s,landmarks,communities\n";
    char buf[256];
    for (const ScalingRow& r : table.rows) {
        if (r.failed) {
            out += std::to_string(r.n) + ",failed,,,,,,\n";
            continue;
        }
        std::snprintf(buf, sizeof(buf), "%zu,%.3f,%.3f,%.3f,%.3f,%.3f,%zu,%zu\n", r.n, r.seconds,
                      r.knn_s, r.walks_s, r.louvain_s, r.tearing_s, r.landmarks, r.communities);
        out += buf;
    }
    return out;
}

} // namespace shapevis
