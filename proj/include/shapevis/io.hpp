#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "shapevis/types.hpp"

namespace shapevis {

namespace detail {

inline std::string format_double(double x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::ifstream open_input(const std::string& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw std::runtime_error("cannot open input file: " + path);
    return in;
}

inline std::ofstream open_output(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

/// Parses a CSV point file. Every row must have the same arity; the optional
/// label column is extracted as integer class labels and excluded from the
/// coordinates. Parse failures name the 1-based line.
inline PointCloud read_csv(const std::string& path, bool has_header = false,
                           std::optional<std::size_t> label_column = std::nullopt) {
    auto in = detail::open_input(path);
    PointCloud pc;
    std::string line;
    std::size_t line_no = 0;
    std::size_t columns = 0;
    std::vector<double> row_values;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && has_header) continue;
        const std::string_view full = detail::trim(line);
        if (full.empty()) continue;

        row_values.clear();
        std::size_t start = 0;
        const std::string_view raw = line;
        while (start <= raw.size()) {
            const std::size_t comma = raw.find(',', start);
            const std::string_view cell =
                detail::trim(raw.substr(start, comma == std::string_view::npos ? std::string_view::npos
                                                                               : comma - start));
            double value = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                         ": non-numeric cell '" + std::string(cell) + "'");
            row_values.push_back(value);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }

        if (columns == 0) {
            columns = row_values.size();
            if (label_column && *label_column >= columns)
                throw std::runtime_error(path + ": label column " + std::to_string(*label_column) +
                                         " out of range for " + std::to_string(columns) + " columns");
            pc.dim = columns - (label_column ? 1 : 0);
            if (pc.dim == 0)
                throw std::runtime_error(path + ": no coordinate columns left after label column");
        } else if (row_values.size() != columns) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected " +
                                     std::to_string(columns) + " columns, got " +
                                     std::to_string(row_values.size()));
        }

        for (std::size_t c = 0; c < columns; ++c) {
            if (label_column && c == *label_column) {
                const double v = row_values[c];
                const int label = static_cast<int>(v);
                if (double(label) != v)
                    throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                             ": non-integer label '" + detail::format_double(v) + "'");
                pc.labels.push_back(label);
            } else {
                pc.data.push_back(row_values[c]);
            }
        }
        ++pc.count;
    }
    if (pc.count == 0) throw std::runtime_error(path + ": no data rows");
    return pc;
}

/// Writes coordinates (and the labels as a trailing column, when present).
inline void write_csv(const PointCloud& pc, const std::string& path) {
    auto out = detail::open_output(path);
    std::string line;
    for (std::size_t i = 0; i < pc.count; ++i) {
        line.clear();
        const double* r = pc.row(i);
        for (std::size_t j = 0; j < pc.dim; ++j) {
            if (j) line += ',';
            line += detail::format_double(r[j]);
        }
        if (pc.has_labels()) {
            line += ',';
            line += std::to_string(pc.labels[i]);
        }
        line += '\n';
        out << line;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Binary point format
// ---------------------------------------------------------------------------
// Layout: magic "SVPC", u32 version=1, u64 N, u32 d, N*d little-endian f32
// row-major, u8 label marker (1 => N little-endian i32 labels follow).

namespace detail {

inline void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xFF));
}
inline void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xFF));
}
inline std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}
inline std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

} // namespace detail

inline void write_binary(const PointCloud& pc, const std::string& path) {
    std::string buf;
    buf.reserve(21 + pc.count * pc.dim * 4 + (pc.has_labels() ? pc.count * 4 : 0));
    buf += "SVPC";
    detail::put_u32(buf, 1);
    detail::put_u64(buf, pc.count);
    detail::put_u32(buf, static_cast<std::uint32_t>(pc.dim));
    for (double v : pc.data) {
        const float f = static_cast<float>(v);
        std::uint32_t bits;
        std::memcpy(&bits, &f, 4);
        detail::put_u32(buf, bits);
    }
    buf.push_back(pc.has_labels() ? char(1) : char(0));
    if (pc.has_labels())
        for (int label : pc.labels) detail::put_u32(buf, static_cast<std::uint32_t>(label));
    auto out = detail::open_output(path, std::ios::binary);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline PointCloud read_binary(const std::string& path) {
    auto in = detail::open_input(path, std::ios::binary);
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const auto* p = reinterpret_cast<const unsigned char*>(raw.data());
    const std::size_t size = raw.size();

    if (size < 4 || std::memcmp(p, "SVPC", 4) != 0)
        throw std::runtime_error(path + ": bad magic (expected SVPC)");
    if (size < 20) throw std::runtime_error(path + ": truncated header: expected 20 bytes, got " +
                                            std::to_string(size));
    const std::uint32_t version = detail::get_u32(p + 4);
    if (version != 1)
        throw std::runtime_error(path + ": unsupported version " + std::to_string(version));
    const std::uint64_t n = detail::get_u64(p + 8);
    const std::uint32_t d = detail::get_u32(p + 16);

    const std::size_t float_bytes = std::size_t(n) * d * 4;
    std::size_t offset = 20;
    if (size < offset + float_bytes)
        throw std::runtime_error(path + ": truncated float block: expected " +
                                 std::to_string(offset + float_bytes) + " bytes, got " +
                                 std::to_string(size));
    PointCloud pc;
    pc.count = n;
    pc.dim = d;
    pc.data.resize(std::size_t(n) * d);
    for (std::size_t i = 0; i < pc.data.size(); ++i) {
        const std::uint32_t bits = detail::get_u32(p + offset + i * 4);
        float f;
        std::memcpy(&f, &bits, 4);
        pc.data[i] = f;
    }
    offset += float_bytes;
    if (size < offset + 1) throw std::runtime_error(path + ": missing label marker");
    const unsigned char marker = p[offset++];
    if (marker == 1) {
        if (size < offset + std::size_t(n) * 4)
            throw std::runtime_error(path + ": truncated label block: expected " +
                                     std::to_string(offset + std::size_t(n) * 4) + " bytes, got " +
                                     std::to_string(size));
        pc.labels.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            pc.labels[i] = static_cast<int>(detail::get_u32(p + offset + i * 4));
    } else if (marker != 0) {
        throw std::runtime_error(path + ": bad label marker " + std::to_string(int(marker)));
    }
    return pc;
}

// ---------------------------------------------------------------------------
// JSON serialization of the core types (debugging and round-trip tests)
// ---------------------------------------------------------------------------

inline void to_json(nlohmann::json& j, const PointCloud& pc) {
    j = {{"count", pc.count}, {"dim", pc.dim}, {"data", pc.data}, {"labels", pc.labels}};
}
inline void from_json(const nlohmann::json& j, PointCloud& pc) {
    j.at("count").get_to(pc.count);
    j.at("dim").get_to(pc.dim);
    j.at("data").get_to(pc.data);
    j.at("labels").get_to(pc.labels);
}

inline void to_json(nlohmann::json& j, const NeighborGraph& g) {
    j = {{"node_count", g.node_count},
         {"edges", g.edges()},
         {"sample_map", g.sample_map}};
}
inline void from_json(const nlohmann::json& j, NeighborGraph& g) {
    g = {};
    g.resize(j.at("node_count").get<std::size_t>());
    j.at("sample_map").get_to(g.sample_map);
    for (const auto& e : j.at("edges")) g.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>());
}

inline void to_json(nlohmann::json& j, const LandmarkCover& c) {
    j = {{"landmarks", c.landmarks}, {"rev_neigh", c.rev_neigh}};
}
inline void from_json(const nlohmann::json& j, LandmarkCover& c) {
    j.at("landmarks").get_to(c.landmarks);
    j.at("rev_neigh").get_to(c.rev_neigh);
}

inline void to_json(nlohmann::json& j, const WeightedGraph& g) {
    nlohmann::json edges = nlohmann::json::array();
    for (NodeId u = 0; u < g.node_count; ++u)
        for (const Link& l : g.adj[u])
            if (u < l.to) edges.push_back({u, l.to, l.weight});
    j = {{"node_count", g.node_count}, {"edges", std::move(edges)}, {"self_weights", g.self_weights}};
}
inline void from_json(const nlohmann::json& j, WeightedGraph& g) {
    g = {};
    g.resize(j.at("node_count").get<std::size_t>());
    j.at("self_weights").get_to(g.self_weights);
    for (const auto& e : j.at("edges"))
        g.add_edge(e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>());
}

inline void to_json(nlohmann::json& j, const Partition& p) {
    j = {{"assignment", p.assignment},
         {"community_count", p.community_count},
         {"level", p.level}};
}
inline void from_json(const nlohmann::json& j, Partition& p) {
    j.at("assignment").get_to(p.assignment);
    j.at("community_count").get_to(p.community_count);
    j.at("level").get_to(p.level);
}

inline void to_json(nlohmann::json& j, const NodeMeta& m) {
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [label, count] : m.label_histogram) hist[std::to_string(label)] = count;
    j = {{"member_landmarks", m.member_landmarks},
         {"point_count", m.point_count},
         {"label_histogram", std::move(hist)}};
}
inline void from_json(const nlohmann::json& j, NodeMeta& m) {
    j.at("member_landmarks").get_to(m.member_landmarks);
    j.at("point_count").get_to(m.point_count);
    m.label_histogram.clear();
    for (const auto& [key, value] : j.at("label_histogram").items())
        m.label_histogram[std::stoi(key)] = value.get<std::uint64_t>();
}

inline void to_json(nlohmann::json& j, const InducedGraph& ig) {
    j = {{"graph", ig.graph}, {"nodes", ig.nodes}};
}
inline void from_json(const nlohmann::json& j, InducedGraph& ig) {
    j.at("graph").get_to(ig.graph);
    j.at("nodes").get_to(ig.nodes);
}

inline void to_json(nlohmann::json& j, const SummaryEdge& e) {
    j = {{"source", e.u},
         {"target", e.v},
         {"weight", e.weight},
         {"modularity", e.modularity},
         {"phase", to_string(e.phase)}};
}
inline void from_json(const nlohmann::json& j, SummaryEdge& e) {
    j.at("source").get_to(e.u);
    j.at("target").get_to(e.v);
    j.at("weight").get_to(e.weight);
    j.at("modularity").get_to(e.modularity);
    e.phase = j.at("phase").get<std::string>() == "spanning" ? EdgePhase::spanning
                                                             : EdgePhase::reintroduced;
}

inline void to_json(nlohmann::json& j, const SummaryGraph& g) {
    j = {{"node_count", g.node_count}, {"nodes", g.nodes}, {"edges", g.edges}};
}
inline void from_json(const nlohmann::json& j, SummaryGraph& g) {
    j.at("node_count").get_to(g.node_count);
    j.at("nodes").get_to(g.nodes);
    j.at("edges").get_to(g.edges);
}

inline void to_json(nlohmann::json& j, const PipelineConfig& cfg) {
    j = {{"m_cap", cfg.m_cap},
         {"m_fraction", cfg.m_fraction},
         {"k", cfg.k},
         {"k_prime_hops", cfg.k_prime_hops},
         {"beta", cfg.beta},
         {"walk_len", cfg.walk_len},
         {"th", cfg.th},
         {"level", cfg.level},
         {"tearing", to_string(cfg.tearing)},
         {"tearing_fixed_c", cfg.tearing_fixed_c},
         {"keep_self_transitions", cfg.keep_self_transitions},
         {"metric", to_string(cfg.metric)},
         {"seed", cfg.seed},
         {"threads", cfg.threads}};
}
inline void from_json(const nlohmann::json& j, PipelineConfig& cfg) {
    j.at("m_cap").get_to(cfg.m_cap);
    j.at("m_fraction").get_to(cfg.m_fraction);
    j.at("k").get_to(cfg.k);
    j.at("k_prime_hops").get_to(cfg.k_prime_hops);
    j.at("beta").get_to(cfg.beta);
    j.at("walk_len").get_to(cfg.walk_len);
    j.at("th").get_to(cfg.th);
    j.at("level").get_to(cfg.level);
    const auto tearing = j.at("tearing").get<std::string>();
    cfg.tearing = tearing == "paper"   ? TearingMode::paper
                  : tearing == "fixed" ? TearingMode::fixed
                  : tearing == "all"   ? TearingMode::all
                                       : TearingMode::none;
    j.at("tearing_fixed_c").get_to(cfg.tearing_fixed_c);
    j.at("keep_self_transitions").get_to(cfg.keep_self_transitions);
    cfg.metric = j.at("metric").get<std::string>() == "cosine" ? Metric::cosine : Metric::euclidean;
    j.at("seed").get_to(cfg.seed);
    j.at("threads").get_to(cfg.threads);
}

// ---------------------------------------------------------------------------
// Summary graph exchange formats
// ---------------------------------------------------------------------------

enum class SummaryFormat { json, graphml, dot };

inline SummaryFormat parse_summary_format(std::string_view s) {
    if (s == "json") return SummaryFormat::json;
    if (s == "graphml") return SummaryFormat::graphml;
    if (s == "dot") return SummaryFormat::dot;
    throw std::runtime_error("unknown output format '" + std::string(s) +
                             "' (expected json, graphml, or dot)");
}

namespace detail {

inline std::string histogram_string(const NodeMeta& m) {
    std::string s;
    for (const auto& [label, count] : m.label_histogram) {
        if (!s.empty()) s += ',';
        s += std::to_string(label) + ':' + std::to_string(count);
    }
    return s;
}

inline nlohmann::json summary_to_json(const SummaryGraph& g,
                                      const std::vector<NodeId>* point_assignment) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t i = 0; i < g.node_count; ++i) {
        const NodeMeta& m = g.nodes[i];
        nlohmann::json hist = nlohmann::json::object();
        for (const auto& [label, count] : m.label_histogram) hist[std::to_string(label)] = count;
        nlohmann::json node = {{"id", i},
                               {"point_count", m.point_count},
                               {"label_histogram", std::move(hist)},
                               {"member_landmarks", m.member_landmarks}};
        const auto dom = dominant_label(m);
        node["dominant_label"] = dom ? nlohmann::json(*dom) : nlohmann::json(nullptr);
        nodes.push_back(std::move(node));
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const SummaryEdge& e : g.edges) edges.push_back(e);
    nlohmann::json j = {{"format", "shapevis-summary"},
                        {"version", 1},
                        {"node_count", g.node_count},
                        {"nodes", std::move(nodes)},
                        {"edges", std::move(edges)}};
    if (point_assignment) j["point_assignment"] = *point_assignment;
    return j;
}

inline void write_graphml(const SummaryGraph& g, std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"point_count\" for=\"node\" attr.name=\"point_count\" attr.type=\"long\"/>\n"
        << "  <key id=\"dominant_label\" for=\"node\" attr.name=\"dominant_label\" attr.type=\"long\"/>\n"
        << "  <key id=\"label_histogram\" for=\"node\" attr.name=\"label_histogram\" attr.type=\"string\"/>\n"
        << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <key id=\"modularity\" for=\"edge\" attr.name=\"modularity\" attr.type=\"double\"/>\n"
        << "  <key id=\"phase\" for=\"edge\" attr.name=\"phase\" attr.type=\"string\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (std::size_t i = 0; i < g.node_count; ++i) {
        const NodeMeta& m = g.nodes[i];
        out << "    <node id=\"n" << i << "\">"
            << "<data key=\"point_count\">" << m.point_count << "</data>";
        if (const auto dom = dominant_label(m))
            out << "<data key=\"dominant_label\">" << *dom << "</data>";
        if (!m.label_histogram.empty())
            out << "<data key=\"label_histogram\">" << histogram_string(m) << "</data>";
        out << "</node>\n";
    }
    for (const SummaryEdge& e : g.edges) {
        out << "    <edge source=\"n" << e.u << "\" target=\"n" << e.v << "\">"
            << "<data key=\"weight\">" << format_double(e.weight) << "</data>"
            << "<data key=\"modularity\">" << format_double(e.modularity) << "</data>"
            << "<data key=\"phase\">" << to_string(e.phase) << "</data>"
            << "</edge>\n";
    }
    out << "  </graph>\n</graphml>\n";
}

inline void write_dot(const SummaryGraph& g, std::ostream& out) {
    out << "graph shapevis {\n";
    for (std::size_t i = 0; i < g.node_count; ++i) {
        const NodeMeta& m = g.nodes[i];
        out << "  n" << i << " [point_count=" << m.point_count;
        if (const auto dom = dominant_label(m)) out << ", dominant_label=" << *dom;
        if (!m.label_histogram.empty())
            out << ", label_histogram=\"" << histogram_string(m) << "\"";
        out << "];\n";
    }
    for (const SummaryEdge& e : g.edges) {
        out << "  n" << e.u << " -- n" << e.v << " [weight=" << format_double(e.weight)
            << ", modularity=" << format_double(e.modularity) << ", phase=\"" << to_string(e.phase)
            << "\"];\n";
    }
    out << "}\n";
}

} // namespace detail

/// Writes the summary graph in one of the exchange formats. The JSON format
/// can carry the raw point -> node assignment, which downstream metrics need
/// to map points to segments.
inline void write_summary(const SummaryGraph& g, SummaryFormat format, const std::string& path,
                          const std::vector<NodeId>* point_assignment = nullptr) {
    auto out = detail::open_output(path);
    switch (format) {
        case SummaryFormat::json:
            out << detail::summary_to_json(g, point_assignment).dump(2) << '\n';
            break;
        case SummaryFormat::graphml: detail::write_graphml(g, out); break;
        case SummaryFormat::dot: detail::write_dot(g, out); break;
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

struct SummaryFile {
    SummaryGraph graph;
    std::vector<NodeId> point_assignment;   // empty when the file carries none
};

inline SummaryFile read_summary_json(const std::string& path) {
    auto in = detail::open_input(path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "shapevis-summary")
        throw std::runtime_error(path + ": not a summary-graph JSON file");
    SummaryFile file;
    file.graph.node_count = j.at("node_count").get<std::size_t>();
    file.graph.nodes.resize(file.graph.node_count);
    for (const auto& node : j.at("nodes")) {
        const auto id = node.at("id").get<std::size_t>();
        NodeMeta& m = file.graph.nodes.at(id);
        m.point_count = node.at("point_count").get<std::uint64_t>();
        node.at("member_landmarks").get_to(m.member_landmarks);
        for (const auto& [key, value] : node.at("label_histogram").items())
            m.label_histogram[std::stoi(key)] = value.get<std::uint64_t>();
    }
    for (const auto& e : j.at("edges")) file.graph.edges.push_back(e.get<SummaryEdge>());
    if (j.contains("point_assignment")) j.at("point_assignment").get_to(file.point_assignment);
    return file;
}

/// Debug dump of the landmark graph weights as "i j w" triplets (i < j).
inline void write_weight_triplets(const WeightedGraph& g, const std::string& path) {
    auto out = detail::open_output(path);
    for (NodeId u = 0; u < g.node_count; ++u)
        for (const Link& l : g.adj[u])
            if (u < l.to)
                out << u << ' ' << l.to << ' ' << detail::format_double(l.weight) << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Flat key=value configuration files
// ---------------------------------------------------------------------------

inline void parse_tearing_spec(std::string_view spec, PipelineConfig& cfg) {
    if (spec == "paper") {
        cfg.tearing = TearingMode::paper;
    } else if (spec == "all") {
        cfg.tearing = TearingMode::all;
    } else if (spec == "none") {
        cfg.tearing = TearingMode::none;
    } else if (spec.rfind("fixed:", 0) == 0) {
        cfg.tearing = TearingMode::fixed;
        const std::string value(spec.substr(6));
        std::size_t used = 0;
        cfg.tearing_fixed_c = std::stod(value, &used);
        if (used != value.size()) throw std::runtime_error("bad tearing threshold '" + value + "'");
    } else {
        throw std::runtime_error("unknown tearing mode '" + std::string(spec) +
                                 "' (expected paper, fixed:<v>, all, or none)");
    }
}

/// Applies `key=value` lines to a config. '#' starts a comment; unknown keys
/// are an error so typos do not silently fall back to defaults.
inline void apply_config_file(const std::string& path, PipelineConfig& cfg) {
    auto in = detail::open_input(path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view stripped = detail::trim(std::string_view(line).substr(0, line.find('#')));
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key(detail::trim(stripped.substr(0, eq)));
        const std::string value(detail::trim(stripped.substr(eq + 1)));
        try {
            if (key == "m_cap") cfg.m_cap = std::stoull(value);
            else if (key == "m_frac") cfg.m_fraction = std::stod(value);
            else if (key == "k") cfg.k = std::stoull(value);
            else if (key == "hops") cfg.k_prime_hops = static_cast<unsigned>(std::stoul(value));
            else if (key == "beta") cfg.beta = std::stoull(value);
            else if (key == "walk_len") cfg.walk_len = static_cast<unsigned>(std::stoul(value));
            else if (key == "th") cfg.th = std::stoull(value);
            else if (key == "level") cfg.level = std::stoi(value);
            else if (key == "tearing") parse_tearing_spec(value, cfg);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "threads") cfg.threads = static_cast<unsigned>(std::stoul(value));
            else if (key == "keep_self") cfg.keep_self_transitions = (value == "1" || value == "true");
            else if (key == "metric") cfg.metric = value == "cosine" ? Metric::cosine : Metric::euclidean;
            else throw std::runtime_error("unknown config key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": bad value '" + value + "' for key '" + key + "'");
        } catch (const std::out_of_range&) {
            throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                     ": value out of range '" + value + "' for key '" + key + "'");
        }
    }
}

} // namespace shapevis
