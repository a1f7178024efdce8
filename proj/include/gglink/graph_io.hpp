#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gglink/errors.hpp"
#include "gglink/graph.hpp"

namespace gglink {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::int64_t parse_int(std::string_view field, const std::string& where) {
    field = trim(field);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(where + ": expected integer, got '" + std::string(field) + "'");
    return value;
}

inline double parse_double(std::string_view field, const std::string& where) {
    field = trim(field);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError(where + ": expected number, got '" + std::string(field) + "'");
    return value;
}

// Shortest decimal that round-trips the exact double.
inline std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return {buf, ptr};
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

}  // namespace detail

struct RawEdge {
    std::int64_t src = 0;
    std::int64_t dst = 0;
};

// Reads a `src,dst` CSV. An optional single header line is skipped when its
// first field is not an integer. Accepts LF and CRLF endings.
inline std::vector<RawEdge> load_raw_edges(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open edge file: " + path.string());
    std::vector<RawEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;
        const auto fields = detail::split_csv_line(sv);
        if (fields.size() != 2)
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected 2 fields, got " +
                             std::to_string(fields.size()));
        if (lineno == 1) {
            // Header detection: a non-numeric first field.
            std::int64_t probe = 0;
            const auto t = detail::trim(fields[0]);
            const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), probe);
            if (ec != std::errc{} || ptr != t.data() + t.size()) continue;
        }
        const std::string where = path.string() + ":" + std::to_string(lineno);
        edges.push_back({detail::parse_int(fields[0], where), detail::parse_int(fields[1], where)});
    }
    if (edges.empty()) throw ParseError(path.string() + ": empty edge file");
    return edges;
}

// Feature CSV: no header, one node per row, comma-separated floats.
inline Matrix load_feature_csv(const std::filesystem::path& path, bool quantize_f32 = false) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open feature file: " + path.string());
    std::vector<double> values;
    std::size_t rows = 0, cols = 0;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const std::string_view sv = detail::trim(line);
        if (sv.empty()) continue;
        const auto fields = detail::split_csv_line(sv);
        if (cols == 0) {
            cols = fields.size();
        } else if (fields.size() != cols) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                             std::to_string(cols) + " fields, got " + std::to_string(fields.size()));
        }
        const std::string where = path.string() + ":" + std::to_string(lineno);
        for (const auto& field : fields) {
            double v = detail::parse_double(field, where);
            if (quantize_f32) v = static_cast<double>(static_cast<float>(v));
            values.push_back(v);
        }
        ++rows;
    }
    Matrix m(rows, cols);
    m.data = std::move(values);
    return m;
}

struct LoadOptions {
    // Stores features at float32 precision (explicit opt-in; default is full
    // 64-bit so gradient checks stay clean).
    bool features_f32 = false;
};

// Ingestion entry point. Node ids must already be dense 0..n-1 (see
// densify_edges for sparse id spaces). Without a feature file, n is
// max id + 1 and features default to the identity.
inline DirectedGraph load_graph(const std::filesystem::path& edge_csv,
                                const std::optional<std::filesystem::path>& feature_csv = {},
                                const LoadOptions& opts = {}) {
    const auto raw = load_raw_edges(edge_csv);
    std::int64_t max_id = -1;
    for (const RawEdge& e : raw) {
        if (e.src < 0 || e.dst < 0)
            throw ValidationError(edge_csv.string() + ": negative node id");
        max_id = std::max({max_id, e.src, e.dst});
    }

    Matrix features;
    std::size_t n = static_cast<std::size_t>(max_id) + 1;
    if (feature_csv) {
        features = load_feature_csv(*feature_csv, opts.features_f32);
        if (static_cast<std::int64_t>(features.rows) <= max_id)
            throw ValidationError("feature file has " + std::to_string(features.rows) +
                                  " rows but edge file references node id " + std::to_string(max_id));
        n = features.rows;
    }

    EdgeList edges;
    edges.reserve(raw.size());
    for (const RawEdge& e : raw)
        edges.push_back({static_cast<NodeId>(e.src), static_cast<NodeId>(e.dst)});
    return DirectedGraph(n, std::move(edges), std::move(features));
}

inline void save_edge_csv(const DirectedGraph& g, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write edge file: " + path.string());
    f << "src,dst\n";
    for (const Edge& e : g.edges()) f << e.src << "," << e.dst << "\n";
    if (!f) throw IoError("write failed: " + path.string());
}

inline void save_feature_csv(const Matrix& features, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write feature file: " + path.string());
    for (std::size_t i = 0; i < features.rows; ++i) {
        for (std::size_t j = 0; j < features.cols; ++j) {
            if (j) f << ",";
            f << detail::format_double(features(i, j));
        }
        f << "\n";
    }
    if (!f) throw IoError("write failed: " + path.string());
}

inline void save_graph(const DirectedGraph& g, const std::filesystem::path& edge_csv,
                       const std::optional<std::filesystem::path>& feature_csv = {}) {
    save_edge_csv(g, edge_csv);
    if (feature_csv) save_feature_csv(g.features(), *feature_csv);
}

struct DensifyResult {
    EdgeList edges;                        // remapped to dense 0..n-1
    std::vector<std::int64_t> original_id; // original_id[dense] = source id
};

// Remaps a sparse id space onto 0..n-1. Dense ids follow ascending original
// id order, which makes the mapping independent of edge order.
inline DensifyResult densify_edges(const std::vector<RawEdge>& raw) {
    std::map<std::int64_t, NodeId> dense;
    for (const RawEdge& e : raw) {
        dense.emplace(e.src, 0);
        dense.emplace(e.dst, 0);
    }
    DensifyResult result;
    result.original_id.reserve(dense.size());
    NodeId next = 0;
    for (auto& [orig, id] : dense) {
        id = next++;
        result.original_id.push_back(orig);
    }
    result.edges.reserve(raw.size());
    for (const RawEdge& e : raw) result.edges.push_back({dense[e.src], dense[e.dst]});
    return result;
}

// Sidecar `original_id,dense_id` CSV.
inline void save_id_map(const DensifyResult& d, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write id map: " + path.string());
    f << "original_id,dense_id\n";
    for (std::size_t i = 0; i < d.original_id.size(); ++i) f << d.original_id[i] << "," << i << "\n";
    if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace gglink
