#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gglink/errors.hpp"
#include "gglink/matrix.hpp"

namespace gglink {

using NodeId = std::uint32_t;

struct Edge {
    NodeId src = 0;
    NodeId dst = 0;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

enum class NeighborMode { kIn, kOut, kBoth };

inline const char* to_string(NeighborMode m) {
    switch (m) {
        case NeighborMode::kIn: return "in";
        case NeighborMode::kOut: return "out";
        default: return "both";
    }
}

inline NeighborMode neighbor_mode_from_string(const std::string& s) {
    if (s == "in") return NeighborMode::kIn;
    if (s == "out") return NeighborMode::kOut;
    if (s == "both") return NeighborMode::kBoth;
    throw ValidationError("unknown neighbor mode: " + s);
}

// Compressed sparse rows; neighbor lists are sorted and duplicate-free.
struct Csr {
    std::vector<std::size_t> offsets;  // size n+1
    std::vector<NodeId> neighbors;

    std::span<const NodeId> row(NodeId v) const {
        return {neighbors.data() + offsets[v], offsets[v + 1] - offsets[v]};
    }
    std::size_t degree(NodeId v) const { return offsets[v + 1] - offsets[v]; }
};

// Immutable directed, unweighted, attributed graph. Self-loops and duplicate
// edges are dropped at construction (counts kept). Safe for concurrent reads.
class DirectedGraph {
public:
    // Edges may contain duplicates and self-loops; node ids must be < num_nodes.
    // An empty feature matrix means "no attributes": the identity is used.
    DirectedGraph(std::size_t num_nodes, EdgeList edges, Matrix features = {})
        : n_(num_nodes) {
        for (const Edge& e : edges) {
            if (e.src >= n_ || e.dst >= n_)
                throw ValidationError("edge (" + std::to_string(e.src) + "," + std::to_string(e.dst) +
                                      ") references a node id >= " + std::to_string(n_));
        }
        std::sort(edges.begin(), edges.end());
        EdgeList clean;
        clean.reserve(edges.size());
        for (const Edge& e : edges) {
            if (e.src == e.dst) {
                ++dropped_self_loops_;
                continue;
            }
            if (!clean.empty() && clean.back() == e) {
                ++dropped_duplicates_;
                continue;
            }
            clean.push_back(e);
        }
        m_ = clean.size();
        build_adjacency(clean);

        if (features.empty()) {
            features_ = Matrix::identity(n_);
        } else {
            if (features.rows != n_)
                throw ValidationError("feature matrix has " + std::to_string(features.rows) +
                                      " rows for " + std::to_string(n_) + " nodes");
            features_ = std::move(features);
        }
    }

    std::size_t num_nodes() const { return n_; }
    std::size_t num_edges() const { return m_; }
    std::size_t feature_dim() const { return features_.cols; }
    const Matrix& features() const { return features_; }

    std::span<const NodeId> out_neighbors(NodeId v) const { return out_.row(v); }
    std::span<const NodeId> in_neighbors(NodeId v) const { return in_.row(v); }
    std::span<const NodeId> neighbors(NodeId v, NeighborMode mode) const {
        switch (mode) {
            case NeighborMode::kIn: return in_.row(v);
            case NeighborMode::kOut: return out_.row(v);
            default: return both_.row(v);
        }
    }
    std::size_t degree(NodeId v, NeighborMode mode) const {
        switch (mode) {
            case NeighborMode::kIn: return in_.degree(v);
            case NeighborMode::kOut: return out_.degree(v);
            default: return both_.degree(v);
        }
    }

    bool has_edge(NodeId u, NodeId v) const {
        const auto row = out_.row(u);
        return std::binary_search(row.begin(), row.end(), v);
    }

    // Edge list sorted by (src, dst), reconstructed from CSR.
    EdgeList edges() const {
        EdgeList out;
        out.reserve(m_);
        for (NodeId v = 0; v < n_; ++v)
            for (NodeId u : out_.row(v)) out.push_back({v, u});
        return out;
    }

    std::size_t dropped_self_loops() const { return dropped_self_loops_; }
    std::size_t dropped_duplicates() const { return dropped_duplicates_; }

    void check_node(NodeId v) const {
        if (v >= n_) throw ValidationError("node id " + std::to_string(v) + " out of range");
    }

private:
    void build_adjacency(const EdgeList& sorted_edges) {
        std::vector<std::size_t> out_deg(n_, 0), in_deg(n_, 0);
        for (const Edge& e : sorted_edges) {
            ++out_deg[e.src];
            ++in_deg[e.dst];
        }
        out_.offsets.assign(n_ + 1, 0);
        in_.offsets.assign(n_ + 1, 0);
        for (std::size_t v = 0; v < n_; ++v) {
            out_.offsets[v + 1] = out_.offsets[v] + out_deg[v];
            in_.offsets[v + 1] = in_.offsets[v] + in_deg[v];
        }
        out_.neighbors.resize(m_);
        in_.neighbors.resize(m_);
        std::vector<std::size_t> out_fill(out_.offsets.begin(), out_.offsets.end() - 1);
        std::vector<std::size_t> in_fill(in_.offsets.begin(), in_.offsets.end() - 1);
        for (const Edge& e : sorted_edges) {
            out_.neighbors[out_fill[e.src]++] = e.dst;
            in_.neighbors[in_fill[e.dst]++] = e.src;
        }
        // sorted_edges is sorted by (src,dst) so out rows are already sorted;
        // in rows need it.
        for (NodeId v = 0; v < n_; ++v) {
            auto* begin = in_.neighbors.data() + in_.offsets[v];
            auto* end = in_.neighbors.data() + in_.offsets[v + 1];
            std::sort(begin, end);
        }
        // Union adjacency for mode=both.
        both_.offsets.assign(n_ + 1, 0);
        std::vector<NodeId> merged;
        for (NodeId v = 0; v < n_; ++v) {
            merged.clear();
            const auto a = out_.row(v);
            const auto b = in_.row(v);
            std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(merged));
            both_.offsets[v + 1] = both_.offsets[v] + merged.size();
            both_.neighbors.insert(both_.neighbors.end(), merged.begin(), merged.end());
        }
    }

    std::size_t n_ = 0;
    std::size_t m_ = 0;
    Csr out_, in_, both_;
    Matrix features_;
    std::size_t dropped_self_loops_ = 0;
    std::size_t dropped_duplicates_ = 0;
};

// Sorted set of mode-neighbors of v, excluding v itself.
inline std::vector<NodeId> neighborhood(const DirectedGraph& g, NodeId v, NeighborMode mode) {
    g.check_node(v);
    const auto row = g.neighbors(v, mode);
    return {row.begin(), row.end()};
}

// Nodes reachable from v within k steps of the mode adjacency, excluding v.
inline std::vector<NodeId> k_hop(const DirectedGraph& g, NodeId v, std::size_t k, NeighborMode mode) {
    g.check_node(v);
    if (k < 1) throw ValidationError("k_hop requires k >= 1");
    std::vector<bool> seen(g.num_nodes(), false);
    seen[v] = true;
    std::vector<NodeId> frontier = {v}, next, result;
    for (std::size_t depth = 0; depth < k && !frontier.empty(); ++depth) {
        next.clear();
        for (NodeId x : frontier) {
            for (NodeId u : g.neighbors(x, mode)) {
                if (!seen[u]) {
                    seen[u] = true;
                    next.push_back(u);
                    result.push_back(u);
                }
            }
        }
        std::swap(frontier, next);
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace gglink
