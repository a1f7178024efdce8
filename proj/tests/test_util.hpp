#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gglink/graph.hpp"
#include "gglink/matrix.hpp"
#include "gglink/rng.hpp"

namespace testutil {

// Self-deleting scratch directory.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<unsigned> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("gglink_test_" + tag + "_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream f(p);
    f << content;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

// Random simple directed graph with exactly `m` distinct non-self edges.
inline gglink::EdgeList random_edges(std::size_t n, std::size_t m, std::uint64_t seed) {
    gglink::Rng rng(seed);
    std::set<std::pair<gglink::NodeId, gglink::NodeId>> chosen;
    while (chosen.size() < m) {
        const auto u = static_cast<gglink::NodeId>(rng.uniform_int(n));
        const auto v = static_cast<gglink::NodeId>(rng.uniform_int(n));
        if (u != v) chosen.insert({u, v});
    }
    gglink::EdgeList edges;
    for (const auto& [u, v] : chosen) edges.push_back({u, v});
    return edges;
}

inline gglink::Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                    double scale = 1.0) {
    gglink::Rng rng(seed);
    gglink::Matrix m(rows, cols);
    for (double& x : m.data) x = (2.0 * rng.uniform01() - 1.0) * scale;
    return m;
}

// Dense reference for the mean aggregation: (D+I)^-1 (A_mode + I) h.
inline gglink::Matrix dense_mean_aggregate(const gglink::DirectedGraph& g, const gglink::Matrix& h,
                                           gglink::NeighborMode mode) {
    const std::size_t n = g.num_nodes();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (gglink::NodeId v = 0; v < n; ++v) {
        a[v][v] = 1.0;
        for (gglink::NodeId u : g.neighbors(v, mode)) a[v][u] = 1.0;
    }
    gglink::Matrix out(n, h.cols);
    for (std::size_t v = 0; v < n; ++v) {
        double deg = 0.0;
        for (std::size_t u = 0; u < n; ++u) deg += a[v][u];
        for (std::size_t j = 0; j < h.cols; ++j) {
            double s = 0.0;
            for (std::size_t u = 0; u < n; ++u) s += a[v][u] * h(u, j);
            out(v, j) = s / deg;
        }
    }
    return out;
}

inline double max_abs_diff(const gglink::Matrix& a, const gglink::Matrix& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        d = std::max(d, std::abs(a.data[i] - b.data[i]));
    return d;
}

// Relative error with an absolute floor for near-zero references.
inline double rel_err(double got, double want, double floor = 1e-8) {
    return std::abs(got - want) / std::max(std::abs(want), floor);
}

// Central finite difference of a scalar function of one coordinate.
template <typename F>
double central_diff(F&& f, double& x, double step = 1e-6) {
    const double saved = x;
    x = saved + step;
    const double up = f();
    x = saved - step;
    const double down = f();
    x = saved;
    return (up - down) / (2.0 * step);
}

}  // namespace testutil
