#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

#include "gglink/graph_io.hpp"
#include "gglink/json_util.hpp"
#include "gglink/sampling.hpp"

namespace gglink {

// How the node features of a split are recovered at train/eval time. The
// split directory stores edges only; features are reloaded from the original
// file (identity features need no file at all).
struct FeatureSource {
    std::optional<std::string> path;  // nullopt -> identity features
    bool f32 = false;
    std::optional<std::string> hash;  // FNV-1a of the file at split time
};

inline void save_edge_list_csv(const EdgeList& edges, const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw IoError("cannot write: " + path.string());
    f << "src,dst\n";
    for (const Edge& e : edges) f << e.src << "," << e.dst << "\n";
    if (!f) throw IoError("write failed: " + path.string());
}

inline EdgeList load_edge_list_csv(const std::filesystem::path& path) {
    EdgeList edges;
    for (const RawEdge& e : load_raw_edges(path)) {
        if (e.src < 0 || e.dst < 0) throw ValidationError(path.string() + ": negative node id");
        edges.push_back({static_cast<NodeId>(e.src), static_cast<NodeId>(e.dst)});
    }
    return edges;
}

// Directory layout: train_edges.csv, val_pos.csv, val_neg.csv, test_pos.csv,
// test_neg.csv, meta.json.
inline void save_split(const EdgeSplit& split, const std::filesystem::path& dir,
                       const FeatureSource& features) {
    std::filesystem::create_directories(dir);
    save_edge_list_csv(split.train_graph.edges(), dir / "train_edges.csv");
    save_edge_list_csv(split.val_pos, dir / "val_pos.csv");
    save_edge_list_csv(split.val_neg, dir / "val_neg.csv");
    save_edge_list_csv(split.test_pos, dir / "test_pos.csv");
    save_edge_list_csv(split.test_neg, dir / "test_neg.csv");

    Json meta;
    meta["format"] = "gglink-split";
    meta["version"] = 1;
    meta["seed"] = split.seed;
    meta["val_frac"] = split.val_frac;
    meta["test_frac"] = split.test_frac;
    meta["rng_algorithm"] = Rng::kAlgorithmId;
    meta["num_nodes"] = split.train_graph.num_nodes();
    meta["num_edges_original"] = split.original_num_edges;
    meta["counts"] = {{"train", split.train_graph.num_edges()},
                      {"val_pos", split.val_pos.size()},
                      {"val_neg", split.val_neg.size()},
                      {"test_pos", split.test_pos.size()},
                      {"test_neg", split.test_neg.size()}};
    meta["features"] = {{"path", features.path ? Json(*features.path) : Json(nullptr)},
                        {"f32", features.f32},
                        {"hash", features.hash ? Json(*features.hash) : Json(nullptr)}};
    save_json_file(meta, dir / "meta.json");
}

inline EdgeSplit load_split(const std::filesystem::path& dir) {
    const Json meta = load_json_file(dir / "meta.json");
    if (meta.value("format", "") != "gglink-split")
        throw ParseError(dir.string() + "/meta.json: not a gglink split");

    const auto n = meta.at("num_nodes").get<std::size_t>();
    Matrix features;
    const Json& fj = meta.at("features");
    if (!fj.at("path").is_null()) {
        const std::string fpath = fj.at("path").get<std::string>();
        if (!fj.at("hash").is_null()) {
            const std::string now = fnv1a_file_hash(fpath);
            if (now != fj.at("hash").get<std::string>())
                throw ValidationError("feature file " + fpath + " changed since the split was written");
        }
        features = load_feature_csv(fpath, fj.value("f32", false));
        if (features.rows != n)
            throw ValidationError("feature file " + fpath + " rows != num_nodes in split meta");
    }

    EdgeSplit split{
        DirectedGraph(n, load_edge_list_csv(dir / "train_edges.csv"), std::move(features)),
        load_edge_list_csv(dir / "val_pos.csv"),
        load_edge_list_csv(dir / "val_neg.csv"),
        load_edge_list_csv(dir / "test_pos.csv"),
        load_edge_list_csv(dir / "test_neg.csv"),
        meta.at("seed").get<std::uint64_t>(),
        meta.at("val_frac").get<double>(),
        meta.at("test_frac").get<double>(),
        meta.at("num_edges_original").get<std::size_t>()};
    for (const EdgeList* el : {&split.val_pos, &split.val_neg, &split.test_pos, &split.test_neg})
        for (const Edge& e : *el)
            if (e.src >= n || e.dst >= n) throw ValidationError("split edge id out of range");
    return split;
}

}  // namespace gglink
