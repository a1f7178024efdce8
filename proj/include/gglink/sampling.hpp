#pragma once

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "gglink/errors.hpp"
#include "gglink/graph.hpp"
#include "gglink/rng.hpp"

namespace gglink {

// Train graph plus frozen evaluation edge sets. Eval negatives are sampled
// once here; training-time negatives are resampled per epoch (see
// epoch_negatives).
struct EdgeSplit {
    DirectedGraph train_graph;
    EdgeList val_pos, val_neg;
    EdgeList test_pos, test_neg;
    std::uint64_t seed = 0;
    double val_frac = 0.0;
    double test_frac = 0.0;
    std::size_t original_num_edges = 0;
};

// Uniform sample of `count` ordered non-edges of g, excluding self-pairs,
// pairs in `exclude`, and duplicates within the result.
//
// Rejection sampling is used on sparse graphs. Past 95% density rejection is
// no longer viable; if the pair space is small enough we enumerate the
// admissible non-edges instead (this also covers the forced-outcome case of
// a complete-minus-one graph), otherwise we give up with an error.
inline EdgeList sample_negatives(const DirectedGraph& g, std::size_t count, const EdgeList& exclude,
                                 std::uint64_t seed) {
    if (count == 0) return {};
    const std::size_t n = g.num_nodes();
    const std::size_t total_pairs = n * (n - 1);
    const std::size_t non_edges = total_pairs - g.num_edges();
    if (count > non_edges)
        throw ValidationError("insufficient non-edges: requested " + std::to_string(count) + " of " +
                              std::to_string(non_edges));

    const auto key = [n](NodeId u, NodeId v) {
        return static_cast<std::uint64_t>(u) * n + v;
    };
    std::unordered_set<std::uint64_t> taken;
    taken.reserve(exclude.size() + count);
    for (const Edge& e : exclude) taken.insert(key(e.src, e.dst));

    Rng rng(seed);
    EdgeList result;
    result.reserve(count);

    const bool dense = 20 * g.num_edges() > 19 * total_pairs;  // > 95% of possible pairs
    if (!dense) {
        std::size_t attempts = 0;
        const std::size_t budget = 100 * count + 1000;
        while (result.size() < count) {
            if (++attempts > budget)
                throw ValidationError("negative sampling rejection budget exceeded");
            const NodeId u = static_cast<NodeId>(rng.uniform_int(n));
            const NodeId v = static_cast<NodeId>(rng.uniform_int(n));
            if (u == v || g.has_edge(u, v)) continue;
            if (!taken.insert(key(u, v)).second) continue;
            result.push_back({u, v});
        }
        return result;
    }

    constexpr std::size_t kEnumerationLimit = 1u << 26;
    if (total_pairs > kEnumerationLimit)
        throw ValidationError("negative sampling rejection budget exceeded: graph denser than 95% of " +
                              std::to_string(total_pairs) + " ordered pairs");
    EdgeList candidates;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (u != v && !g.has_edge(u, v) && !taken.count(key(u, v))) candidates.push_back({u, v});
    if (count > candidates.size())
        throw ValidationError("insufficient non-edges after exclusions");
    // Partial Fisher-Yates: the first `count` slots are a uniform sample.
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_int(candidates.size() - i));
        std::swap(candidates[i], candidates[j]);
        result.push_back(candidates[i]);
    }
    return result;
}

// Removal protocol: |test_pos| = floor(test_frac*m), |val_pos| = floor(val_frac*m),
// remainder stays in the training graph. Removal is per directed edge, so the
// reverse counterpart of a removed edge survives unless it was drawn itself.
// Negatives are sampled against the ORIGINAL edge set; val and test negatives
// are kept disjoint.
inline EdgeSplit split_edges(const DirectedGraph& g, double val_frac, double test_frac,
                             std::uint64_t seed) {
    if (val_frac < 0.0 || test_frac < 0.0 || val_frac + test_frac <= 0.0 || val_frac + test_frac >= 1.0)
        throw ValidationError("split fractions out of range: val=" + std::to_string(val_frac) +
                              " test=" + std::to_string(test_frac));
    const std::size_t m = g.num_edges();
    if (m < 20)
        throw ValidationError("graph too small to split: " + std::to_string(m) + " edges (need >= 20)");

    // floor(frac*m); the nudge keeps products like 0.15*20 from landing one
    // ulp under the intended integer.
    const auto num_test = static_cast<std::size_t>(test_frac * static_cast<double>(m) + 1e-9);
    const auto num_val = static_cast<std::size_t>(val_frac * static_cast<double>(m) + 1e-9);
    if (num_test == 0 || num_val == 0)
        throw ValidationError("split fractions yield an empty validation or test set");

    EdgeList edges = g.edges();
    Rng shuffle_rng(derive_seed(seed, rng_stream::kSplitShuffle));
    shuffle_rng.shuffle(edges);

    EdgeList test_pos(edges.begin(), edges.begin() + num_test);
    EdgeList val_pos(edges.begin() + num_test, edges.begin() + num_test + num_val);
    EdgeList train(edges.begin() + num_test + num_val, edges.end());

    EdgeList val_neg = sample_negatives(g, num_val, {}, derive_seed(seed, rng_stream::kValNegatives));
    EdgeList test_neg = sample_negatives(g, num_test, val_neg, derive_seed(seed, rng_stream::kTestNegatives));

    Matrix features = g.features();  // shared attributes, copied into the train graph
    return EdgeSplit{DirectedGraph(g.num_nodes(), std::move(train), std::move(features)),
                     std::move(val_pos), std::move(val_neg),
                     std::move(test_pos), std::move(test_neg),
                     seed, val_frac, test_frac, m};
}

// Fresh training negatives for one epoch, one per positive, reproducible from
// (seed, epoch). These are negatives of the TRAIN graph only; held-out
// positives are unknown at training time.
inline EdgeList epoch_negatives(const DirectedGraph& train_graph, const EdgeList& pos_batch,
                                std::uint64_t seed, unsigned epoch) {
    return sample_negatives(train_graph, pos_batch.size(), {},
                            derive_seed(seed, rng_stream::kEpochNegatives, epoch));
}

}  // namespace gglink
