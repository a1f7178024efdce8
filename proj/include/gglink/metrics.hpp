#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gglink/errors.hpp"
#include "gglink/rng.hpp"

namespace gglink {

// Scores with aligned binary labels (1 = edge, 0 = non-edge).
struct ScoredEdges {
    std::vector<double> scores;
    std::vector<int> labels;

    std::size_t size() const { return scores.size(); }

    void validate() const {
        if (scores.size() != labels.size()) throw ValidationError("scores/labels length mismatch");
        for (int l : labels)
            if (l != 0 && l != 1) throw ValidationError("labels must be 0 or 1");
    }

    static ScoredEdges from_pos_neg(const std::vector<double>& pos, const std::vector<double>& neg) {
        ScoredEdges s;
        s.scores.reserve(pos.size() + neg.size());
        s.labels.reserve(pos.size() + neg.size());
        for (double x : pos) {
            s.scores.push_back(x);
            s.labels.push_back(1);
        }
        for (double x : neg) {
            s.scores.push_back(x);
            s.labels.push_back(0);
        }
        return s;
    }
};

// Rank-based (Mann-Whitney) AUC; tied pairs contribute 1/2.
inline double auc(const ScoredEdges& s) {
    s.validate();
    const std::size_t total = s.size();
    std::size_t num_pos = 0;
    for (int l : s.labels) num_pos += static_cast<std::size_t>(l);
    const std::size_t num_neg = total - num_pos;
    if (num_pos == 0 || num_neg == 0)
        throw ValidationError("AUC needs at least one positive and one negative");

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s.scores[a] < s.scores[b]; });

    // Average ranks within tie groups.
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < total) {
        std::size_t j = i;
        while (j < total && s.scores[order[j]] == s.scores[order[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t k = i; k < j; ++k)
            if (s.labels[order[k]] == 1) pos_rank_sum += avg_rank;
        i = j;
    }
    const double u = pos_rank_sum - 0.5 * static_cast<double>(num_pos) * static_cast<double>(num_pos + 1);
    return u / (static_cast<double>(num_pos) * static_cast<double>(num_neg));
}

// Tie order for AP is made deterministic by shuffling indices with this seed
// before the stable sort; reports record the seed used.
constexpr std::uint64_t kApTieSeed = 0;

// Average precision: sum of precision@k over the ranks k holding positives,
// divided by the number of positives (the rank-step form of the PR-curve area).
inline double ap(const ScoredEdges& s, std::uint64_t tie_seed = kApTieSeed) {
    s.validate();
    const std::size_t total = s.size();
    std::size_t num_pos = 0;
    for (int l : s.labels) num_pos += static_cast<std::size_t>(l);
    if (num_pos == 0) throw ValidationError("AP needs at least one positive");

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(tie_seed);
    rng.shuffle(order);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return s.scores[a] > s.scores[b]; });

    double sum_precision = 0.0;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < total; ++k) {
        if (s.labels[order[k]] == 1) {
            ++hits;
            sum_precision += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
    }
    return sum_precision / static_cast<double>(num_pos);
}

struct FoldStats {
    double mean = 0.0;
    double std_dev = 0.0;   // sample (n-1) standard deviation
    bool single = false;    // one value: std_dev is 0 by convention
};

inline FoldStats fold_stats(const std::vector<double>& values) {
    if (values.empty()) throw ValidationError("fold_stats needs at least one value");
    FoldStats fs;
    fs.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    if (values.size() == 1) {
        fs.single = true;
        return fs;
    }
    double ss = 0.0;
    for (double v : values) ss += (v - fs.mean) * (v - fs.mean);
    fs.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return fs;
}

}  // namespace gglink
