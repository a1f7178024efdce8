#pragma once

#include <cstdlib>
#include <exception>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "gglink/report_io.hpp"
#include "gglink/sampling.hpp"
#include "gglink/training.hpp"

namespace gglink {

// Worker cap: GGLINK_THREADS if set, else hardware concurrency.
inline unsigned worker_cap() {
    if (const char* env = std::getenv("GGLINK_THREADS")) {
        const long v = std::atol(env);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs tasks 0..count-1 with at most `threads` workers. Each task writes only
// its own slot, so results are identical regardless of worker count.
template <typename Fn>
inline void parallel_for_tasks(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&, w]() {
            for (std::size_t i = w; i < count; i += threads) {
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

// One cross-validated run of one model on one dataset.
struct Experiment {
    std::string dataset_id;
    std::string model_id;
    TrainConfig config;
    double val_frac = 0.05;
    double test_frac = 0.10;
    std::uint64_t base_seed = 0;
    std::vector<std::uint64_t> fold_seeds;
    std::vector<TrainReport> fold_reports;
    FoldStats auc_stats, ap_stats;
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    std::size_t num_features = 0;
};

inline std::string model_id_for(const TrainConfig& cfg) {
    return std::string(to_string(cfg.encoder_kind)) + "+" + to_string(cfg.decoder.type);
}

// Cross validation with resampling: every fold draws a fresh random split
// (held-out sets of different folds may overlap). Fold i derives everything
// from seed base_seed + i, so two runs with the same base seed are identical
// and different models share the same splits.
inline Experiment run_cv(const DirectedGraph& g, const TrainConfig& cfg, unsigned folds,
                         std::uint64_t base_seed, double val_frac = 0.05, double test_frac = 0.10,
                         const std::string& dataset_id = "dataset", unsigned max_threads = 0) {
    if (folds < 1) throw ValidationError("run_cv: folds must be >= 1");
    Experiment exp;
    exp.dataset_id = dataset_id;
    exp.model_id = model_id_for(cfg);
    exp.config = cfg;
    exp.val_frac = val_frac;
    exp.test_frac = test_frac;
    exp.base_seed = base_seed;
    exp.num_nodes = g.num_nodes();
    exp.num_edges = g.num_edges();
    exp.num_features = g.feature_dim();
    exp.fold_seeds.resize(folds);
    exp.fold_reports.resize(folds);
    for (unsigned i = 0; i < folds; ++i) exp.fold_seeds[i] = base_seed + i;

    const unsigned threads = max_threads > 0 ? max_threads : worker_cap();
    parallel_for_tasks(folds, threads, [&](std::size_t i) {
        const std::uint64_t fold_seed = exp.fold_seeds[i];
        const EdgeSplit split = split_edges(g, val_frac, test_frac, fold_seed);
        TrainConfig fold_cfg = cfg;
        fold_cfg.seed = fold_seed;
        exp.fold_reports[i] = train(split, fold_cfg).second;
    });

    std::vector<double> aucs, aps;
    for (const TrainReport& r : exp.fold_reports) {
        aucs.push_back(r.test_auc);
        aps.push_back(r.test_ap);
    }
    exp.auc_stats = fold_stats(aucs);
    exp.ap_stats = fold_stats(aps);
    return exp;
}

inline Json experiment_to_json(const Experiment& exp) {
    Json j;
    j["format"] = "gglink-experiment";
    j["version"] = 1;
    j["dataset"] = exp.dataset_id;
    j["model"] = exp.model_id;
    j["config"] = config_to_json(exp.config);
    j["val_frac"] = exp.val_frac;
    j["test_frac"] = exp.test_frac;
    j["base_seed"] = exp.base_seed;
    j["fold_seeds"] = exp.fold_seeds;
    j["graph"] = {{"nodes", exp.num_nodes}, {"edges", exp.num_edges}, {"features", exp.num_features}};
    Json folds = Json::array();
    for (std::size_t i = 0; i < exp.fold_reports.size(); ++i) {
        Json f = train_report_to_json(exp.fold_reports[i], exp.config);
        f["fold_seed"] = exp.fold_seeds[i];
        folds.push_back(std::move(f));
    }
    j["folds"] = std::move(folds);
    j["aggregate"] = {{"auc_mean", round6(exp.auc_stats.mean)},
                      {"auc_std", round6(exp.auc_stats.std_dev)},
                      {"ap_mean", round6(exp.ap_stats.mean)},
                      {"ap_std", round6(exp.ap_stats.std_dev)},
                      {"auc_pct", format_pct2(exp.auc_stats.mean) + " ± " + format_pct2(exp.auc_stats.std_dev)},
                      {"ap_pct", format_pct2(exp.ap_stats.mean) + " ± " + format_pct2(exp.ap_stats.std_dev)}};
    return j;
}

// Paper-table style line: "AUC 93.61 ± 1.82, AP 93.69 ± 1.79".
inline std::string format_experiment_summary(const Experiment& exp) {
    std::ostringstream os;
    os << "AUC " << format_pct2(exp.auc_stats.mean) << " ± " << format_pct2(exp.auc_stats.std_dev)
       << ", AP " << format_pct2(exp.ap_stats.mean) << " ± " << format_pct2(exp.ap_stats.std_dev);
    return os.str();
}

// Graph-properties/metrics table for external regression tooling. One row per
// (dataset, model); metrics as percentages with 2 decimals.
inline std::string export_properties(const std::vector<Experiment>& experiments) {
    std::ostringstream os;
    os << "dataset,nodes,edges,features,model,auc_mean,auc_std,ap_mean,ap_std\n";
    for (const Experiment& e : experiments) {
        os << e.dataset_id << "," << e.num_nodes << "," << e.num_edges << "," << e.num_features
           << "," << e.model_id << "," << format_pct2(e.auc_stats.mean) << ","
           << format_pct2(e.auc_stats.std_dev) << "," << format_pct2(e.ap_stats.mean) << ","
           << format_pct2(e.ap_stats.std_dev) << "\n";
    }
    return os.str();
}

}  // namespace gglink
