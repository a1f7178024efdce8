// gglink: directed link prediction with a gravity-inspired GraphSAGE decoder.
// Subcommands: split, train, eval, crossval. All randomness flows from --seed;
// identical invocations produce byte-identical JSON reports.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gglink/gglink.hpp"

namespace fs = std::filesystem;
using gglink::Json;

namespace {

std::string iso8601_utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ManifestClock {
    std::string started_at = iso8601_utc_now();
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    void finalize(Json& manifest) const {
        manifest["started_at"] = started_at;
        manifest["finished_at"] = iso8601_utc_now();
        manifest["wall_time_sec"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

Json input_entry(const fs::path& path) {
    return Json{{"path", path.string()}, {"fnv1a64", gglink::fnv1a_file_hash(path)}};
}

Json manifest_base(const std::string& command) {
    Json m;
    m["format"] = "gglink-manifest";
    m["version"] = 1;
    m["tool_version"] = gglink::kVersion;
    m["command"] = command;
    m["rng_algorithm"] = gglink::Rng::kAlgorithmId;
    return m;
}

// Shared train-config flags. Precedence: defaults < --config file < explicit
// flags; the resolved config is echoed into the manifest.
struct TrainFlags {
    std::string config_file;
    std::string decoder, encoder, neighbor_mode, stop_metric;
    double lr = 0.0, eps_dist = 0.0;
    unsigned epochs = 0, patience = 0, log_every = 0;
    std::size_t batch = 0, hidden = 0, embedding = 0;
    std::uint64_t seed = 0;
    bool mass_outside_norm = false;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "JSON config file (overridden by explicit flags)");
        cmd->add_option("--decoder", decoder, "Decoder: gravity|st|sym (default gravity)");
        cmd->add_option("--encoder", encoder, "Encoder: sage|gcn (default sage)");
        cmd->add_option("--neighbor-mode", neighbor_mode, "Message passing neighbors: in|out|both");
        cmd->add_option("--stop-metric", stop_metric, "Early-stopping metric: auc|ap");
        cmd->add_option("--lr", lr, "Learning rate (default 0.001)");
        cmd->add_option("--eps-dist", eps_dist, "Gravity distance-squared floor (default 1e-10)");
        cmd->add_option("--epochs", epochs, "Max epochs (default 200)");
        cmd->add_option("--patience", patience, "Early-stopping patience (default 20)");
        cmd->add_option("--log-every", log_every, "Print a training line every N epochs");
        cmd->add_option("--batch", batch, "Positive edges per batch (default 128)");
        cmd->add_option("--hidden", hidden, "Hidden dimension (default 64)");
        cmd->add_option("--embedding", embedding, "Embedding dimension (default 64)");
        cmd->add_option("--seed", seed, "RNG seed (default 1)");
        cmd->add_flag("--mass-outside-norm", mass_outside_norm,
                      "Keep the mass channel out of the final L2 normalization");
    }

    gglink::TrainConfig resolve(const CLI::App* cmd) const {
        gglink::TrainConfig cfg;
        if (!config_file.empty()) gglink::apply_config_json(gglink::load_json_file(config_file), cfg);
        if (cmd->count("--decoder")) cfg.decoder.type = gglink::decoder_type_from_string(decoder);
        if (cmd->count("--encoder")) cfg.encoder_kind = gglink::encoder_kind_from_string(encoder);
        if (cmd->count("--neighbor-mode"))
            cfg.neighbor_mode = gglink::neighbor_mode_from_string(neighbor_mode);
        if (cmd->count("--stop-metric")) cfg.stop_metric = gglink::stop_metric_from_string(stop_metric);
        if (cmd->count("--lr")) cfg.learning_rate = lr;
        if (cmd->count("--eps-dist")) cfg.decoder.eps_dist = eps_dist;
        if (cmd->count("--epochs")) cfg.max_epochs = epochs;
        if (cmd->count("--patience")) cfg.patience = patience;
        if (cmd->count("--log-every")) cfg.log_every = log_every;
        if (cmd->count("--batch")) cfg.batch_size = batch;
        if (cmd->count("--hidden")) cfg.hidden_dim = hidden;
        if (cmd->count("--embedding")) cfg.embedding_dim = embedding;
        if (cmd->count("--seed")) cfg.seed = seed;
        if (cmd->count("--mass-outside-norm")) cfg.mass_outside_norm = mass_outside_norm;
        cfg.validate();
        if (cfg.decoder.type == gglink::DecoderType::kSymmetric)
            std::cerr << "warning: symmetric decoder scores are direction-blind on a directed split\n";
        return cfg;
    }
};

int cmd_split(const std::string& edges, const std::optional<std::string>& features, double val_frac,
              double test_frac, std::uint64_t seed, const std::string& out, bool densify, bool f32) {
    ManifestClock clock;
    if (densify && features)
        throw gglink::ValidationError("--densify cannot be combined with --features "
                                      "(feature rows are keyed by dense node id)");

    fs::create_directories(out);
    gglink::FeatureSource fsrc;
    std::optional<gglink::DirectedGraph> graph;
    if (densify) {
        const auto raw = gglink::load_raw_edges(edges);
        const auto dense = gglink::densify_edges(raw);
        gglink::save_id_map(dense, fs::path(out) / "id_map.csv");
        graph.emplace(dense.original_id.size(), dense.edges);
    } else {
        std::optional<fs::path> fpath;
        if (features) fpath = *features;
        graph.emplace(gglink::load_graph(edges, fpath, {.features_f32 = f32}));
        if (features) {
            fsrc.path = *features;
            fsrc.f32 = f32;
            fsrc.hash = gglink::fnv1a_file_hash(*features);
        }
    }
    if (graph->dropped_self_loops() || graph->dropped_duplicates())
        std::cerr << "note: dropped " << graph->dropped_self_loops() << " self-loop(s) and "
                  << graph->dropped_duplicates() << " duplicate edge(s) at ingestion\n";

    const gglink::EdgeSplit split = gglink::split_edges(*graph, val_frac, test_frac, seed);
    gglink::save_split(split, out, fsrc);

    Json manifest = manifest_base("split");
    manifest["inputs"]["edges"] = input_entry(edges);
    if (features) manifest["inputs"]["features"] = input_entry(*features);
    manifest["params"] = {{"val_frac", val_frac}, {"test_frac", test_frac},   {"seed", seed},
                          {"densify", densify},   {"features_f32", f32},
                          {"dropped_self_loops", graph->dropped_self_loops()},
                          {"dropped_duplicates", graph->dropped_duplicates()}};
    clock.finalize(manifest);
    gglink::save_json_file(manifest, fs::path(out) / "manifest.json");

    std::cout << "split written to " << out << ": " << split.train_graph.num_edges() << " train, "
              << split.val_pos.size() << " val, " << split.test_pos.size() << " test edges\n";
    return 0;
}

int cmd_train(const std::string& split_dir, const std::string& out, const TrainFlags& flags,
              const CLI::App* cmd) {
    ManifestClock clock;
    const gglink::TrainConfig cfg = flags.resolve(cmd);
    const gglink::EdgeSplit split = gglink::load_split(split_dir);

    auto [params, report] = gglink::train(split, cfg);

    fs::create_directories(out);
    gglink::Checkpoint ckpt{std::move(params), cfg.decoder, cfg.embedding_dim, cfg.seed};
    gglink::save_checkpoint(ckpt, fs::path(out) / "checkpoint.json");
    gglink::save_json_file(gglink::train_report_to_json(report, cfg), fs::path(out) / "report.json");

    Json manifest = manifest_base("train");
    manifest["inputs"]["split_dir"] = split_dir;
    manifest["inputs"]["split_meta"] = input_entry(fs::path(split_dir) / "meta.json");
    manifest["resolved_config"] = gglink::config_to_json(cfg);
    manifest["train_wall_time_sec"] = report.wall_time_sec;
    clock.finalize(manifest);
    gglink::save_json_file(manifest, fs::path(out) / "manifest.json");

    std::cout << "best epoch " << report.best_epoch << "/" << report.stopped_epoch << ", test AUC "
              << gglink::format_pct2(report.test_auc) << ", AP "
              << gglink::format_pct2(report.test_ap) << "\n";
    return 0;
}

int cmd_eval(const std::string& checkpoint_path, const std::string& split_dir,
             const std::string& out_file, const std::string& expect_decoder) {
    ManifestClock clock;
    const gglink::Checkpoint ckpt = gglink::load_checkpoint(checkpoint_path);
    if (!expect_decoder.empty() &&
        gglink::decoder_type_from_string(expect_decoder) != ckpt.decoder.type)
        throw gglink::ValidationError(
            "checkpoint was trained with decoder '" + std::string(gglink::to_string(ckpt.decoder.type)) +
            "', refusing to evaluate as '" + expect_decoder + "'");

    const gglink::EdgeSplit split = gglink::load_split(split_dir);
    const gglink::ForwardResult fwd = gglink::encoder_forward(split.train_graph, ckpt.params);
    const gglink::ScoredEdges test = gglink::ScoredEdges::from_pos_neg(
        gglink::score_edges(ckpt.decoder, fwd.embedding, split.test_pos),
        gglink::score_edges(ckpt.decoder, fwd.embedding, split.test_neg));
    const double test_auc = gglink::auc(test);
    const double test_ap = gglink::ap(test);

    Json j;
    j["format"] = "gglink-eval";
    j["version"] = 1;
    j["decoder"] = gglink::to_string(ckpt.decoder.type);
    j["ap_tie_seed"] = gglink::kApTieSeed;
    j["counts"] = {{"test_pos", split.test_pos.size()}, {"test_neg", split.test_neg.size()}};
    j["test"] = {{"auc", gglink::round6(test_auc)},
                 {"ap", gglink::round6(test_ap)},
                 {"auc_pct", gglink::to_pct2(test_auc)},
                 {"ap_pct", gglink::to_pct2(test_ap)}};
    gglink::save_json_file(j, out_file);

    const fs::path manifest_path = fs::path(out_file).parent_path() / "eval_manifest.json";
    Json manifest = manifest_base("eval");
    manifest["inputs"]["checkpoint"] = input_entry(checkpoint_path);
    manifest["inputs"]["split_dir"] = split_dir;
    clock.finalize(manifest);
    gglink::save_json_file(manifest, manifest_path);

    std::cout << "test AUC " << gglink::format_pct2(test_auc) << ", AP "
              << gglink::format_pct2(test_ap) << "\n";
    return 0;
}

int cmd_crossval(const std::string& edges, const std::optional<std::string>& features,
                 unsigned folds, double val_frac, double test_frac, std::string dataset,
                 const std::string& out, bool f32, const TrainFlags& flags, const CLI::App* cmd) {
    ManifestClock clock;
    const gglink::TrainConfig cfg = flags.resolve(cmd);
    std::optional<fs::path> fpath;
    if (features) fpath = *features;
    const gglink::DirectedGraph graph = gglink::load_graph(edges, fpath, {.features_f32 = f32});
    if (dataset.empty()) dataset = fs::path(edges).stem().string();

    const gglink::Experiment exp =
        gglink::run_cv(graph, cfg, folds, cfg.seed, val_frac, test_frac, dataset);

    fs::create_directories(out);
    gglink::save_json_file(gglink::experiment_to_json(exp), fs::path(out) / "experiment.json");
    {
        std::ofstream csv(fs::path(out) / "properties.csv");
        if (!csv) throw gglink::IoError("cannot write properties.csv");
        csv << gglink::export_properties({exp});
    }

    Json manifest = manifest_base("crossval");
    manifest["inputs"]["edges"] = input_entry(edges);
    if (features) manifest["inputs"]["features"] = input_entry(*features);
    manifest["resolved_config"] = gglink::config_to_json(cfg);
    manifest["params"] = {{"folds", folds},
                          {"val_frac", val_frac},
                          {"test_frac", test_frac},
                          {"dataset", dataset},
                          {"features_f32", f32}};
    clock.finalize(manifest);
    gglink::save_json_file(manifest, fs::path(out) / "manifest.json");

    std::cout << dataset << " (" << exp.model_id << "): " << gglink::format_experiment_summary(exp)
              << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gglink: directed link prediction on attributed graphs"};
    app.require_subcommand(1);

    // split
    auto* split = app.add_subcommand("split", "Split a graph into train/val/test edge sets");
    std::string sp_edges, sp_features, sp_out;
    double sp_val = 0.05, sp_test = 0.10;
    std::uint64_t sp_seed = 1;
    bool sp_densify = false, sp_f32 = false;
    split->add_option("--edges", sp_edges, "Edge CSV (src,dst)")->required();
    split->add_option("--features", sp_features, "Feature CSV (one row per node)");
    split->add_option("--val", sp_val, "Validation fraction (default 0.05)");
    split->add_option("--test", sp_test, "Test fraction (default 0.10)");
    split->add_option("--seed", sp_seed, "RNG seed");
    split->add_option("--out", sp_out, "Output directory")->required();
    split->add_flag("--densify", sp_densify, "Remap sparse node ids, writing id_map.csv");
    split->add_flag("--f32", sp_f32, "Store features at float32 precision");

    // train
    auto* train = app.add_subcommand("train", "Train a model on a split directory");
    std::string tr_split, tr_out = "run";
    TrainFlags tr_flags;
    train->add_option("--split", tr_split, "Split directory from `gglink split`")->required();
    train->add_option("--out", tr_out, "Output directory (default ./run)");
    tr_flags.attach(train);

    // eval
    auto* eval = app.add_subcommand("eval", "Evaluate a checkpoint on a split's test set");
    std::string ev_ckpt, ev_split, ev_out = "metrics.json", ev_decoder;
    eval->add_option("--checkpoint", ev_ckpt, "Checkpoint JSON")->required();
    eval->add_option("--split", ev_split, "Split directory")->required();
    eval->add_option("--out", ev_out, "Metrics JSON output (default metrics.json)");
    eval->add_option("--decoder", ev_decoder, "Assert the checkpoint's decoder type");

    // crossval
    auto* cv = app.add_subcommand("crossval", "k-fold cross validation with resampling");
    std::string cv_edges, cv_features, cv_out = "cv", cv_dataset;
    unsigned cv_folds = 5;
    double cv_val = 0.05, cv_test = 0.10;
    bool cv_f32 = false;
    TrainFlags cv_flags;
    cv->add_option("--edges", cv_edges, "Edge CSV (src,dst)")->required();
    cv->add_option("--features", cv_features, "Feature CSV");
    cv->add_option("--folds", cv_folds, "Number of folds (default 5)");
    cv->add_option("--val", cv_val, "Validation fraction (default 0.05)");
    cv->add_option("--test", cv_test, "Test fraction (default 0.10)");
    cv->add_option("--dataset", cv_dataset, "Dataset id for reports (default: edge file stem)");
    cv->add_option("--out", cv_out, "Output directory (default ./cv)");
    cv->add_flag("--f32", cv_f32, "Store features at float32 precision");
    cv_flags.attach(cv);

    CLI11_PARSE(app, argc, argv);

    try {
        if (split->parsed()) {
            std::optional<std::string> features;
            if (split->count("--features")) features = sp_features;
            return cmd_split(sp_edges, features, sp_val, sp_test, sp_seed, sp_out, sp_densify, sp_f32);
        }
        if (train->parsed()) return cmd_train(tr_split, tr_out, tr_flags, train);
        if (eval->parsed()) return cmd_eval(ev_ckpt, ev_split, ev_out, ev_decoder);
        if (cv->parsed()) {
            std::optional<std::string> features;
            if (cv->count("--features")) features = cv_features;
            return cmd_crossval(cv_edges, features, cv_folds, cv_val, cv_test, cv_dataset, cv_out,
                                cv_f32, cv_flags, cv);
        }
    } catch (const gglink::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const gglink::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 3;
    } catch (const gglink::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
