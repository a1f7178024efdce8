#pragma once

#include <string>
#include <vector>

#include "gglink/json_util.hpp"
#include "gglink/metrics.hpp"
#include "gglink/training.hpp"

namespace gglink {

inline Json config_to_json(const TrainConfig& cfg) {
    return Json{{"learning_rate", cfg.learning_rate},
                {"max_epochs", cfg.max_epochs},
                {"batch_size", cfg.batch_size},
                {"hidden_dim", cfg.hidden_dim},
                {"embedding_dim", cfg.embedding_dim},
                {"patience", cfg.patience},
                {"seed", cfg.seed},
                {"decoder", to_string(cfg.decoder.type)},
                {"eps_dist", cfg.decoder.eps_dist},
                {"encoder", to_string(cfg.encoder_kind)},
                {"neighbor_mode", to_string(cfg.neighbor_mode)},
                {"mass_outside_norm", cfg.mass_outside_norm},
                {"stop_metric", to_string(cfg.stop_metric)},
                {"adam_beta1", cfg.adam_beta1},
                {"adam_beta2", cfg.adam_beta2},
                {"adam_eps", cfg.adam_eps},
                {"log_every", cfg.log_every}};
}

// Applies a JSON object onto a config; unknown keys are an error (named).
inline void apply_config_json(const Json& j, TrainConfig& cfg) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "learning_rate") cfg.learning_rate = value.get<double>();
        else if (key == "max_epochs") cfg.max_epochs = value.get<unsigned>();
        else if (key == "batch_size") cfg.batch_size = value.get<std::size_t>();
        else if (key == "hidden_dim") cfg.hidden_dim = value.get<std::size_t>();
        else if (key == "embedding_dim") cfg.embedding_dim = value.get<std::size_t>();
        else if (key == "patience") cfg.patience = value.get<unsigned>();
        else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
        else if (key == "decoder") cfg.decoder.type = decoder_type_from_string(value.get<std::string>());
        else if (key == "eps_dist") cfg.decoder.eps_dist = value.get<double>();
        else if (key == "encoder") cfg.encoder_kind = encoder_kind_from_string(value.get<std::string>());
        else if (key == "neighbor_mode") cfg.neighbor_mode = neighbor_mode_from_string(value.get<std::string>());
        else if (key == "mass_outside_norm") cfg.mass_outside_norm = value.get<bool>();
        else if (key == "stop_metric") cfg.stop_metric = stop_metric_from_string(value.get<std::string>());
        else if (key == "adam_beta1") cfg.adam_beta1 = value.get<double>();
        else if (key == "adam_beta2") cfg.adam_beta2 = value.get<double>();
        else if (key == "adam_eps") cfg.adam_eps = value.get<double>();
        else if (key == "log_every") cfg.log_every = value.get<unsigned>();
        else throw ParseError("unknown config key: " + key);
    }
}

namespace detail {

inline Json round6_array(const std::vector<double>& v) {
    Json a = Json::array();
    for (double x : v) a.push_back(round6(x));
    return a;
}

}  // namespace detail

// The serialized report is fully deterministic for a given (inputs, seed):
// wall time lives in the run manifest instead.
inline Json train_report_to_json(const TrainReport& report, const TrainConfig& cfg) {
    Json j;
    j["format"] = "gglink-train-report";
    j["version"] = 1;
    j["config"] = config_to_json(cfg);
    j["rng_algorithm"] = Rng::kAlgorithmId;
    j["batch_semantics"] = "batch_size positives + batch_size paired negatives";
    j["ap_tie_seed"] = kApTieSeed;
    j["epochs"] = {{"train_loss", detail::round6_array(report.train_loss)},
                   {"val_auc", detail::round6_array(report.val_auc)},
                   {"val_ap", detail::round6_array(report.val_ap)}};
    j["stopped_epoch"] = report.stopped_epoch;
    j["best_epoch"] = report.best_epoch;
    j["best_val_metric"] = round6(report.best_val_metric);
    j["test"] = {{"auc", round6(report.test_auc)},
                 {"ap", round6(report.test_ap)},
                 {"auc_pct", to_pct2(report.test_auc)},
                 {"ap_pct", to_pct2(report.test_ap)}};
    return j;
}

}  // namespace gglink
