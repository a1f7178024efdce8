#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gglink/decoder.hpp"
#include "gglink/encoder.hpp"
#include "gglink/metrics.hpp"
#include "gglink/sampling.hpp"

namespace gglink {

enum class StopMetric { kAuc, kAp };

inline const char* to_string(StopMetric m) { return m == StopMetric::kAuc ? "auc" : "ap"; }

inline StopMetric stop_metric_from_string(const std::string& s) {
    if (s == "auc") return StopMetric::kAuc;
    if (s == "ap") return StopMetric::kAp;
    throw ValidationError("unknown stopping metric: " + s);
}

struct TrainConfig {
    double learning_rate = 0.001;
    unsigned max_epochs = 200;
    std::size_t batch_size = 128;   // positive edges per batch, each paired with one negative
    std::size_t hidden_dim = 64;
    std::size_t embedding_dim = 64;
    unsigned patience = 20;
    std::uint64_t seed = 1;
    DecoderKind decoder;
    EncoderKind encoder_kind = EncoderKind::kSage;
    NeighborMode neighbor_mode = NeighborMode::kBoth;
    bool mass_outside_norm = false;
    StopMetric stop_metric = StopMetric::kAuc;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    unsigned log_every = 0;  // 0 = silent

    void validate() const {
        if (!(learning_rate > 0.0)) throw ValidationError("learning_rate must be > 0");
        if (batch_size < 1) throw ValidationError("batch_size must be >= 1");
        if (patience < 1) throw ValidationError("patience must be >= 1");
        if (max_epochs < 1) throw ValidationError("max_epochs must be >= 1");
        if (hidden_dim < 1 || embedding_dim < 1) throw ValidationError("dims must be >= 1");
        decoder.validate();
    }
};

struct TrainReport {
    std::vector<double> train_loss;  // one entry per ran epoch
    std::vector<double> val_auc;
    std::vector<double> val_ap;
    unsigned stopped_epoch = 0;  // 1-based index of the last epoch that ran
    unsigned best_epoch = 0;     // epoch whose parameters were kept
    double best_val_metric = 0.0;
    double test_auc = 0.0;
    double test_ap = 0.0;
    double wall_time_sec = 0.0;  // volatile; goes into the manifest, not the report JSON
};

// Mean over the batch of log(1 + exp(-y'*z)), y' in {-1,+1}, in the stable
// branchwise form; gradient is (sigmoid(z) - y)/batch.
struct BceResult {
    double loss = 0.0;
    std::vector<double> grad_logits;
};

inline BceResult bce_loss_with_logits(std::span<const double> logits, std::span<const int> labels) {
    if (logits.size() != labels.size()) throw ValidationError("bce: logits/labels length mismatch");
    if (logits.empty()) throw ValidationError("bce: empty batch");
    BceResult r;
    r.grad_logits.resize(logits.size());
    const double inv = 1.0 / static_cast<double>(logits.size());
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double z = logits[i];
        const double y = static_cast<double>(labels[i]);
        r.loss += std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
        r.grad_logits[i] = (sigmoid(z) - y) * inv;
    }
    r.loss *= inv;
    return r;
}

// First/second moment state for one parameter tensor.
struct AdamState {
    std::vector<double> m, v;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

// One bias-corrected Adam update, in place.
inline void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
                      double lr, double beta1, double beta2, double eps, long t) {
    if (params.size() != grads.size() || params.size() != state.m.size())
        throw ValidationError("adam_step: size mismatch");
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        state.m[i] = beta1 * state.m[i] + (1.0 - beta1) * grads[i];
        state.v[i] = beta2 * state.v[i] + (1.0 - beta2) * grads[i] * grads[i];
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

// Adam over the full encoder parameter set.
class AdamOptimizer {
public:
    AdamOptimizer(const EncoderParams& params, double lr, double beta1, double beta2, double eps)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps),
          w1_(params.w1.data.size()), b1_(params.b1.size()),
          w2_(params.w2.data.size()), b2_(params.b2.size()) {}

    void step(EncoderParams& params, const EncoderGrads& grads) {
        ++t_;
        adam_step(params.w1.data, grads.w1.data, w1_, lr_, beta1_, beta2_, eps_, t_);
        adam_step(params.b1, grads.b1, b1_, lr_, beta1_, beta2_, eps_, t_);
        adam_step(params.w2.data, grads.w2.data, w2_, lr_, beta1_, beta2_, eps_, t_);
        adam_step(params.b2, grads.b2, b2_, lr_, beta1_, beta2_, eps_, t_);
    }

    long t() const { return t_; }

private:
    double lr_, beta1_, beta2_, eps_;
    AdamState w1_, b1_, w2_, b2_;
    long t_ = 0;
};

namespace detail {

inline ScoredEdges score_eval_set(const DecoderKind& decoder, const Matrix& emb,
                                  const EdgeList& pos, const EdgeList& neg) {
    return ScoredEdges::from_pos_neg(score_edges(decoder, emb, pos), score_edges(decoder, emb, neg));
}

}  // namespace detail

// End-to-end training per the task protocol: shuffled positive batches paired
// with per-epoch resampled negatives, full-graph forward per step, Adam, and
// early stopping on the validation metric with best-epoch restoration.
inline std::pair<EncoderParams, TrainReport> train(const EdgeSplit& split, const TrainConfig& cfg) {
    cfg.validate();
    const DirectedGraph& g = split.train_graph;
    if (split.val_pos.empty() || split.val_neg.empty())
        throw ValidationError("train: empty validation set");
    if (split.test_pos.empty() || split.test_neg.empty())
        throw ValidationError("train: empty test set");
    if (g.num_edges() == 0) throw ValidationError("train: training graph has no edges");

    const auto t_start = std::chrono::steady_clock::now();

    EncoderDims dims{g.feature_dim(), cfg.hidden_dim,
                     encoder_output_dim(cfg.decoder.type, cfg.embedding_dim)};
    EncoderParams params = init_params(cfg.encoder_kind, cfg.neighbor_mode, dims, cfg.seed,
                                       cfg.mass_outside_norm);
    AdamOptimizer adam(params, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2, cfg.adam_eps);

    // Layer-1 aggregation of the (fixed) features does not depend on
    // parameters; compute it once.
    const Matrix agg_features = mean_aggregate(g, g.features(), cfg.neighbor_mode);

    const EdgeList train_pos = g.edges();
    TrainReport report;
    EncoderParams best_params = params;
    double best_metric = -1.0;
    unsigned bad_epochs = 0;

    for (unsigned epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        EdgeList pos = train_pos;
        Rng shuffle_rng(derive_seed(cfg.seed, rng_stream::kEpochShuffle, epoch));
        shuffle_rng.shuffle(pos);
        const EdgeList neg = epoch_negatives(g, pos, cfg.seed, epoch);

        double epoch_loss = 0.0;
        std::size_t seen = 0;
        for (std::size_t start = 0; start < pos.size(); start += cfg.batch_size) {
            const std::size_t end = std::min(start + cfg.batch_size, pos.size());
            EdgeList batch(pos.begin() + start, pos.begin() + end);
            batch.insert(batch.end(), neg.begin() + start, neg.begin() + end);
            std::vector<int> labels(batch.size(), 0);
            for (std::size_t i = 0; i < end - start; ++i) labels[i] = 1;

            const ForwardResult fwd = encoder_forward(g, params, &agg_features);
            const std::vector<double> logits = score_edges(cfg.decoder, fwd.embedding, batch);
            const BceResult bce = bce_loss_with_logits(logits, labels);
            if (!std::isfinite(bce.loss) || bce.loss > 1e6)
                throw ValidationError("training diverged at epoch " + std::to_string(epoch));

            const Matrix grad_emb =
                decoder_backward(cfg.decoder, fwd.embedding, batch, bce.grad_logits);
            const EncoderGrads grads = encoder_backward(fwd.tape, grad_emb, false);
            adam.step(params, grads);

            epoch_loss += bce.loss * static_cast<double>(batch.size());
            seen += batch.size();
        }
        report.train_loss.push_back(epoch_loss / static_cast<double>(seen));

        const ForwardResult fwd = encoder_forward(g, params, &agg_features);
        const ScoredEdges val =
            detail::score_eval_set(cfg.decoder, fwd.embedding, split.val_pos, split.val_neg);
        report.val_auc.push_back(auc(val));
        report.val_ap.push_back(ap(val));
        report.stopped_epoch = epoch;

        if (cfg.log_every != 0 && epoch % cfg.log_every == 0)
            std::printf("epoch %u, loss %.6f, val_auc %.4f, val_ap %.4f\n", epoch,
                        report.train_loss.back(), report.val_auc.back(), report.val_ap.back());

        const double metric =
            cfg.stop_metric == StopMetric::kAuc ? report.val_auc.back() : report.val_ap.back();
        if (metric > best_metric) {
            best_metric = metric;
            best_params = params;
            report.best_epoch = epoch;
            bad_epochs = 0;
        } else if (++bad_epochs >= cfg.patience) {
            break;
        }
    }

    report.best_val_metric = best_metric;
    const ForwardResult fwd = encoder_forward(g, best_params, &agg_features);
    const ScoredEdges test =
        detail::score_eval_set(cfg.decoder, fwd.embedding, split.test_pos, split.test_neg);
    report.test_auc = auc(test);
    report.test_ap = ap(test);
    report.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return {std::move(best_params), std::move(report)};
}

}  // namespace gglink
