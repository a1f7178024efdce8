#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gglink/encoder.hpp"
#include "gglink/errors.hpp"
#include "gglink/graph.hpp"
#include "gglink/matrix.hpp"

namespace gglink {

enum class DecoderType { kGravity, kSourceTarget, kSymmetric };

// Scoring paradigm plus the distance-squared floor used by the gravity score.
struct DecoderKind {
    DecoderType type = DecoderType::kGravity;
    double eps_dist = 1e-10;

    void validate() const {
        if (!(eps_dist > 0.0)) throw ValidationError("eps_dist must be positive");
    }
};

inline const char* to_string(DecoderType t) {
    switch (t) {
        case DecoderType::kGravity: return "gravity";
        case DecoderType::kSourceTarget: return "st";
        default: return "sym";
    }
}

inline DecoderType decoder_type_from_string(const std::string& s) {
    if (s == "gravity") return DecoderType::kGravity;
    if (s == "st" || s == "source_target") return DecoderType::kSourceTarget;
    if (s == "sym" || s == "symmetric") return DecoderType::kSymmetric;
    throw ValidationError("unknown decoder: " + s);
}

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double d = a[j] - b[j];
        s += d * d;
    }
    return s;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * b[j];
    return s;
}

}  // namespace detail

// Gravity logit for the directed edge u -> v: the target's log-mass minus the
// log squared distance. score(u,v) - score(v,u) = m_v - m_u exactly.
inline double score_gravity(const GravityEmbedding& emb, NodeId u, NodeId v, double eps_dist) {
    if (u >= emb.positions.rows || v >= emb.positions.rows)
        throw ValidationError("node id out of range in score_gravity");
    const double d2 = detail::squared_distance(emb.positions.row(u), emb.positions.row(v));
    return emb.masses[v] - std::log(std::max(d2, eps_dist));
}

inline double score_source_target(const Matrix& emb_s, const Matrix& emb_t, NodeId u, NodeId v) {
    check_shape(emb_s.rows == emb_t.rows && emb_s.cols == emb_t.cols, "source/target embeddings");
    if (u >= emb_s.rows || v >= emb_s.rows)
        throw ValidationError("node id out of range in score_source_target");
    return detail::dot(emb_s.row(u), emb_t.row(v));
}

// Plain inner product; direction-blind by construction.
inline double score_symmetric(const Matrix& emb, NodeId u, NodeId v) {
    if (u >= emb.rows || v >= emb.rows)
        throw ValidationError("node id out of range in score_symmetric");
    return detail::dot(emb.row(u), emb.row(v));
}

// Batch logits over an encoder output matrix. Column interpretation depends
// on the decoder: gravity reads positions + mass channel, source/target
// splits the row in half ([0,k) source, [k,2k) target), symmetric uses the
// whole row.
inline std::vector<double> score_edges(const DecoderKind& kind, const Matrix& emb,
                                       const EdgeList& edges) {
    kind.validate();
    std::vector<double> logits;
    logits.reserve(edges.size());
    const std::size_t d = emb.cols;
    switch (kind.type) {
        case DecoderType::kGravity: {
            if (d < 2) throw ValidationError("gravity decoder needs embedding width >= 2");
            for (const Edge& e : edges) {
                if (e.src >= emb.rows || e.dst >= emb.rows)
                    throw ValidationError("edge id out of range in score_edges");
                const auto pu = emb.row(e.src).subspan(0, d - 1);
                const auto pv = emb.row(e.dst).subspan(0, d - 1);
                const double d2 = detail::squared_distance(pu, pv);
                logits.push_back(emb(e.dst, d - 1) - std::log(std::max(d2, kind.eps_dist)));
            }
            break;
        }
        case DecoderType::kSourceTarget: {
            if (d % 2 != 0)
                throw ValidationError("source/target decoder needs an even embedding width");
            const std::size_t k = d / 2;
            for (const Edge& e : edges) {
                if (e.src >= emb.rows || e.dst >= emb.rows)
                    throw ValidationError("edge id out of range in score_edges");
                logits.push_back(detail::dot(emb.row(e.src).subspan(0, k),
                                             emb.row(e.dst).subspan(k, k)));
            }
            break;
        }
        case DecoderType::kSymmetric: {
            for (const Edge& e : edges) {
                if (e.src >= emb.rows || e.dst >= emb.rows)
                    throw ValidationError("edge id out of range in score_edges");
                logits.push_back(detail::dot(emb.row(e.src), emb.row(e.dst)));
            }
            break;
        }
    }
    return logits;
}

// Exact gradients of the batch logits w.r.t. the embedding matrix. For the
// gravity score the mass gradient is 1 for the target node; the position
// gradient is -2(p_u - p_v)/||p_u - p_v||^2 for the source (opposite sign for
// the target) and exactly 0 while the distance clamp is active.
inline Matrix decoder_backward(const DecoderKind& kind, const Matrix& emb, const EdgeList& edges,
                               std::span<const double> grad_logits) {
    kind.validate();
    check_shape(grad_logits.size() == edges.size(), "decoder_backward grad length");
    Matrix grad(emb.rows, emb.cols);
    const std::size_t d = emb.cols;
    switch (kind.type) {
        case DecoderType::kGravity: {
            if (d < 2) throw ValidationError("gravity decoder needs embedding width >= 2");
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const Edge& e = edges[i];
                const double gl = grad_logits[i];
                grad(e.dst, d - 1) += gl;
                const double* pu = emb.data.data() + e.src * d;
                const double* pv = emb.data.data() + e.dst * d;
                const double d2 = detail::squared_distance({pu, d - 1}, {pv, d - 1});
                if (d2 < kind.eps_dist) continue;  // clamp active
                const double coef = -2.0 * gl / d2;
                double* gu = grad.data.data() + e.src * d;
                double* gv = grad.data.data() + e.dst * d;
                for (std::size_t j = 0; j + 1 < d; ++j) {
                    const double delta = pu[j] - pv[j];
                    gu[j] += coef * delta;
                    gv[j] -= coef * delta;
                }
            }
            break;
        }
        case DecoderType::kSourceTarget: {
            if (d % 2 != 0)
                throw ValidationError("source/target decoder needs an even embedding width");
            const std::size_t k = d / 2;
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const Edge& e = edges[i];
                const double gl = grad_logits[i];
                const double* su = emb.data.data() + e.src * d;
                const double* tv = emb.data.data() + e.dst * d + k;
                double* gu = grad.data.data() + e.src * d;
                double* gv = grad.data.data() + e.dst * d + k;
                for (std::size_t j = 0; j < k; ++j) {
                    gu[j] += gl * tv[j];
                    gv[j] += gl * su[j];
                }
            }
            break;
        }
        case DecoderType::kSymmetric: {
            for (std::size_t i = 0; i < edges.size(); ++i) {
                const Edge& e = edges[i];
                const double gl = grad_logits[i];
                const double* hu = emb.data.data() + e.src * d;
                const double* hv = emb.data.data() + e.dst * d;
                double* gu = grad.data.data() + e.src * d;
                double* gv = grad.data.data() + e.dst * d;
                for (std::size_t j = 0; j < d; ++j) {
                    gu[j] += gl * hv[j];
                    gv[j] += gl * hu[j];
                }
            }
            break;
        }
    }
    return grad;
}

// Output width the encoder must produce for a given decoder and embedding
// dimension: gravity appends the mass channel, source/target doubles.
inline std::size_t encoder_output_dim(DecoderType type, std::size_t embedding_dim) {
    switch (type) {
        case DecoderType::kGravity: return embedding_dim + 1;
        case DecoderType::kSourceTarget: return 2 * embedding_dim;
        default: return embedding_dim;
    }
}

}  // namespace gglink
