#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gglink/errors.hpp"
#include "gglink/graph.hpp"
#include "gglink/matrix.hpp"
#include "gglink/rng.hpp"

namespace gglink {

enum class EncoderKind { kSage, kGcn };

inline const char* to_string(EncoderKind k) { return k == EncoderKind::kSage ? "sage" : "gcn"; }

inline EncoderKind encoder_kind_from_string(const std::string& s) {
    if (s == "sage") return EncoderKind::kSage;
    if (s == "gcn") return EncoderKind::kGcn;
    throw ValidationError("unknown encoder kind: " + s);
}

struct EncoderDims {
    std::size_t input = 0;   // d0
    std::size_t hidden = 0;  // d1
    std::size_t output = 0;  // d2 (positions + mass channel for the gravity decoder)
};

// Two-layer encoder weights. SAGE layers act on [aggregated || self] rows,
// so w1 is (2*d0 x d1) and w2 is (2*d1 x d2); the GCN baseline has no
// concatenation and uses (d0 x d1), (d1 x d2).
struct EncoderParams {
    EncoderKind kind = EncoderKind::kSage;
    NeighborMode neighbor_mode = NeighborMode::kBoth;
    // Default follows the layer formulas literally: the final L2 normalization
    // covers the whole output row, mass channel included. The variant keeps
    // the mass coordinate out of the norm.
    bool mass_outside_norm = false;
    Matrix w1, w2;
    std::vector<double> b1, b2;

    EncoderDims dims() const {
        EncoderDims d;
        d.hidden = w1.cols;
        d.output = w2.cols;
        d.input = kind == EncoderKind::kSage ? w1.rows / 2 : w1.rows;
        return d;
    }

    void validate(std::size_t feature_dim) const {
        const std::size_t in_mult = kind == EncoderKind::kSage ? 2 : 1;
        if (w1.rows != in_mult * feature_dim)
            throw ValidationError("w1 expects input dim " + std::to_string(w1.rows / in_mult) +
                                  ", graph features have dim " + std::to_string(feature_dim));
        if (w2.rows != in_mult * w1.cols) throw ValidationError("w2 rows inconsistent with hidden dim");
        if (b1.size() != w1.cols || b2.size() != w2.cols)
            throw ValidationError("bias length inconsistent with weight shape");
    }
};

// Final embedding split into per-node positions and the scalar log-mass
// channel (last output column). Masses may be negative: repulsion.
struct GravityEmbedding {
    Matrix positions;            // n x (d2-1)
    std::vector<double> masses;  // n
};

inline GravityEmbedding gravity_view(const Matrix& embedding) {
    if (embedding.cols < 2)
        throw ValidationError("gravity embedding needs at least one position column plus mass");
    GravityEmbedding g;
    g.positions = Matrix(embedding.rows, embedding.cols - 1);
    g.masses.resize(embedding.rows);
    for (std::size_t i = 0; i < embedding.rows; ++i) {
        for (std::size_t j = 0; j + 1 < embedding.cols; ++j) g.positions(i, j) = embedding(i, j);
        g.masses[i] = embedding(i, embedding.cols - 1);
    }
    return g;
}

// Row v of the result is the mean of h_v together with its mode-neighbors'
// rows: (h_v + sum_u h_u) / (1 + |N(v)|). An isolated node keeps its own row.
inline Matrix mean_aggregate(const DirectedGraph& g, const Matrix& h, NeighborMode mode) {
    check_shape(h.rows == g.num_nodes(), "mean_aggregate input rows");
    Matrix out(h.rows, h.cols);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        double* orow = out.data.data() + v * out.cols;
        const double* self = h.data.data() + v * h.cols;
        for (std::size_t j = 0; j < h.cols; ++j) orow[j] = self[j];
        const auto nbrs = g.neighbors(v, mode);
        for (NodeId u : nbrs) {
            const double* urow = h.data.data() + u * h.cols;
            for (std::size_t j = 0; j < h.cols; ++j) orow[j] += urow[j];
        }
        const double scale = 1.0 / static_cast<double>(1 + nbrs.size());
        for (std::size_t j = 0; j < h.cols; ++j) orow[j] *= scale;
    }
    return out;
}

// Adjoint of mean_aggregate: with AGG = S(I+B) (S the row scaling, B the
// mode adjacency), this applies (I+B^T)S by scattering scaled rows.
inline Matrix mean_aggregate_backward(const DirectedGraph& g, const Matrix& grad, NeighborMode mode) {
    check_shape(grad.rows == g.num_nodes(), "mean_aggregate_backward grad rows");
    Matrix out(grad.rows, grad.cols);
    std::vector<double> scaled(grad.cols);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
        const auto nbrs = g.neighbors(v, mode);
        const double scale = 1.0 / static_cast<double>(1 + nbrs.size());
        const double* grow = grad.data.data() + v * grad.cols;
        for (std::size_t j = 0; j < grad.cols; ++j) scaled[j] = grow[j] * scale;
        double* vrow = out.data.data() + v * out.cols;
        for (std::size_t j = 0; j < grad.cols; ++j) vrow[j] += scaled[j];
        for (NodeId u : nbrs) {
            double* urow = out.data.data() + u * out.cols;
            for (std::size_t j = 0; j < grad.cols; ++j) urow[j] += scaled[j];
        }
    }
    return out;
}

namespace detail {

// out += a * w[row_offset .. row_offset + a.cols)
inline void add_mul_rows(Matrix& out, const Matrix& a, const Matrix& w, std::size_t row_offset) {
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        double* orow = out.data.data() + i * out.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* wrow = w.data.data() + (row_offset + k) * w.cols;
            for (std::size_t j = 0; j < out.cols; ++j) orow[j] += aik * wrow[j];
        }
    }
}

// out(i,k) = sum_j grad(i,j) * w(row_offset+k, j)   i.e. grad * w_slice^T
inline Matrix mul_nt_rows(const Matrix& grad, const Matrix& w, std::size_t row_offset,
                          std::size_t num_rows) {
    Matrix out(grad.rows, num_rows);
    for (std::size_t i = 0; i < grad.rows; ++i) {
        const double* grow = grad.data.data() + i * grad.cols;
        double* orow = out.data.data() + i * out.cols;
        for (std::size_t k = 0; k < num_rows; ++k) {
            const double* wrow = w.data.data() + (row_offset + k) * w.cols;
            double acc = 0.0;
            for (std::size_t j = 0; j < grad.cols; ++j) acc += grow[j] * wrow[j];
            orow[k] = acc;
        }
    }
    return out;
}

// w_grad[row_offset .. row_offset + a.cols) += a^T * grad
inline void add_tn_into_rows(Matrix& w_grad, const Matrix& a, const Matrix& grad,
                             std::size_t row_offset) {
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        const double* grow = grad.data.data() + i * grad.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            double* wrow = w_grad.data.data() + (row_offset + k) * w_grad.cols;
            for (std::size_t j = 0; j < grad.cols; ++j) wrow[j] += aik * grow[j];
        }
    }
}

inline void add_bias_rows(Matrix& m, const std::vector<double>& bias) {
    for (std::size_t i = 0; i < m.rows; ++i) {
        double* row = m.data.data() + i * m.cols;
        for (std::size_t j = 0; j < m.cols; ++j) row[j] += bias[j];
    }
}

// Gradient of y = x / max(||x||_2, eps) over the first `group` coordinates of
// each row; remaining coordinates (the mass channel in the variant) pass
// through untouched.
inline Matrix norm_rows_backward(const Matrix& pre_norm, const Matrix& grad, std::size_t group,
                                 double eps) {
    Matrix out(grad.rows, grad.cols);
    for (std::size_t i = 0; i < grad.rows; ++i) {
        const double* x = pre_norm.data.data() + i * pre_norm.cols;
        const double* gr = grad.data.data() + i * grad.cols;
        double* o = out.data.data() + i * out.cols;
        double sq = 0.0;
        for (std::size_t j = 0; j < group; ++j) sq += x[j] * x[j];
        const double norm = std::sqrt(sq);
        if (norm > eps) {
            double dot = 0.0;
            for (std::size_t j = 0; j < group; ++j) dot += x[j] * gr[j];
            const double inv = 1.0 / norm;
            const double c = dot * inv * inv * inv;
            for (std::size_t j = 0; j < group; ++j) o[j] = gr[j] * inv - x[j] * c;
        } else {
            const double inv = 1.0 / eps;
            for (std::size_t j = 0; j < group; ++j) o[j] = gr[j] * inv;
        }
        for (std::size_t j = group; j < grad.cols; ++j) o[j] = gr[j];
    }
    return out;
}

// Forward counterpart of norm_rows_backward.
inline Matrix norm_rows_forward(const Matrix& m, std::size_t group, double eps) {
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double* x = m.data.data() + i * m.cols;
        double* o = out.data.data() + i * out.cols;
        double sq = 0.0;
        for (std::size_t j = 0; j < group; ++j) sq += x[j] * x[j];
        const double scale = 1.0 / std::max(std::sqrt(sq), eps);
        for (std::size_t j = 0; j < group; ++j) o[j] = x[j] * scale;
        for (std::size_t j = group; j < m.cols; ++j) o[j] = x[j];
    }
    return out;
}

inline void check_finite(const Matrix& m, int layer) {
    if (!m.all_finite())
        throw ValidationError("non-finite value in encoder layer " + std::to_string(layer));
}

}  // namespace detail

constexpr double kNormEps = 1e-12;

// Bookkeeping for the backward pass. Holds non-owning pointers to the graph
// and the parameters used by the forward pass; keep both alive until the
// gradients have been taken.
struct ForwardTape {
    const DirectedGraph* graph = nullptr;
    const EncoderParams* params = nullptr;
    Matrix agg1;  // aggregated layer-1 input
    Matrix z1;    // layer-1 pre-activation
    Matrix r1;    // SAGE: relu(z1) before normalization
    Matrix h1;    // layer-1 output fed into layer 2
    Matrix agg2;  // aggregated layer-2 input
    Matrix z2;    // layer-2 pre-activation
    Matrix e2;    // SAGE: elu(z2) before normalization
};

struct ForwardResult {
    Matrix embedding;  // n x d2
    ForwardTape tape;

    GravityEmbedding gravity() const { return gravity_view(embedding); }
};

// GG-SAGE forward: two mean-aggregator layers on [AGG || self], ReLU then
// ELU, each followed by row-wise L2 normalization. Output columns 0..d2-2
// are positions, column d2-1 is the mass channel.
inline ForwardResult sage_forward(const DirectedGraph& g, const EncoderParams& params,
                                  const Matrix* cached_agg_features = nullptr) {
    if (params.kind != EncoderKind::kSage) throw ValidationError("sage_forward requires kind=sage");
    params.validate(g.feature_dim());
    const auto dims = params.dims();
    const Matrix& h0 = g.features();

    ForwardResult r;
    ForwardTape& t = r.tape;
    t.graph = &g;
    t.params = &params;

    t.agg1 = cached_agg_features ? *cached_agg_features
                                 : mean_aggregate(g, h0, params.neighbor_mode);
    t.z1 = Matrix(g.num_nodes(), dims.hidden);
    detail::add_mul_rows(t.z1, t.agg1, params.w1, 0);
    detail::add_mul_rows(t.z1, h0, params.w1, dims.input);
    detail::add_bias_rows(t.z1, params.b1);
    detail::check_finite(t.z1, 1);

    t.r1 = t.z1;
    for (double& x : t.r1.data) x = relu(x);
    t.h1 = detail::norm_rows_forward(t.r1, t.r1.cols, kNormEps);

    t.agg2 = mean_aggregate(g, t.h1, params.neighbor_mode);
    t.z2 = Matrix(g.num_nodes(), dims.output);
    detail::add_mul_rows(t.z2, t.agg2, params.w2, 0);
    detail::add_mul_rows(t.z2, t.h1, params.w2, dims.hidden);
    detail::add_bias_rows(t.z2, params.b2);
    detail::check_finite(t.z2, 2);

    t.e2 = t.z2;
    for (double& x : t.e2.data) x = elu(x);
    const std::size_t group = params.mass_outside_norm ? dims.output - 1 : dims.output;
    r.embedding = detail::norm_rows_forward(t.e2, group, kNormEps);
    return r;
}

// GCN baseline: mean-normalized propagation without concatenation, ReLU after
// layer 1 and a linear layer 2 (no ELU, no L2 normalization).
inline ForwardResult gcn_forward(const DirectedGraph& g, const EncoderParams& params,
                                 const Matrix* cached_agg_features = nullptr) {
    if (params.kind != EncoderKind::kGcn) throw ValidationError("gcn_forward requires kind=gcn");
    params.validate(g.feature_dim());
    const Matrix& h0 = g.features();

    ForwardResult r;
    ForwardTape& t = r.tape;
    t.graph = &g;
    t.params = &params;

    t.agg1 = cached_agg_features ? *cached_agg_features
                                 : mean_aggregate(g, h0, params.neighbor_mode);
    t.z1 = matmul(t.agg1, params.w1);
    detail::add_bias_rows(t.z1, params.b1);
    detail::check_finite(t.z1, 1);

    t.h1 = t.z1;
    for (double& x : t.h1.data) x = relu(x);

    t.agg2 = mean_aggregate(g, t.h1, params.neighbor_mode);
    t.z2 = matmul(t.agg2, params.w2);
    detail::add_bias_rows(t.z2, params.b2);
    detail::check_finite(t.z2, 2);

    r.embedding = t.z2;
    return r;
}

inline ForwardResult encoder_forward(const DirectedGraph& g, const EncoderParams& params,
                                     const Matrix* cached_agg_features = nullptr) {
    return params.kind == EncoderKind::kSage ? sage_forward(g, params, cached_agg_features)
                                             : gcn_forward(g, params, cached_agg_features);
}

struct EncoderGrads {
    Matrix w1, w2;
    std::vector<double> b1, b2;
    Matrix features;  // empty unless requested
};

namespace detail {

inline std::vector<double> column_sums(const Matrix& m) {
    std::vector<double> s(m.cols, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) s[j] += m(i, j);
    return s;
}

}  // namespace detail

// Exact reverse-mode gradients of any scalar loss with upstream gradient
// grad_out (n x d2) w.r.t. all parameters and, optionally, the input features.
inline EncoderGrads encoder_backward(const ForwardTape& t, const Matrix& grad_out,
                                     bool want_feature_grads = true) {
    const DirectedGraph& g = *t.graph;
    const EncoderParams& p = *t.params;
    const auto dims = p.dims();
    check_shape(grad_out.rows == g.num_nodes() && grad_out.cols == dims.output,
                "encoder_backward grad_out");

    EncoderGrads grads;
    grads.w1 = Matrix(p.w1.rows, p.w1.cols);
    grads.w2 = Matrix(p.w2.rows, p.w2.cols);

    if (p.kind == EncoderKind::kSage) {
        const std::size_t group = p.mass_outside_norm ? dims.output - 1 : dims.output;
        Matrix g_e2 = detail::norm_rows_backward(t.e2, grad_out, group, kNormEps);
        for (std::size_t i = 0; i < g_e2.data.size(); ++i) g_e2.data[i] *= elu_grad(t.z2.data[i]);

        grads.b2 = detail::column_sums(g_e2);
        detail::add_tn_into_rows(grads.w2, t.agg2, g_e2, 0);
        detail::add_tn_into_rows(grads.w2, t.h1, g_e2, dims.hidden);

        const Matrix g_agg2 = detail::mul_nt_rows(g_e2, p.w2, 0, dims.hidden);
        Matrix g_h1 = detail::mul_nt_rows(g_e2, p.w2, dims.hidden, dims.hidden);
        {
            const Matrix back = mean_aggregate_backward(g, g_agg2, p.neighbor_mode);
            for (std::size_t i = 0; i < g_h1.data.size(); ++i) g_h1.data[i] += back.data[i];
        }

        Matrix g_z1 = detail::norm_rows_backward(t.r1, g_h1, t.r1.cols, kNormEps);
        for (std::size_t i = 0; i < g_z1.data.size(); ++i) g_z1.data[i] *= relu_grad(t.z1.data[i]);

        grads.b1 = detail::column_sums(g_z1);
        detail::add_tn_into_rows(grads.w1, t.agg1, g_z1, 0);
        detail::add_tn_into_rows(grads.w1, g.features(), g_z1, dims.input);

        if (want_feature_grads) {
            const Matrix g_agg1 = detail::mul_nt_rows(g_z1, p.w1, 0, dims.input);
            grads.features = detail::mul_nt_rows(g_z1, p.w1, dims.input, dims.input);
            const Matrix back = mean_aggregate_backward(g, g_agg1, p.neighbor_mode);
            for (std::size_t i = 0; i < grads.features.data.size(); ++i)
                grads.features.data[i] += back.data[i];
        }
    } else {
        Matrix g_z2 = grad_out;  // linear output layer
        grads.b2 = detail::column_sums(g_z2);
        detail::add_tn_into_rows(grads.w2, t.agg2, g_z2, 0);

        const Matrix g_agg2 = detail::mul_nt_rows(g_z2, p.w2, 0, dims.hidden);
        Matrix g_z1 = mean_aggregate_backward(g, g_agg2, p.neighbor_mode);
        for (std::size_t i = 0; i < g_z1.data.size(); ++i) g_z1.data[i] *= relu_grad(t.z1.data[i]);

        grads.b1 = detail::column_sums(g_z1);
        detail::add_tn_into_rows(grads.w1, t.agg1, g_z1, 0);

        if (want_feature_grads) {
            const Matrix g_agg1 = detail::mul_nt_rows(g_z1, p.w1, 0, dims.input);
            grads.features = mean_aggregate_backward(g, g_agg1, p.neighbor_mode);
        }
    }
    return grads;
}

// Glorot-uniform weights (bound sqrt(6/(fan_in+fan_out))), zero biases.
inline EncoderParams init_params(EncoderKind kind, NeighborMode mode, EncoderDims dims,
                                 std::uint64_t seed, bool mass_outside_norm = false) {
    if (dims.input == 0 || dims.hidden == 0 || dims.output == 0)
        throw ValidationError("encoder dims must be positive");
    EncoderParams p;
    p.kind = kind;
    p.neighbor_mode = mode;
    p.mass_outside_norm = mass_outside_norm;
    const std::size_t in_mult = kind == EncoderKind::kSage ? 2 : 1;
    p.w1 = Matrix(in_mult * dims.input, dims.hidden);
    p.w2 = Matrix(in_mult * dims.hidden, dims.output);
    p.b1.assign(dims.hidden, 0.0);
    p.b2.assign(dims.output, 0.0);

    Rng rng(derive_seed(seed, rng_stream::kParamInit));
    const auto fill_glorot = [&rng](Matrix& w) {
        const double bound = std::sqrt(6.0 / static_cast<double>(w.rows + w.cols));
        for (double& x : w.data) x = (2.0 * rng.uniform01() - 1.0) * bound;
    };
    fill_glorot(p.w1);
    fill_glorot(p.w2);
    return p;
}

}  // namespace gglink
