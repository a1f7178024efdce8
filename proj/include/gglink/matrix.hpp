#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gglink/errors.hpp"

namespace gglink {

// Dense row-major matrix of doubles. Everything in the library computes at
// 64-bit precision so that finite-difference gradient checks are meaningful.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
    std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

    bool empty() const { return data.empty(); }

    bool all_finite() const {
        for (double x : data)
            if (!std::isfinite(x)) return false;
        return true;
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

inline void check_shape(bool ok, const std::string& what) {
    if (!ok) throw ValidationError("shape mismatch: " + what);
}

// C = A * B
inline Matrix matmul(const Matrix& a, const Matrix& b) {
    check_shape(a.cols == b.rows, "matmul " + std::to_string(a.rows) + "x" + std::to_string(a.cols) +
                                      " * " + std::to_string(b.rows) + "x" + std::to_string(b.cols));
    Matrix c(a.rows, b.cols);
    // ikj order keeps the inner loop contiguous in both B and C.
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        double* crow = c.data.data() + i * c.cols;
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = arow[k];
            if (aik == 0.0) continue;
            const double* brow = b.data.data() + k * b.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

// C = A^T * B, with A stored untransposed (A is k x m, result m x n).
inline Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    check_shape(a.rows == b.rows, "matmul_tn");
    Matrix c(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        const double* arow = a.data.data() + k * a.cols;
        const double* brow = b.data.data() + k * b.cols;
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double aki = arow[i];
            if (aki == 0.0) continue;
            double* crow = c.data.data() + i * c.cols;
            for (std::size_t j = 0; j < b.cols; ++j) crow[j] += aki * brow[j];
        }
    }
    return c;
}

// C = A * B^T, with B stored untransposed (B is n x k, result m x n).
inline Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    check_shape(a.cols == b.cols, "matmul_nt");
    Matrix c(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        const double* arow = a.data.data() + i * a.cols;
        for (std::size_t j = 0; j < b.rows; ++j) {
            const double* brow = b.data.data() + j * b.cols;
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) acc += arow[k] * brow[k];
            c(i, j) = acc;
        }
    }
    return c;
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Subgradient at 0 is defined as 0.
inline double relu_grad(double x) { return x > 0.0 ? 1.0 : 0.0; }

// ELU with alpha = 1.
inline double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }

inline double elu_grad(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

// Numerically stable logistic; branch on sign so exp never overflows.
inline double sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

inline double row_norm(std::span<const double> row) {
    double s = 0.0;
    for (double x : row) s += x * x;
    return std::sqrt(s);
}

// Each row divided by max(||row||_2, eps); a zero row stays zero.
inline Matrix l2_normalize_rows(const Matrix& m, double eps = 1e-12) {
    Matrix out(m.rows, m.cols);
    for (std::size_t i = 0; i < m.rows; ++i) {
        const double scale = 1.0 / std::max(row_norm(m.row(i)), eps);
        for (std::size_t j = 0; j < m.cols; ++j) out(i, j) = m(i, j) * scale;
    }
    return out;
}

}  // namespace gglink
