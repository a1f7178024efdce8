#include "gglink/matrix.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace gglink;

namespace {

// Independent triple-loop reference for all matmul variants.
Matrix naive_matmul(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < b.cols; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
            c(i, j) = s;
        }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
    return t;
}

double rel_frobenius(const Matrix& a, const Matrix& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i) {
        num += (a.data[i] - b.data[i]) * (a.data[i] - b.data[i]);
        den += b.data[i] * b.data[i];
    }
    return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

}  // namespace

TEST(Matmul, IdentityIsNeutral) {
    const Matrix a = testutil::random_matrix(4, 4, 7);
    const Matrix c = matmul(Matrix::identity(4), a);
    EXPECT_EQ(c.data, a.data);
}

TEST(Matmul, HandComputed2x2TimesColumn) {
    Matrix a(2, 2);
    a.data = {1, 2, 3, 4};
    Matrix b(2, 1);
    b.data = {5, 6};
    const Matrix c = matmul(a, b);
    EXPECT_DOUBLE_EQ(c(0, 0), 17.0);
    EXPECT_DOUBLE_EQ(c(1, 0), 39.0);
}

TEST(Matmul, MatchesNaiveOracleOnRandomShapes) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t r = 1 + rng.uniform_int(8);
        const std::size_t k = 1 + rng.uniform_int(8);
        const std::size_t c = 1 + rng.uniform_int(8);
        const Matrix a = testutil::random_matrix(r, k, 100 + trial);
        const Matrix b = testutil::random_matrix(k, c, 200 + trial);
        EXPECT_LT(rel_frobenius(matmul(a, b), naive_matmul(a, b)), 1e-12);
        EXPECT_LT(rel_frobenius(matmul_tn(a, matmul(a, b)), naive_matmul(transpose(a), matmul(a, b))),
                  1e-12);
        EXPECT_LT(rel_frobenius(matmul_nt(a, transpose(b)), naive_matmul(a, b)), 1e-12);
    }
}

TEST(Matmul, ShapeMismatchThrows) {
    const Matrix a(2, 3), b(4, 2);
    EXPECT_THROW(matmul(a, b), ValidationError);
}

TEST(Activations, ReluValues) {
    EXPECT_DOUBLE_EQ(relu(-2.0), 0.0);
    EXPECT_DOUBLE_EQ(relu(3.0), 3.0);
    EXPECT_DOUBLE_EQ(relu_grad(0.0), 0.0);
}

TEST(Activations, ReluGradMatchesFiniteDifference) {
    double x = 0.7;
    const double fd = testutil::central_diff([&] { return relu(x); }, x, 1e-6);
    EXPECT_NEAR(relu_grad(0.7), fd, 1e-8);
}

TEST(Activations, EluValues) {
    EXPECT_DOUBLE_EQ(elu(0.0), 0.0);
    EXPECT_NEAR(elu(-1.0), std::exp(-1.0) - 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(elu(2.5), 2.5);
}

TEST(Activations, EluGradMatchesFiniteDifference) {
    double x = -0.5;
    const double fd = testutil::central_diff([&] { return elu(x); }, x, 1e-6);
    EXPECT_NEAR(elu_grad(-0.5), fd, 1e-8);
}

TEST(Activations, GradsMatchFiniteDifferenceOnRandomPoints) {
    Rng rng(11);
    for (int i = 0; i < 100; ++i) {
        double x = (2.0 * rng.uniform01() - 1.0) * 4.0;
        if (std::abs(x) < 1e-3) x += 0.01;  // keep away from the relu kink
        const double fd_relu = testutil::central_diff([&] { return relu(x); }, x, 1e-6);
        const double fd_elu = testutil::central_diff([&] { return elu(x); }, x, 1e-6);
        EXPECT_LT(testutil::rel_err(relu_grad(x), fd_relu, 1e-6), 1e-5);
        EXPECT_LT(testutil::rel_err(elu_grad(x), fd_elu, 1e-6), 1e-5);
    }
}

TEST(Sigmoid, Values) {
    EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
    EXPECT_NEAR(sigmoid(1.0), 0.7310585786300049, 1e-12);
}

TEST(Sigmoid, StableForLargeNegativeInput) {
    const double y = sigmoid(-800.0);
    EXPECT_TRUE(std::isfinite(y));
    EXPECT_GT(y, 0.0);
    EXPECT_LE(y, 1e-300);
    EXPECT_DOUBLE_EQ(sigmoid(800.0), 1.0);
}

TEST(L2NormalizeRows, ThreeFourFive) {
    Matrix m(1, 2);
    m.data = {3.0, 4.0};
    const Matrix out = l2_normalize_rows(m);
    EXPECT_DOUBLE_EQ(out(0, 0), 0.6);
    EXPECT_DOUBLE_EQ(out(0, 1), 0.8);
}

TEST(L2NormalizeRows, ZeroRowStaysZero) {
    const Matrix out = l2_normalize_rows(Matrix(2, 3), 1e-12);
    for (double x : out.data) EXPECT_DOUBLE_EQ(x, 0.0);
    EXPECT_TRUE(out.all_finite());
}

TEST(L2NormalizeRows, OutputRowsHaveUnitNorm) {
    const Matrix m = testutil::random_matrix(10, 4, 21);
    const Matrix out = l2_normalize_rows(m);
    for (std::size_t i = 0; i < out.rows; ++i) {
        const double norm = row_norm(out.row(i));
        EXPECT_TRUE(std::abs(norm - 1.0) < 1e-12 || norm == 0.0);
    }
}
