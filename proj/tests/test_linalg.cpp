#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dircurv/linalg.hpp"
#include "support.hpp"

namespace {

using namespace dircurv;
using dircurv::test::rng;

Mat random_matrix(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> N(0.0, 1.0);
    Mat A(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) A(r, c) = N(gen);
    return A;
}

Mat random_symmetric(std::mt19937_64& gen, std::size_t n) {
    Mat A = random_matrix(gen, n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < r; ++c) A(r, c) = A(c, r);
    return A;
}

}  // namespace

TEST(Determinant, Examples) {
    EXPECT_EQ(determinant(Mat::identity(3)), 1.0);
    EXPECT_EQ(determinant(Mat{{0, 1}, {1, 0}}), -1.0);
    EXPECT_EQ(determinant(Mat{{2, 0, 0}, {0, 3, 0}, {0, 0, 4}}), 24.0);
    EXPECT_EQ(determinant(Mat{{1, 2}, {2, 4}}), 0.0);
}

TEST(Determinant, MatchesCofactorExpansion) {
    auto gen = rng(21);
    for (std::size_t n = 1; n <= 5; ++n)
        for (int trial = 0; trial < 200; ++trial) {
            const Mat A = random_matrix(gen, n);
            const double scale = std::pow(A.max_abs(), static_cast<double>(n));
            EXPECT_LE(std::abs(determinant(A) - dircurv::test::cofactor_determinant(A)), 1e-10 * scale);
        }
}

TEST(Determinant, OrthonormalSetIsUnimodular) {
    auto gen = rng(22);
    for (std::size_t n = 2; n <= 8; ++n)
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<Vec> vs;
            for (std::size_t k = 0; k < n; ++k) vs.push_back(dircurv::test::random_normal(gen, n));
            const auto q = orthonormalize(vs);
            Mat Q(n);
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = 0; c < n; ++c) Q(r, c) = q[r][c];
            EXPECT_NEAR(std::abs(determinant(Q)), 1.0, 1e-10);
        }
}

TEST(ExteriorMagnitude, Examples) {
    EXPECT_EQ(exterior_magnitude(Vec{1, 0, 0}, Vec{0, 1, 0}), 1.0);
    EXPECT_EQ(exterior_magnitude(Vec{1, 2, 3}, Vec{1, 2, 3}), 0.0);
    // minors 2, 1, 0, 0, 2, 1 give 10; the pair is orthogonal, so |u|^2 |v|^2 = 2 * 5 agrees
    EXPECT_EQ(exterior_magnitude(Vec{1, 0, 1, 0}, Vec{0, 2, 0, 1}), std::sqrt(10.0));
}

TEST(ExteriorMagnitude, DimensionErrors) {
    EXPECT_THROW(exterior_magnitude(Vec{1, 0}, Vec{0, 1, 0}), Error);
    EXPECT_THROW(exterior_magnitude(Vec{1}, Vec{2}), Error);
}

TEST(ExteriorMagnitude, LagrangeIdentity) {
    auto gen = rng(23);
    for (std::size_t n = 2; n <= 8; ++n)
        for (int trial = 0; trial < 1000; ++trial) {
            const Vec u = dircurv::test::random_normal(gen, n);
            const Vec v = dircurv::test::random_normal(gen, n);
            const double w = exterior_magnitude(u, v);
            const double nu = dot(u, u), nv = dot(v, v), uv = dot(u, v);
            // cancellation in the right-hand side is bounded by |u|^2 |v|^2
            EXPECT_LE(std::abs(w * w - (nu * nv - uv * uv)), 1e-10 * nu * nv);
        }
}

TEST(Orthonormalize, Examples) {
    auto q = orthonormalize({Vec{1, 0}, Vec{1, 1}});
    EXPECT_EQ(q[0], (Vec{1, 0}));
    EXPECT_EQ(q[1], (Vec{0, 1}));
    q = orthonormalize({Vec{2, 0, 0}});
    EXPECT_EQ(q[0], (Vec{1, 0, 0}));
}

TEST(Orthonormalize, RankDeficientNamesIndex) {
    try {
        orthonormalize({Vec{1, 1}, Vec{1, 1}});
        FAIL() << "expected RankDeficient";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::RankDeficient);
        EXPECT_EQ(e.location(), "2");
    }
}

TEST(Orthonormalize, OutputIsOrthonormal) {
    auto gen = rng(24);
    for (std::size_t n = 2; n <= 10; ++n)
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Vec> vs;
            for (std::size_t k = 0; k + 1 < n; ++k) vs.push_back(dircurv::test::random_normal(gen, n));
            const auto q = orthonormalize(vs);
            for (std::size_t a = 0; a < q.size(); ++a) {
                EXPECT_NEAR(norm(q[a]), 1.0, 1e-12);
                for (std::size_t b = a + 1; b < q.size(); ++b) EXPECT_LE(std::abs(dot(q[a], q[b])), 1e-10);
            }
        }
}

TEST(SymEigen, Examples) {
    auto e = sym_eigen(Mat{{2, 0}, {0, 8}});
    EXPECT_EQ(e.values, (Vec{2, 8}));
    e = sym_eigen(Mat{{8, 0}, {0, 2}});
    EXPECT_EQ(e.values, (Vec{2, 8}));
    EXPECT_EQ(e.vectors[0], (Vec{0, 1}));
    e = sym_eigen(Mat{{0, 1}, {1, 0}});
    EXPECT_NEAR(e.values[0], -1.0, 1e-15);
    EXPECT_NEAR(e.values[1], 1.0, 1e-15);
}

TEST(SymEigen, RejectsAsymmetric) {
    EXPECT_THROW(sym_eigen(Mat{{1, 2}, {0, 1}}), Error);
}

TEST(SymEigen, TraceDeterminantAndResidual) {
    auto gen = rng(25);
    for (std::size_t n = 1; n <= 15; ++n)
        for (int trial = 0; trial < 20; ++trial) {
            const Mat A = random_symmetric(gen, n);
            const auto e = sym_eigen(A);
            const double scale = A.max_abs();
            double trace = 0.0, sum = 0.0, prod = 1.0;
            for (std::size_t k = 0; k < n; ++k) {
                trace += A(k, k);
                sum += e.values[k];
                prod *= e.values[k];
                if (k > 0) {
                    EXPECT_LE(e.values[k - 1], e.values[k]);
                }
                const Vec Av = A * e.vectors[k];
                const Vec r = axpy(-e.values[k], e.vectors[k], Av);
                EXPECT_LE(max_abs(r), 1e-9 * scale);
                EXPECT_NEAR(norm(e.vectors[k]), 1.0, 1e-12);
            }
            // relative to the scale of the quantities being summed
            EXPECT_LE(std::abs(sum - trace), 1e-9 * n * scale);
            if (n <= 6) {
                const double det = determinant(A);
                double mag = 1.0;
                for (double v : e.values) mag *= std::abs(v);
                EXPECT_LE(std::abs(prod - det), 1e-9 * std::max(mag, std::abs(det)) + 1e-12 * std::pow(scale, n));
            }
        }
}
