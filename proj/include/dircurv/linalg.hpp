#pragma once

// Small dense kernels (n <= 16): determinants, modified Gram-Schmidt,
// cyclic Jacobi eigensolver and the wedge-product magnitude.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dircurv/error.hpp"

namespace dircurv {

using Vec = std::vector<double>;

// Square matrix, row-major.
class Mat {
public:
    Mat() = default;
    explicit Mat(std::size_t n) : n_(n), data_(n * n, 0.0) {}
    Mat(std::initializer_list<std::initializer_list<double>> rows) : n_(rows.size()), data_(n_ * n_, 0.0) {
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != n_) throw Error(ErrorCode::DimensionMismatch, "matrix rows must be square");
            std::copy(row.begin(), row.end(), data_.begin() + static_cast<std::ptrdiff_t>(r * n_));
            ++r;
        }
    }

    static Mat identity(std::size_t n) {
        Mat m(n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat diagonal(std::span<const double> d) {
        Mat m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t size() const { return n_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

    double max_abs() const {
        double m = 0.0;
        for (double v : data_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

inline void require_same_size(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw Error(ErrorCode::DimensionMismatch,
                    "vector sizes differ: " + std::to_string(a.size()) + " vs " + std::to_string(b.size()));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    require_same_size(a, b);
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline double max_abs(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

inline Vec scaled(std::span<const double> a, double s) {
    Vec out(a.begin(), a.end());
    for (double& v : out) v *= s;
    return out;
}

inline Vec axpy(double alpha, std::span<const double> x, std::span<const double> y) {
    require_same_size(x, y);
    Vec out(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
    return out;
}

inline Vec operator*(const Mat& A, std::span<const double> x) {
    if (A.size() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
    Vec out(A.size(), 0.0);
    for (std::size_t r = 0; r < A.size(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < A.size(); ++c) s += A(r, c) * x[c];
        out[r] = s;
    }
    return out;
}

// <A x, y>
inline double bilinear(const Mat& A, std::span<const double> x, std::span<const double> y) {
    return dot(A * x, y);
}

// LU with partial pivoting. Returns exactly 0 once a pivot column is zero.
inline double determinant(Mat A) {
    const std::size_t n = A.size();
    double det = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        for (std::size_t r = k + 1; r < n; ++r)
            if (std::abs(A(r, k)) > std::abs(A(piv, k))) piv = r;
        if (A(piv, k) == 0.0) return 0.0;
        if (piv != k) {
            for (std::size_t c = 0; c < n; ++c) std::swap(A(k, c), A(piv, c));
            det = -det;
        }
        det *= A(k, k);
        for (std::size_t r = k + 1; r < n; ++r) {
            const double m = A(r, k) / A(k, k);
            if (m == 0.0) continue;
            for (std::size_t c = k + 1; c < n; ++c) A(r, c) -= m * A(k, c);
        }
    }
    return det;
}

// ||u ^ v||: square root of the sum over i<j of the squared 2x2 minors.
inline double exterior_magnitude(std::span<const double> u, std::span<const double> v) {
    require_same_size(u, v);
    if (u.size() < 2) throw Error(ErrorCode::DimensionMismatch, "wedge product needs dimension >= 2");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = i + 1; j < u.size(); ++j) {
            const double m = u[i] * v[j] - u[j] * v[i];
            s += m * m;
        }
    return std::sqrt(s);
}

// Modified Gram-Schmidt. An input whose residual falls below 1e-10 of the
// largest input norm is reported as RankDeficient with its 1-based index.
inline std::vector<Vec> orthonormalize(const std::vector<Vec>& vs) {
    double scale = 0.0;
    for (const Vec& v : vs) scale = std::max(scale, norm(v));
    std::vector<Vec> out;
    out.reserve(vs.size());
    for (std::size_t k = 0; k < vs.size(); ++k) {
        Vec w = vs[k];
        if (!out.empty()) require_same_size(w, out.front());
        for (const Vec& q : out) w = axpy(-dot(q, w), q, w);
        // second pass restores orthogonality lost to cancellation
        for (const Vec& q : out) w = axpy(-dot(q, w), q, w);
        const double nw = norm(w);
        if (!(nw > 1e-10 * scale))
            throw Error(ErrorCode::RankDeficient, "vector is linearly dependent on its predecessors",
                        std::to_string(k + 1));
        out.push_back(scaled(w, 1.0 / nw));
    }
    return out;
}

struct SymEigen {
    Vec values;                // ascending
    std::vector<Vec> vectors;  // vectors[k] pairs with values[k]
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius mass drops below
// 1e-14 of the matrix scale.
inline SymEigen sym_eigen(Mat A) {
    const std::size_t n = A.size();
    const double scale = A.max_abs();
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = r + 1; c < n; ++c)
            if (std::abs(A(r, c) - A(c, r)) > 1e-12 * scale)
                throw Error(ErrorCode::NotSymmetric, "matrix is not symmetric",
                            "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")");

    Mat V = Mat::identity(n);
    auto off = [&] {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r + 1; c < n; ++c) s += 2.0 * A(r, c) * A(r, c);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off() > 1e-14 * scale; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = A(k, p), akq = A(k, q);
                    A(k, p) = c * akp - s * akq;
                    A(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = A(p, k), aqk = A(q, k);
                    A(p, k) = c * apk - s * aqk;
                    A(q, k) = s * apk + c * aqk;
                }
                A(p, q) = A(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = V(k, p), vkq = V(k, q);
                    V(k, p) = c * vkp - s * vkq;
                    V(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return A(a, a) < A(b, b); });

    SymEigen out;
    for (std::size_t k : order) {
        out.values.push_back(A(k, k));
        Vec v(n);
        for (std::size_t r = 0; r < n; ++r) v[r] = V(r, k);
        out.vectors.push_back(std::move(v));
    }
    return out;
}

}  // namespace dircurv
