#pragma once

// Test-only helpers: reference bodies, random generators and finite
// difference oracles. Nothing here calls into the curvature formulas.

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "dircurv/dircurv.hpp"

namespace dircurv::test {

inline bool rel_close(double a, double b, double tol) {
    if (a == b) return true;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline Expr x(int k) { return Expr::variable(k); }

inline ImplicitBody disk() { return ImplicitBody::from_text(2, "x1^2 + x2^2 - 1", 0.5); }

inline ImplicitBody sphere(int n, double R) {
    Expr f = pow(x(0), 2);
    for (int k = 1; k < n; ++k) f = f + pow(x(k), 2);
    return ImplicitBody(n, f - Expr(R * R), std::max(0.4, R / 2));
}

// Upper arc of |x2| <= 1 - x1^4 and the mirrored lower arc.
inline ImplicitBody quartic_upper() { return ImplicitBody::from_text(2, "x2 - 1 + x1^4", 0.2); }
inline ImplicitBody quartic_lower() { return ImplicitBody::from_text(2, "-x2 - 1 + x1^4", 0.2); }

inline ImplicitBody cylinder_lateral(double a) {
    return ImplicitBody(3, pow(x(0), 2) + pow(x(2), 2) - Expr(a * a), 0.5);
}
inline ImplicitBody cylinder_top(double b) { return ImplicitBody(3, x(1) - Expr(b), 0.5); }

inline ImplicitBody ellipsoid() { return ImplicitBody::from_text(3, "x1^2/4 + x2^2 + x3^2/0.25 - 1", 0.2); }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Vec random_normal(std::mt19937_64& gen, std::size_t n) {
    std::normal_distribution<double> N(0.0, 1.0);
    Vec v(n);
    for (double& c : v) c = N(gen);
    return v;
}

inline Vec random_unit(std::mt19937_64& gen, std::size_t n) {
    Vec v = random_normal(gen, n);
    return scaled(v, 1.0 / norm(v));
}

// Random vector projected onto the hyperplane orthogonal to `normal`.
inline Vec random_tangent(std::mt19937_64& gen, const Vec& normal) {
    for (;;) {
        Vec v = random_normal(gen, normal.size());
        v = axpy(-dot(v, normal) / dot(normal, normal), normal, v);
        // second projection pass for accuracy
        v = axpy(-dot(v, normal) / dot(normal, normal), normal, v);
        if (norm(v) > 1e-3) return v;
    }
}

struct Quadric {
    Mat A;  // symmetric positive definite
    Vec b;
    double c = 1.0;
    ImplicitBody body;
};

// f(x) = x^T A x + b.x - c with A = B B^T + 0.5 I; the origin is interior.
inline Quadric random_quadric(std::mt19937_64& gen, int n) {
    const auto nn = static_cast<std::size_t>(n);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.5, 2.0);
    Mat B(nn), A(nn);
    for (std::size_t r = 0; r < nn; ++r)
        for (std::size_t s = 0; s < nn; ++s) B(r, s) = 0.6 * N(gen);
    for (std::size_t r = 0; r < nn; ++r)
        for (std::size_t s = 0; s < nn; ++s) {
            double acc = r == s ? 0.5 : 0.0;
            for (std::size_t k = 0; k < nn; ++k) acc += B(r, k) * B(s, k);
            A(r, s) = acc;
        }
    Vec b(nn);
    for (double& v : b) v = 0.3 * N(gen);
    const double c = U(gen);

    Expr f(0.0);
    bool first = true;
    auto add = [&](const Expr& term) {
        f = first ? term : f + term;
        first = false;
    };
    for (std::size_t r = 0; r < nn; ++r)
        for (std::size_t s = r; s < nn; ++s) {
            const double coeff = r == s ? A(r, r) : 2.0 * A(r, s);
            add(r == s ? Expr(coeff) * pow(x(static_cast<int>(r)), 2)
                       : Expr(coeff) * x(static_cast<int>(r)) * x(static_cast<int>(s)));
        }
    for (std::size_t r = 0; r < nn; ++r) add(Expr(b[r]) * x(static_cast<int>(r)));
    f = f - Expr(c);
    return Quadric{A, b, c, ImplicitBody(n, f, 0.2)};
}

// Boundary point on the ray through `dir`, projected with the gauge.
inline BoundaryPoint boundary_point_along(const ImplicitBody& body, const Vec& dir) {
    const double rho = minkowski_gauge(body, dir);
    return validate_point(body, scaled(dir, 1.0 / rho));
}

// Central difference of an expression in coordinate k.
inline double central_difference(const Expr& e, const Vec& at, int k, double h = 1e-5) {
    Vec plus = at, minus = at;
    plus[static_cast<std::size_t>(k)] += h;
    minus[static_cast<std::size_t>(k)] -= h;
    return (evaluate(e, plus) - evaluate(e, minus)) / (2.0 * h);
}

// Cofactor expansion along the first row; exponential, for n <= 6 only.
inline double cofactor_determinant(const Mat& A) {
    const std::size_t n = A.size();
    if (n == 1) return A(0, 0);
    double det = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
        Mat minor(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (q == c) continue;
                minor(r - 1, cc++) = A(r, q);
            }
        }
        det += ((c % 2 == 0) ? 1.0 : -1.0) * A(0, c) * cofactor_determinant(minor);
    }
    return det;
}

// u^j written out coordinate by coordinate.
inline Vec frame_vector(const BoundaryPoint& p, std::size_t j) {
    Vec u(p.size(), 0.0);
    u[j] = 1.0;
    u[p.pivot] = -p.grad[j] / p.grad[p.pivot];
    return u;
}

}  // namespace dircurv::test
