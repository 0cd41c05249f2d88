#pragma once

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dircurv/error.hpp"
#include "dircurv/expr.hpp"
#include "dircurv/linalg.hpp"

namespace dircurv {

struct Tolerances {
    double boundary = 1e-9;  // |f(xi)| <= boundary * (1 + |grad f(xi)|)
    double pivot = 1e-9;     // pivot needs |f_i| > pivot * |grad f|_inf
};

// The body F, contained in {f <= 0} near its boundary, with the origin in its
// interior. Convexity of F is assumed, not checked.
class ImplicitBody {
public:
    ImplicitBody(int dimension, Expr field, double delta, Tolerances tol = {})
        : n_(dimension), delta_(delta), tol_(tol) {
        if (dimension < 2) throw Error(ErrorCode::InvalidBody, "dimension must be at least 2");
        if (!(delta > 0.0) || !std::isfinite(delta))
            throw Error(ErrorCode::InvalidBody, "locality radius delta must be positive");
        if (!(tol.boundary > 0.0) || !(tol.pivot > 0.0))
            throw Error(ErrorCode::InvalidBody, "tolerances must be positive");
        if (max_variable_index(field) >= dimension)
            throw Error(ErrorCode::UnknownVariable, "field uses a variable beyond x" + std::to_string(dimension),
                        "x" + std::to_string(max_variable_index(field) + 1));

        auto d = std::make_shared<Derivatives>();
        d->f = std::move(field);
        const auto n = static_cast<std::size_t>(n_);
        for (int k = 0; k < n_; ++k) d->grad.push_back(differentiate(d->f, k));
        d->hess.resize(n * n);
        // Only r <= s is differentiated; the mirror shares the node, so the
        // evaluated Hessian is exactly symmetric.
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = r; s < n; ++s) {
                d->hess[r * n + s] = differentiate(d->grad[r], static_cast<int>(s));
                d->hess[s * n + r] = d->hess[r * n + s];
            }
        derivs_ = std::move(d);

        const Vec origin(n, 0.0);
        const double f0 = value(origin);
        if (!(f0 < 0.0))
            throw Error(ErrorCode::InvalidBody, "origin must be interior: f(0) = " + format_number(f0) + " is not < 0");
    }

    static ImplicitBody from_text(int dimension, std::string_view field, double delta, Tolerances tol = {}) {
        return ImplicitBody(dimension, parse(field, dimension), delta, tol);
    }

    int dimension() const { return n_; }
    std::size_t size() const { return static_cast<std::size_t>(n_); }
    double delta() const { return delta_; }
    const Tolerances& tolerances() const { return tol_; }
    const Expr& field() const { return derivs_->f; }
    const Expr& partial(std::size_t k) const { return derivs_->grad.at(k); }
    const Expr& second_partial(std::size_t r, std::size_t s) const { return derivs_->hess.at(r * size() + s); }

    double value(std::span<const double> x) const {
        check_size(x);
        return evaluate(field(), x);
    }
    Vec gradient(std::span<const double> x) const {
        check_size(x);
        Vec g(size());
        for (std::size_t k = 0; k < size(); ++k) g[k] = evaluate(partial(k), x);
        return g;
    }
    Mat hessian(std::span<const double> x) const {
        check_size(x);
        Mat H(size());
        for (std::size_t r = 0; r < size(); ++r)
            for (std::size_t s = r; s < size(); ++s) H(r, s) = H(s, r) = evaluate(second_partial(r, s), x);
        return H;
    }

private:
    struct Derivatives {
        Expr f;
        std::vector<Expr> grad;
        std::vector<Expr> hess;  // row-major n x n
    };

    void check_size(std::span<const double> x) const {
        if (x.size() != size())
            throw Error(ErrorCode::DimensionMismatch,
                        "expected " + std::to_string(n_) + " coordinates, got " + std::to_string(x.size()));
    }

    int n_;
    double delta_;
    Tolerances tol_;
    std::shared_ptr<const Derivatives> derivs_;
};

// A validated boundary point with its cached first and second derivatives.
struct BoundaryPoint {
    Vec xi;
    double value = 0.0;  // f(xi), inside the boundary tolerance band
    Vec grad;
    Mat hess;
    std::size_t pivot = 0;  // 0-based
    Vec dual;               // grad / <xi, grad>, so <xi, dual> = 1
    double pairing = 0.0;   // <xi, grad>

    std::size_t size() const { return xi.size(); }
};

struct TangentFrame {
    std::vector<std::size_t> indices;  // j != pivot, ascending; basis[a] is u^{indices[a]}
    std::vector<Vec> basis;
    std::vector<Vec> ortho;
};

inline BoundaryPoint validate_point(const ImplicitBody& body, std::span<const double> x) {
    BoundaryPoint p;
    p.xi.assign(x.begin(), x.end());
    for (double v : p.xi)
        if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "point has non-finite coordinates");
    p.value = body.value(p.xi);
    p.grad = body.gradient(p.xi);
    const double gnorm = norm(p.grad);
    const double tol_b = body.tolerances().boundary;
    const double tol_p = body.tolerances().pivot;

    if (!(std::abs(p.value) <= tol_b * (1.0 + gnorm)))
        throw Error(ErrorCode::NotOnBoundary, "f(x) = " + format_number(p.value) + " is outside the boundary band");
    if (!(gnorm > tol_p))
        throw Error(ErrorCode::NonSmoothPoint, "gradient vanishes at the point");

    const double ginf = max_abs(p.grad);
    bool found = false;
    for (std::size_t i = 0; i < p.size(); ++i)
        if (std::abs(p.grad[i]) > tol_p * ginf) {
            p.pivot = i;
            found = true;
            break;
        }
    if (!found) throw Error(ErrorCode::NonSmoothPoint, "no coordinate of the gradient is usable as pivot");

    p.pairing = dot(p.xi, p.grad);
    if (!(p.pairing > 0.0))
        throw Error(ErrorCode::OrientationViolation,
                    "<x, grad f(x)> = " + format_number(p.pairing) + " must be positive");
    p.dual = scaled(p.grad, 1.0 / p.pairing);
    p.hess = body.hessian(p.xi);
    return p;
}

// u^j has 1 at j, -f_j/f_i at the pivot i and 0 elsewhere.
inline TangentFrame tangent_frame(const BoundaryPoint& p) {
    TangentFrame fr;
    const std::size_t i = p.pivot;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j == i) continue;
        Vec u(p.size(), 0.0);
        u[j] = 1.0;
        u[i] = 0.0 - p.grad[j] / p.grad[i];  // never -0.0
        fr.indices.push_back(j);
        fr.basis.push_back(std::move(u));
    }
    fr.ortho = orthonormalize(fr.basis);
    return fr;
}

inline bool in_tangent_hyperplane(const BoundaryPoint& p, std::span<const double> u) {
    if (u.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension");
    const double nu = norm(u);
    if (!(nu > 0.0)) return false;
    return std::abs(dot(u, p.grad)) <= 1e-9 * nu * norm(p.grad);
}

// rho_F(x) = inf{lambda > 0 : x in lambda F}, located as the root of
// lambda -> f(x / lambda) by bracketing inside [1e-9, 1e9] and bisection.
inline double minkowski_gauge(const ImplicitBody& body, std::span<const double> x) {
    if (x.size() != body.size()) throw Error(ErrorCode::DimensionMismatch, "point has wrong dimension");
    if (!(norm(x) > 0.0)) throw Error(ErrorCode::InvalidArgument, "gauge is undefined at the origin");

    Vec y(x.size());
    auto g = [&](double lambda) {
        for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] / lambda;
        return body.value(y);
    };

    constexpr double kMin = 1e-9, kMax = 1e9;
    double outside = 1.0, inside = 1.0;  // g(outside) > 0 > g(inside)
    double g1 = g(1.0);
    if (g1 == 0.0) return 1.0;
    if (g1 > 0.0) {
        double lam = 1.0;
        while (g(lam) > 0.0) {
            outside = lam;
            lam *= 2.0;
            if (lam > kMax) throw Error(ErrorCode::RayEscapes, "no boundary crossing along the ray up to 1e9");
        }
        inside = lam;
    } else {
        double lam = 1.0;
        while (g(lam) < 0.0) {
            inside = lam;
            lam *= 0.5;
            if (lam < kMin) throw Error(ErrorCode::RayEscapes, "no boundary crossing along the ray down to 1e-9");
        }
        outside = lam;
    }

    double lo = std::min(outside, inside), hi = std::max(outside, inside);
    const bool lo_outside = lo == outside;
    double best = hi, best_abs = std::abs(g(hi));
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (std::abs(gm) < best_abs) {
            best = mid;
            best_abs = std::abs(gm);
        }
        if (gm == 0.0) break;
        if ((gm > 0.0) == lo_outside) lo = mid;
        else hi = mid;
    }
    if (std::abs(g(lo)) < best_abs) best = lo;
    return best;
}

}  // namespace dircurv
