#pragma once

// Directional (2-dimensional) curvature of an implicit convex body at a
// boundary point xi, in a tangent direction u:
//
//   gamma(u) = <H u, u> / (2 <xi, grad f> |u|^2)
//   kappa(u) = gamma(u) / |xi*| = <H u, u> / (2 |grad f| |u|^2)
//   R(u)     = 1 / (2 kappa(u))
//
// with H the Hessian of f at xi and xi* the dual vector. The curvature of
// the body at xi taken over all sections, not computed here, is bounded above
// by every directional value.

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "dircurv/body.hpp"
#include "dircurv/error.hpp"
#include "dircurv/linalg.hpp"

namespace dircurv {

// Below this, kappa contradicts the convexity hypothesis on f.
inline constexpr double kConvexityTolerance = 1e-10;

struct DirectionalCurvature {
    Vec direction;
    double gamma_hat = 0.0;
    double kappa_hat = 0.0;
    double radius_hat = std::numeric_limits<double>::infinity();
    bool convexity_warning = false;
};

struct CurvatureExtrema {
    double kappa_min = 0.0;
    double kappa_max = 0.0;
    Vec dir_min;  // unit, tangent
    Vec dir_max;
};

namespace detail {

inline void require_tangent(const BoundaryPoint& p, std::span<const double> u) {
    if (u.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension");
    if (!(norm(u) > 0.0)) throw Error(ErrorCode::ZeroDirection, "direction is the zero vector");
    if (!in_tangent_hyperplane(p, u))
        throw Error(ErrorCode::NotTangent, "direction is not in the tangent hyperplane");
}

// <H u, u> / |u|^2
inline double rayleigh(const BoundaryPoint& p, std::span<const double> u) {
    return bilinear(p.hess, u, u) / dot(u, u);
}

}  // namespace detail

inline double gamma_directional(const BoundaryPoint& p, std::span<const double> u) {
    detail::require_tangent(p, u);
    return detail::rayleigh(p, u) / (2.0 * p.pairing);
}

inline double curvature_radius(double kappa) {
    if (kappa < 0.0) throw Error(ErrorCode::NegativeCurvature, "curvature radius needs kappa >= 0");
    if (kappa == 0.0) return std::numeric_limits<double>::infinity();
    return 1.0 / (2.0 * kappa);
}

// Non-positive kappa gets an infinite radius; a clearly negative one also
// raises convexity_warning.
inline DirectionalCurvature kappa_directional(const BoundaryPoint& p, std::span<const double> u) {
    detail::require_tangent(p, u);
    DirectionalCurvature out;
    out.direction.assign(u.begin(), u.end());
    const double q = detail::rayleigh(p, u);
    out.gamma_hat = q / (2.0 * p.pairing);
    out.kappa_hat = q / (2.0 * norm(p.grad));
    out.convexity_warning = out.kappa_hat < -kConvexityTolerance;
    out.radius_hat = out.kappa_hat > 0.0 ? curvature_radius(out.kappa_hat) : std::numeric_limits<double>::infinity();
    return out;
}

// Extremes of kappa over the unit tangent sphere: eigenvalues of the Hessian
// compressed onto an orthonormal tangent basis.
inline CurvatureExtrema extrema(const BoundaryPoint& p, const TangentFrame& fr) {
    const std::size_t m = fr.ortho.size();
    Mat M(m);
    std::vector<Vec> Hq;
    Hq.reserve(m);
    for (const Vec& q : fr.ortho) Hq.push_back(p.hess * q);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) M(a, b) = M(b, a) = dot(Hq[a], fr.ortho[b]);

    const SymEigen eig = sym_eigen(M);
    auto lift = [&](const Vec& coeffs) {
        Vec d(p.size(), 0.0);
        for (std::size_t a = 0; a < m; ++a) d = axpy(coeffs[a], fr.ortho[a], d);
        return scaled(d, 1.0 / norm(d));
    };
    const double scale = 2.0 * norm(p.grad);
    CurvatureExtrema out;
    out.kappa_min = eig.values.front() / scale;
    out.kappa_max = eig.values.back() / scale;
    out.dir_min = lift(eig.vectors.front());
    out.dir_max = lift(eig.vectors.back());
    return out;
}

// The body with field x -> f(x + y). Boundary point xi of the original maps to
// xi - y; curvature is unchanged.
inline ImplicitBody translate_body(const ImplicitBody& body, std::span<const double> y) {
    if (y.size() != body.size()) throw Error(ErrorCode::DimensionMismatch, "shift has wrong dimension");
    if (!(body.value(y) < 0.0)) throw Error(ErrorCode::NotInterior, "shift must be an interior point of the body");
    std::vector<Expr> shifted;
    for (std::size_t k = 0; k < body.size(); ++k)
        shifted.push_back(Expr::variable(static_cast<int>(k)) + Expr(y[k]));
    return ImplicitBody(body.dimension(), substitute(body.field(), shifted), body.delta(), body.tolerances());
}

// The same body described by c * f, c > 0.
inline ImplicitBody scale_field(const ImplicitBody& body, double c) {
    if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "field scale must be positive");
    return ImplicitBody(body.dimension(), Expr(c) * body.field(), body.delta(), body.tolerances());
}

}  // namespace dircurv
