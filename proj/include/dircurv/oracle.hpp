#pragma once

// Brute-force checks built from the definitions rather than from the Hessian
// formula. Everything here works on the planar section
//   P(xi, u) = xi + span{u, grad f(xi)}
// and samples the circle of radius r around xi inside that plane.
//
// Both estimators fix the base point at xi instead of letting it range over a
// neighbourhood of xi; for C^2 fields the quotient is continuous in the base
// point, so this only affects the rate of convergence.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "dircurv/body.hpp"
#include "dircurv/error.hpp"
#include "dircurv/linalg.hpp"

namespace dircurv {

struct ModulusSample {
    double r = 0.0;
    double value = 0.0;          // min over section roots of <xi - eta, xi*>
    std::vector<Vec> witnesses;  // boundary points eta with |xi - eta| = r
    std::vector<double> drops;   // <xi - eta, xi*> per witness
    bool extra_roots = false;    // circle met the boundary more than twice
};

struct GammaEstimate {
    double value = 0.0;  // quotient at the smallest radius
    std::vector<double> radii;
    std::vector<double> quotients;  // modulus / r^2 per radius
    bool extra_roots = false;
};

struct RadiusContainment {
    double value = 0.0;  // +inf for flat sections
    double eps = 0.0;
    bool flat = false;
    std::size_t samples = 0;
    bool extra_roots = false;
};

inline constexpr int kDefaultCircleSamples = 512;

namespace detail {

struct SectionCircle {
    Vec e_t;  // unit, along u
    Vec e_n;  // unit, along the normal component of grad f
    double dual_t = 0.0;  // <e_t, xi*>
    double dual_n = 0.0;  // <e_n, xi*>
};

inline SectionCircle section_plane(const BoundaryPoint& p, std::span<const double> u) {
    if (u.size() != p.size()) throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension");
    if (!(norm(u) > 0.0)) throw Error(ErrorCode::ZeroDirection, "direction is the zero vector");
    if (!in_tangent_hyperplane(p, u)) throw Error(ErrorCode::NotTangent, "direction is not in the tangent hyperplane");
    const std::vector<Vec> q = orthonormalize({Vec(u.begin(), u.end()), p.grad});
    SectionCircle s{q[0], q[1], 0.0, 0.0};
    s.dual_t = dot(s.e_t, p.dual);
    s.dual_n = dot(s.e_n, p.dual);
    return s;
}

struct CircleRoots {
    std::vector<double> thetas;
    std::vector<Vec> points;
};

// Angles where f changes sign along xi + r (cos t e_t + sin t e_n), located by
// a uniform scan of m samples and bisection to full double precision.
inline CircleRoots circle_roots(const ImplicitBody& body, const BoundaryPoint& p, const SectionCircle& s, double r,
                                int m) {
    const std::size_t n = p.size();
    Vec eta(n);
    auto at = [&](double t) -> const Vec& {
        const double c = std::cos(t), sn = std::sin(t);
        for (std::size_t k = 0; k < n; ++k) eta[k] = p.xi[k] + r * (c * s.e_t[k] + sn * s.e_n[k]);
        return eta;
    };
    auto g = [&](double t) { return body.value(at(t)); };

    const double step = 2.0 * std::numbers::pi / m;
    std::vector<double> vals(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) vals[static_cast<std::size_t>(k)] = g(step * k);

    CircleRoots out;
    for (int k = 0; k < m; ++k) {
        const double ga = vals[static_cast<std::size_t>(k)];
        const double gb = vals[static_cast<std::size_t>((k + 1) % m)];
        double root;
        if (ga == 0.0) {
            root = step * k;
        } else if (gb != 0.0 && (ga < 0.0) != (gb < 0.0)) {
            double lo = step * k, hi = step * (k + 1);
            const bool lo_neg = ga < 0.0;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (mid <= lo || mid >= hi) break;
                const double gm = g(mid);
                if (gm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((gm < 0.0) == lo_neg) lo = mid;
                else hi = mid;
            }
            root = std::abs(g(lo)) <= std::abs(g(hi)) ? lo : hi;
        } else {
            continue;
        }
        out.thetas.push_back(root);
        out.points.push_back(at(root));
    }
    return out;
}

// <xi - eta, xi*> without forming xi - eta, which would cancel.
inline double drop_at(const SectionCircle& s, double r, double theta) {
    return -r * (std::cos(theta) * s.dual_t + std::sin(theta) * s.dual_n);
}

}  // namespace detail

inline ModulusSample modulus_bruteforce(const ImplicitBody& body, const BoundaryPoint& p, std::span<const double> u,
                                        double r, int m = kDefaultCircleSamples) {
    if (!(r > 0.0) || !(r < body.delta()))
        throw Error(ErrorCode::InvalidArgument, "chord radius must lie in (0, delta)");
    if (m < 64) throw Error(ErrorCode::InvalidArgument, "need at least 64 circle samples");
    const detail::SectionCircle s = detail::section_plane(p, u);
    const detail::CircleRoots roots = detail::circle_roots(body, p, s, r, m);
    if (roots.thetas.empty())
        throw Error(ErrorCode::NoBoundaryIntersection, "circle of radius " + format_number(r) + " misses the boundary");

    ModulusSample out;
    out.r = r;
    out.value = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < roots.thetas.size(); ++k) {
        const double d = detail::drop_at(s, r, roots.thetas[k]);
        out.drops.push_back(d);
        out.witnesses.push_back(roots.points[k]);
        out.value = std::min(out.value, d);
    }
    out.extra_roots = roots.thetas.size() > 2;
    return out;
}

// Modulus quotients at r_k = r0 / 2^k, r0 = min(delta/4, 0.1), k = 0..6.
inline GammaEstimate gamma_estimate(const ImplicitBody& body, const BoundaryPoint& p, std::span<const double> u,
                                    int m = kDefaultCircleSamples) {
    constexpr int kLevels = 7;
    GammaEstimate out;
    double r = std::min(body.delta() / 4.0, 0.1);
    for (int k = 0; k < kLevels; ++k, r *= 0.5) {
        const ModulusSample s = modulus_bruteforce(body, p, u, r, m);
        out.radii.push_back(r);
        out.quotients.push_back(s.value / (r * r));
        out.extra_roots = out.extra_roots || s.extra_roots;
    }
    out.value = out.quotients.back();
    return out;
}

// Smallest r such that the section points within eps of xi lie in the ball
// xi - r xi* + r |xi*| B. A section point eta needs
//   r >= |eta - xi|^2 / (2 <xi - eta, xi*>),
// so the answer is the maximum of that bound over the sampled points. Compare
// against R / |xi*|.
inline RadiusContainment radius_containment(const ImplicitBody& body, const BoundaryPoint& p,
                                            std::span<const double> u, double eps, int radii = 16,
                                            int m = kDefaultCircleSamples) {
    if (!(eps > 0.0) || !(eps < body.delta() / 2.0))
        throw Error(ErrorCode::InvalidArgument, "eps must lie in (0, delta/2)");
    if (radii < 1 || m < 64) throw Error(ErrorCode::InvalidArgument, "sampling grid too small");
    const detail::SectionCircle s = detail::section_plane(p, u);
    const double dual_norm = norm(p.dual);

    RadiusContainment out;
    out.eps = eps;
    for (int k = 1; k <= radii; ++k) {
        const double r = eps * k / radii;
        const detail::CircleRoots roots = detail::circle_roots(body, p, s, r, m);
        if (roots.thetas.empty())
            throw Error(ErrorCode::NoBoundaryIntersection,
                        "circle of radius " + format_number(r) + " misses the boundary");
        out.extra_roots = out.extra_roots || roots.thetas.size() > 2;
        for (double theta : roots.thetas) {
            const double d = detail::drop_at(s, r, theta);
            ++out.samples;
            // a drop at rounding level means the section is straight here
            if (d <= 1e-10 * r * dual_norm) {
                out.flat = true;
                out.value = std::numeric_limits<double>::infinity();
                return out;
            }
            out.value = std::max(out.value, r * r / (2.0 * d));
        }
    }
    return out;
}

}  // namespace dircurv
