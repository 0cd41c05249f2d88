#pragma once

// Curvature of the section curve  dF ∩ P(xi, u^j)  seen as the intersection of
// n-1 implicit hypersurfaces: f = 0 together with the n-2 hyperplanes
//
//   p_k(eta) = eta_k - xi_k + a_ki (eta_i - xi_i) + a_kj (eta_j - xi_j),
//   a_kl     = -f_l f_k / (f_i^2 + f_j^2),          k not in {i, j},
//
// where i is the pivot and j the chosen tangent index. The general route
// evaluates k_G = |(Tan * grad Tan) ^ Tan| / |Tan|^3 with Tan the bordered
// determinant det[e; grad f; grad p_k...]; the closed route is
//
//   k_G = |f_ii f_j^2 - 2 f_i f_j f_ij + f_jj f_i^2| / (|grad f| (f_i^2 + f_j^2)),
//
// and both equal 2 * kappa(u^j).

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dircurv/body.hpp"
#include "dircurv/error.hpp"
#include "dircurv/expr.hpp"
#include "dircurv/linalg.hpp"

namespace dircurv {

struct PlaneSystem {
    std::size_t pivot = 0;       // i
    std::size_t j = 0;
    std::vector<std::size_t> ks;  // I \ {i, j}, ascending
    std::vector<double> a_i;      // a_{k,i} per entry of ks
    std::vector<double> a_j;      // a_{k,j}
    Vec xi;

    std::size_t size() const { return xi.size(); }

    // p_k(eta) for the r-th hyperplane.
    double plane_value(std::size_t r, std::span<const double> eta) const {
        const std::size_t k = ks.at(r), i = pivot;
        return eta[k] - xi[k] + a_i[r] * (eta[i] - xi[i]) + a_j[r] * (eta[j] - xi[j]);
    }

    // Gradient of p_k: 1 at k, a_ki at i, a_kj at j.
    Vec plane_gradient(std::size_t r) const {
        Vec g(size(), 0.0);
        g[ks.at(r)] = 1.0;
        g[pivot] = a_i[r];
        g[j] = a_j[r];
        return g;
    }
};

inline PlaneSystem plane_system(const BoundaryPoint& p, std::size_t j) {
    if (j >= p.size()) throw Error(ErrorCode::InvalidIndex, "tangent index out of range", std::to_string(j + 1));
    if (j == p.pivot) throw Error(ErrorCode::InvalidIndex, "tangent index equals the pivot", std::to_string(j + 1));
    PlaneSystem sys;
    sys.pivot = p.pivot;
    sys.j = j;
    sys.xi = p.xi;
    const double fi = p.grad[p.pivot], fj = p.grad[j];
    const double denom = fi * fi + fj * fj;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k == p.pivot || k == j) continue;
        sys.ks.push_back(k);
        sys.a_i.push_back(-fi * p.grad[k] / denom);
        sys.a_j.push_back(-fj * p.grad[k] / denom);
    }
    return sys;
}

namespace detail {

// Tan_m as a linear form in the gradient: Tan_m(eta) = sum_c C[m][c] f_c(eta).
// C[m][c] is the signed minor of the bordered matrix with the gradient row
// replaced by e_c.
inline std::vector<Vec> tangent_cofactors(const PlaneSystem& sys) {
    const std::size_t n = sys.size();
    std::vector<Vec> C(n, Vec(n, 0.0));
    if (n == 2) {
        // planar tangent (-f_2, f_1)
        C[0][1] = -1.0;
        C[1][0] = 1.0;
        return C;
    }
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < sys.ks.size(); ++r) rows.push_back(sys.plane_gradient(r));
    for (std::size_t m = 0; m < n; ++m) {
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (c == m) continue;
            Mat A(n - 1);
            std::size_t col = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (q == m) continue;
                A(0, col) = q == c ? 1.0 : 0.0;
                for (std::size_t r = 0; r < rows.size(); ++r) A(r + 1, col) = rows[r][q];
                ++col;
            }
            C[m][c] = sign * determinant(A);
        }
    }
    return C;
}

inline double tangent_scale(const BoundaryPoint& p, const PlaneSystem& sys) {
    double s = norm(p.grad);
    for (std::size_t r = 0; r < sys.ks.size(); ++r) s *= norm(sys.plane_gradient(r));
    return s;
}

}  // namespace detail

// Tan(xi) by cofactor expansion of det[e; grad f(xi); grad p_k ...] along the
// first row. For n = 2 this is (-f_2, f_1).
inline Vec goldman_tangent(const BoundaryPoint& p, const PlaneSystem& sys) {
    const std::size_t n = p.size();
    Vec tan(n, 0.0);
    if (n == 2) {
        tan = {-p.grad[1], p.grad[0]};
    } else {
        std::vector<Vec> rows{p.grad};
        for (std::size_t r = 0; r < sys.ks.size(); ++r) rows.push_back(sys.plane_gradient(r));
        for (std::size_t m = 0; m < n; ++m) {
            Mat A(n - 1);
            std::size_t col = 0;
            for (std::size_t q = 0; q < n; ++q) {
                if (q == m) continue;
                for (std::size_t r = 0; r < rows.size(); ++r) A(r, col) = rows[r][q];
                ++col;
            }
            tan[m] = ((m % 2 == 0) ? 1.0 : -1.0) * determinant(A);
        }
    }
    if (!(norm(tan) > 1e-12 * detail::tangent_scale(p, sys)))
        throw Error(ErrorCode::DegenerateTangent, "intersection curve tangent vanishes");
    return tan;
}

// k_G through the general formula. Each Tan component is built as an
// expression in the partials of f, so grad(Tan) is exact.
inline double goldman_curvature_general(const ImplicitBody& body, const BoundaryPoint& p, const PlaneSystem& sys) {
    const std::size_t n = p.size();
    if (body.size() != n) throw Error(ErrorCode::DimensionMismatch, "body and point dimensions differ");
    const std::vector<Vec> C = detail::tangent_cofactors(sys);

    std::vector<Expr> tan_field(n);
    for (std::size_t m = 0; m < n; ++m) {
        Expr acc(0.0);
        for (std::size_t c = 0; c < n; ++c) {
            if (C[m][c] == 0.0) continue;
            acc = detail::fold_add(acc, detail::fold_mul(Expr(C[m][c]), body.partial(c)));
        }
        tan_field[m] = acc;
    }

    Vec tan(n);
    for (std::size_t m = 0; m < n; ++m) tan[m] = evaluate(tan_field[m], p.xi);
    const double tnorm = norm(tan);
    if (!(tnorm > 1e-12 * detail::tangent_scale(p, sys)))
        throw Error(ErrorCode::DegenerateTangent, "intersection curve tangent vanishes");

    // jac(l, m) = d Tan_m / d x_l; each column is the gradient of one component.
    Mat jac(n);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t l = 0; l < n; ++l)
            jac(l, m) = evaluate(differentiate(tan_field[m], static_cast<int>(l)), p.xi);

    Vec row(n, 0.0);  // Tan * grad(Tan)
    for (std::size_t m = 0; m < n; ++m) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l) s += tan[l] * jac(l, m);
        row[m] = s;
    }
    return exterior_magnitude(row, tan) / (tnorm * tnorm * tnorm);
}

inline double goldman_curvature_closed(const BoundaryPoint& p, std::size_t j) {
    if (j >= p.size()) throw Error(ErrorCode::InvalidIndex, "tangent index out of range", std::to_string(j + 1));
    if (j == p.pivot) throw Error(ErrorCode::InvalidIndex, "tangent index equals the pivot", std::to_string(j + 1));
    const std::size_t i = p.pivot;
    const double fi = p.grad[i], fj = p.grad[j];
    const double num = p.hess(i, i) * fj * fj - 2.0 * fi * fj * p.hess(i, j) + p.hess(j, j) * fi * fi;
    return std::abs(num) / (norm(p.grad) * (fi * fi + fj * fj));
}

}  // namespace dircurv
