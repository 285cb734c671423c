#ifndef SPECCURVE_BIVAR_FACTOR_HPP
#define SPECCURVE_BIVAR_FACTOR_HPP

// Factorization of squarefree bivariate polynomials over Q(i)[z,w] into
// irreducible factors, sound and complete over the base field Q(i)(z).
//
// Method: pick a good fiber z = z0 (leading coefficient and discriminant
// nonzero), factor the fiber over Q(i), Hensel-lift the coprime fiber factors
// (z-z0)-adically past the degree bound, then recombine subsets and verify by
// exact division.

#include <optional>
#include <utility>
#include <vector>

#include "speccurve/bipoly.hpp"
#include "speccurve/factor.hpp"

namespace speccurve {

namespace detail_bivar {

// Drop all terms of z-degree >= K.
inline BiPoly truncate_z(const BiPoly& F, int K) {
    std::vector<UniPoly> v(static_cast<std::size_t>(F.deg_w()) + 1);
    for (std::size_t j = 0; j < v.size(); ++j) {
        const UniPoly& c = F.wcoeff(j);
        std::vector<GaussRat> cc;
        for (int k = 0; k <= std::min(c.deg(), K - 1); ++k)
            cc.push_back(c[static_cast<std::size_t>(k)]);
        v[j] = UniPoly(std::move(cc));
    }
    return BiPoly(std::move(v));
}

// Power series inverse of u (u(0) != 0) to order K.
inline UniPoly series_inverse(const UniPoly& u, int K) {
    GaussRat inv0 = u[0].inv();
    std::vector<GaussRat> q(static_cast<std::size_t>(K));
    q[0] = inv0;
    for (int k = 1; k < K; ++k) {
        GaussRat acc;
        for (int j = 1; j <= std::min(k, u.deg()); ++j)
            acc += u[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(k - j)];
        q[static_cast<std::size_t>(k)] = -(acc * inv0);
    }
    return UniPoly(std::move(q));
}

// Extract the coefficient of z^k as a polynomial in w.
inline UniPoly z_coefficient(const BiPoly& F, int k) {
    std::vector<GaussRat> v(static_cast<std::size_t>(F.deg_w()) + 1);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = F.wcoeff(j)[static_cast<std::size_t>(k)];
    return UniPoly(std::move(v));
}

// Hensel lift the monic coprime fiber factors h of the (series-)monic M to
// precision z^K: returns monic G_i in Q(i)[z][w] with prod G_i = M mod z^K.
inline std::vector<BiPoly> hensel_lift_series(const BiPoly& M, const std::vector<UniPoly>& h,
                                              int K) {
    std::size_t s = h.size();
    std::vector<UniPoly> bez(s);
    for (std::size_t i = 0; i < s; ++i) {
        UniPoly u = UniPoly::one();
        for (std::size_t j = 0; j < s; ++j)
            if (j != i) u = divmod(u * h[j], h[i]).second;
        auto [g, a, b] = ext_gcd(u, h[i]);
        (void)b;
        if (g.deg() != 0) throw consistency_error("hensel: fiber factors not coprime");
        bez[i] = a;  // u * a = 1 mod h[i]
    }
    std::vector<BiPoly> G(s);
    for (std::size_t i = 0; i < s; ++i) {
        std::vector<UniPoly> v(static_cast<std::size_t>(h[i].deg()) + 1);
        for (int k = 0; k <= h[i].deg(); ++k)
            v[static_cast<std::size_t>(k)] = UniPoly::constant(h[i][static_cast<std::size_t>(k)]);
        G[i] = BiPoly(std::move(v));
    }
    for (int k = 1; k < K; ++k) {
        BiPoly prod = BiPoly::constant(GaussRat(1));
        for (const auto& g : G) prod = truncate_z(prod * g, k + 1);
        BiPoly diff = truncate_z(M, k + 1) - prod;
        if (diff.is_zero()) continue;
        UniPoly E = z_coefficient(diff, k);
        if (E.is_zero()) continue;
        for (std::size_t i = 0; i < s; ++i) {
            UniPoly delta = divmod(E * bez[i], h[i]).second;
            if (delta.is_zero()) continue;
            // G_i += z^k * delta(w)
            std::vector<UniPoly> add(static_cast<std::size_t>(delta.deg()) + 1);
            for (int t = 0; t <= delta.deg(); ++t)
                add[static_cast<std::size_t>(t)] =
                    UniPoly::monomial(delta[static_cast<std::size_t>(t)], static_cast<std::size_t>(k));
            G[i] = G[i] + BiPoly(std::move(add));
        }
    }
    return G;
}

} // namespace detail_bivar

// Irreducible factors (primitive, normalized, positive w-degree) of a
// squarefree primitive F with deg_w >= 1, over Q(i)[z,w]. Deterministic.
inline std::vector<BiPoly> factor_bivariate_squarefree(const BiPoly& F_in) {
    BiPoly F = F_in.primitive_normalized();
    std::vector<BiPoly> out;
    if (F.deg_w() < 1) throw value_error("bivariate factorization needs positive w-degree");
    if (!is_squarefree_w(F)) throw value_error("bivariate factorization requires squarefree input");

    for (;;) {
        if (F.deg_w() == 1) {
            out.push_back(F.primitive_normalized());
            break;
        }
        UniPoly disc = resultant_w(F, F.derivative_w());

        // fiber choice: z0 with leading coefficient and discriminant nonzero
        GaussRat z0;
        for (long t = 0;; t = (t > 0 ? -t : -t + 1)) {
            GaussRat cand{Rat(t)};
            if (!F.lc_w().eval(cand).is_zero() && !disc.eval(cand).is_zero()) {
                z0 = cand;
                break;
            }
            if (t > 4 * (F.deg_z() + 2)) throw consistency_error("no good fiber point found");
        }

        BiPoly Fs = F.shift_z(z0);
        UniPoly fiber = Fs.eval_z(GaussRat(0));
        auto fiber_factors = factor_univariate(fiber);
        std::vector<UniPoly> h;
        for (const auto& [g, m] : fiber_factors.factors) {
            if (m != 1) throw consistency_error("fiber not squarefree despite disc check");
            h.push_back(g);
        }
        if (h.size() == 1) {
            out.push_back(F.primitive_normalized());
            break;
        }

        const UniPoly c = Fs.lc_w();
        int K = Fs.deg_z() + c.deg() + 1;
        UniPoly cinv = detail_bivar::series_inverse(c, K);
        // M = c^{-1} * Fs mod z^K (monic in w as a truncated series)
        std::vector<UniPoly> mv(static_cast<std::size_t>(Fs.deg_w()) + 1);
        for (std::size_t j = 0; j < mv.size(); ++j) {
            UniPoly prod = cinv * Fs.wcoeff(j);
            std::vector<GaussRat> cc;
            for (int k = 0; k < K && k <= prod.deg(); ++k) cc.push_back(prod[static_cast<std::size_t>(k)]);
            mv[j] = UniPoly(std::move(cc));
        }
        BiPoly M(std::move(mv));

        std::vector<BiPoly> lifted = detail_bivar::hensel_lift_series(M, h, K);

        // subset recombination
        bool found = false;
        std::size_t s = lifted.size();
        for (std::size_t size = 1; size * 2 <= s && !found; ++size) {
            std::vector<std::size_t> idx(size);
            for (std::size_t k = 0; k < size; ++k) idx[k] = k;
            for (;;) {
                BiPoly cand = BiPoly(c);
                for (std::size_t i : idx) cand = detail_bivar::truncate_z(cand * lifted[i], K);
                if (!cand.is_zero()) {
                    BiPoly prim = cand.primitive_normalized();
                    auto quo = try_exact_divide(Fs, prim);
                    if (quo.has_value()) {
                        out.push_back(prim.shift_z(-z0).primitive_normalized());
                        F = quo->shift_z(-z0).primitive_normalized();
                        found = true;
                        break;
                    }
                }
                int pos = static_cast<int>(size) - 1;
                while (pos >= 0 &&
                       idx[static_cast<std::size_t>(pos)] == s - size + static_cast<std::size_t>(pos))
                    --pos;
                if (pos < 0) break;
                ++idx[static_cast<std::size_t>(pos)];
                for (std::size_t k = static_cast<std::size_t>(pos) + 1; k < size; ++k)
                    idx[k] = idx[k - 1] + 1;
            }
        }
        if (!found) {
            out.push_back(F.primitive_normalized());
            break;
        }
    }

    std::sort(out.begin(), out.end(), [](const BiPoly& a, const BiPoly& b) {
        if (a.deg_w() != b.deg_w()) return a.deg_w() < b.deg_w();
        if (a.deg_z() != b.deg_z()) return a.deg_z() < b.deg_z();
        for (int j = 0; j <= a.deg_w(); ++j) {
            int c = cmp(a.wcoeff(static_cast<std::size_t>(j)), b.wcoeff(static_cast<std::size_t>(j)));
            if (c != 0) return c < 0;
        }
        return false;
    });
    return out;
}

} // namespace speccurve

#endif
