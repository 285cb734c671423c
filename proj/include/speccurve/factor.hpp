#ifndef SPECCURVE_FACTOR_HPP
#define SPECCURVE_FACTOR_HPP

// Univariate factorization over Q(i).
//
// Route: Yun squarefree decomposition, then Trager's norm method to reduce
// each squarefree part to a factorization over Q, which is done by the
// classical mod-p / Hensel / recombination chain (Cantor-Zassenhaus mod p,
// linear multifactor lifting, subset recombination with a Mignotte-type
// bound). Everything is exact and deterministic: factors are returned monic,
// sorted by degree then lexicographically on coefficients.

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "speccurve/poly.hpp"
#include "speccurve/prng.hpp"

namespace speccurve {

struct GFactor {
    UniPoly factor;  // monic irreducible over Q(i)
    int mult;
};

struct GFactorization {
    GaussRat unit;  // f = unit * prod factor^mult
    std::vector<GFactor> factors;
};

namespace detail_factor {

// ----------------------------------------------------------------- mod p ---

using u64 = std::uint64_t;

inline u64 addm(u64 a, u64 b, u64 p) { u64 s = a + b; return s >= p ? s - p : s; }
inline u64 subm(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + p - b; }
inline u64 mulm(u64 a, u64 b, u64 p) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p);
}
inline u64 powm(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    while (e) {
        if (e & 1) r = mulm(r, a, p);
        a = mulm(a, a, p);
        e >>= 1;
    }
    return r;
}
inline u64 invm(u64 a, u64 p) { return powm(a % p, p - 2, p); }

// Dense poly over F_p, lowest degree first, trailing zeros trimmed.
using PPoly = std::vector<u64>;

inline void ptrim(PPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int pdeg(const PPoly& f) { return static_cast<int>(f.size()) - 1; }

inline PPoly pmul(const PPoly& a, const PPoly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    PPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = addm(r[i + j], mulm(a[i], b[j], p), p);
    }
    ptrim(r);
    return r;
}

inline PPoly psub(PPoly a, const PPoly& b, u64 p) {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t k = 0; k < b.size(); ++k) a[k] = subm(a[k], b[k], p);
    ptrim(a);
    return a;
}

// a mod b (b nonzero)
inline PPoly pmod(PPoly a, const PPoly& b, u64 p) {
    u64 inv_lc = invm(b.back(), p);
    while (pdeg(a) >= pdeg(b)) {
        u64 c = mulm(a.back(), inv_lc, p);
        std::size_t shift = a.size() - b.size();
        for (std::size_t k = 0; k < b.size(); ++k)
            a[shift + k] = subm(a[shift + k], mulm(c, b[k], p), p);
        ptrim(a);
        if (a.empty()) break;
    }
    return a;
}

inline PPoly pdivexact(PPoly a, const PPoly& b, u64 p) {
    PPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    u64 inv_lc = invm(b.back(), p);
    while (pdeg(a) >= pdeg(b)) {
        u64 c = mulm(a.back(), inv_lc, p);
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t k = 0; k < b.size(); ++k)
            a[shift + k] = subm(a[shift + k], mulm(c, b[k], p), p);
        ptrim(a);
        if (a.empty()) break;
    }
    ptrim(q);
    return q;
}

inline PPoly pmonic(PPoly f, u64 p) {
    if (f.empty()) return f;
    u64 s = invm(f.back(), p);
    for (auto& c : f) c = mulm(c, s, p);
    return f;
}

inline PPoly pgcd(PPoly a, PPoly b, u64 p) {
    while (!b.empty()) {
        PPoly r = pmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return pmonic(std::move(a), p);
}

inline PPoly pderiv(const PPoly& f, u64 p) {
    if (f.size() <= 1) return {};
    PPoly r(f.size() - 1);
    for (std::size_t k = 1; k < f.size(); ++k) r[k - 1] = mulm(f[k], k % p, p);
    ptrim(r);
    return r;
}

inline PPoly pmulmod(const PPoly& a, const PPoly& b, const PPoly& m, u64 p) {
    return pmod(pmul(a, b, p), m, p);
}

// g^e mod m with big exponent
inline PPoly ppowmod(PPoly g, const Int& e, const PPoly& m, u64 p) {
    PPoly r{1};
    g = pmod(std::move(g), m, p);
    for (std::size_t bit = mpz_sizeinbase(e.get_mpz_t(), 2); bit-- > 0;) {
        r = pmulmod(r, r, m, p);
        if (mpz_tstbit(e.get_mpz_t(), bit)) r = pmulmod(r, g, m, p);
    }
    return r;
}

// Cantor-Zassenhaus equal-degree splitting of a monic squarefree product g of
// irreducibles all of degree d. Appends the factors to out.
inline void edf(const PPoly& g, int d, u64 p, SplitMix64& rng, std::vector<PPoly>& out) {
    if (pdeg(g) == d) {
        out.push_back(g);
        return;
    }
    Int pd(1);
    for (int k = 0; k < d; ++k) pd *= p;
    Int e = (pd - 1) / 2;
    for (;;) {
        PPoly r(static_cast<std::size_t>(pdeg(g)), 0);
        for (auto& c : r) c = rng.next() % p;
        ptrim(r);
        if (r.empty()) continue;
        PPoly m = ppowmod(r, e, g, p);
        if (m.empty()) continue;
        m[0] = subm(m[0], 1, p);
        ptrim(m);
        PPoly h = pgcd(m, g, p);
        if (pdeg(h) > 0 && pdeg(h) < pdeg(g)) {
            edf(h, d, p, rng, out);
            edf(pdivexact(g, h, p), d, p, rng, out);
            return;
        }
    }
}

// Full factorization of a monic squarefree f mod p (distinct-degree then CZ).
inline std::vector<PPoly> factor_mod_p(PPoly f, u64 p) {
    std::vector<PPoly> out;
    SplitMix64 rng(0x5eedULL ^ p ^ (static_cast<u64>(pdeg(f)) << 32));
    PPoly x{0, 1};
    PPoly h = x;  // x^{p^d} mod f, iterated
    int d = 0;
    while (pdeg(f) > 0) {
        ++d;
        if (2 * d > pdeg(f)) {
            out.push_back(pmonic(std::move(f), p));
            break;
        }
        h = ppowmod(h, Int(p), f, p);
        PPoly diff = psub(h, x, p);
        if (diff.empty()) {
            // all remaining factors have degree dividing d and equal to d here
            diff = f;
        }
        PPoly g = pgcd(diff, f, p);
        if (pdeg(g) > 0) {
            edf(g, d, p, rng, out);
            f = pdivexact(f, g, p);
            h = pmod(h, f, p);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// ------------------------------------------------------------ integers -----

using ZPoly = std::vector<Int>;  // lowest first, trimmed

inline void ztrim(ZPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}
inline int zdeg(const ZPoly& f) { return static_cast<int>(f.size()) - 1; }

inline ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, Int(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    ztrim(r);
    return r;
}

// Division by a monic divisor; returns quotient, sets ok=false if remainder.
inline ZPoly zdiv_monic(ZPoly a, const ZPoly& b, bool& ok) {
    ok = true;
    if (zdeg(a) < zdeg(b)) {
        ok = a.empty();
        return {};
    }
    ZPoly q(a.size() - b.size() + 1, Int(0));
    for (int k = zdeg(a) - zdeg(b); k >= 0; --k) {
        Int c = a[static_cast<std::size_t>(k + zdeg(b))];
        if (c == 0) continue;
        q[static_cast<std::size_t>(k)] = c;
        for (int j = 0; j <= zdeg(b); ++j)
            a[static_cast<std::size_t>(k + j)] -= c * b[static_cast<std::size_t>(j)];
    }
    for (const auto& c : a)
        if (c != 0) {
            ok = false;
            break;
        }
    return q;
}

inline Int zcontent(const ZPoly& f) {
    Int g(0);
    for (const auto& c : f) g = gcd(g, c);
    return g;
}

inline Int mod_sym(const Int& a, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    if (r * 2 > m) r -= m;
    return r;
}

inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Linear multifactor Hensel lifting: F monic over Z, F = prod(fac) mod p with
// fac monic, squarefree, pairwise coprime mod p. Lifts to mod p^steps
// (coefficients kept in symmetric range). Returns lifted factors and sets
// modulus = p^steps.
inline std::vector<ZPoly> hensel_lift(const ZPoly& F, const std::vector<PPoly>& fac, u64 p,
                                      int steps, Int& modulus) {
    std::size_t s = fac.size();
    // Bezout data mod p: w_i = (prod_{j!=i} f_j)^{-1} mod f_i
    std::vector<PPoly> w(s);
    for (std::size_t i = 0; i < s; ++i) {
        PPoly u{1};
        for (std::size_t j = 0; j < s; ++j)
            if (j != i) u = pmod(pmul(u, fac[j], p), fac[i], p);
        // invert u mod fac[i] via extended Euclid in F_p[x]
        PPoly r0 = fac[i], r1 = u, t0, t1{1};
        while (!r1.empty()) {
            PPoly q = pdivexact(r0, r1, p);  // quotient of full division
            PPoly r2 = psub(r0, pmul(q, r1, p), p);
            PPoly t2 = psub(t0, pmul(q, t1, p), p);
            r0 = std::move(r1);
            r1 = std::move(r2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        // r0 = gcd (a nonzero constant since coprime), t0 its cofactor
        u64 c = invm(r0.empty() ? 1 : r0[0], p);
        for (auto& x : t0) x = mulm(x, c, p);
        ptrim(t0);
        w[i] = std::move(t0);
    }

    std::vector<ZPoly> G(s);
    for (std::size_t i = 0; i < s; ++i) {
        G[i].resize(fac[i].size());
        for (std::size_t k = 0; k < fac[i].size(); ++k)
            G[i][k] = mod_sym(Int(fac[i][k]), Int(p));
    }

    Int pk(p);
    for (int step = 1; step < steps; ++step) {
        // E = (F - prod G_i) / p^k mod p
        ZPoly prod{Int(1)};
        for (const auto& g : G) prod = zmul(prod, g);
        ZPoly diff(std::max(F.size(), prod.size()), Int(0));
        for (std::size_t k = 0; k < diff.size(); ++k) {
            Int a = k < F.size() ? F[k] : Int(0);
            Int b = k < prod.size() ? prod[k] : Int(0);
            diff[k] = a - b;
        }
        ztrim(diff);
        PPoly E(diff.size());
        bool all_zero = true;
        for (std::size_t k = 0; k < diff.size(); ++k) {
            Int q = diff[k] / pk;  // exact
            Int r;
            mpz_fdiv_r_ui(r.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
            E[k] = r.get_ui();
            if (E[k]) all_zero = false;
        }
        Int pk1 = pk * p;
        if (!all_zero) {
            ptrim(E);
            for (std::size_t i = 0; i < s; ++i) {
                PPoly delta = pmod(pmul(E, w[i], p), fac[i], p);
                if (G[i].size() < delta.size() + 1) G[i].resize(delta.size() + 1, Int(0));
                for (std::size_t k = 0; k < delta.size(); ++k)
                    G[i][k] += pk * Int(delta[k]);
            }
        }
        for (auto& g : G)
            for (auto& c : g) c = mod_sym(c, pk1);
        pk = pk1;
    }
    modulus = pk;
    return G;
}

// Factor a monic squarefree polynomial over Z into monic irreducibles.
inline std::vector<ZPoly> factor_monic_squarefree_int(const ZPoly& F) {
    int n = zdeg(F);
    if (n <= 1) return {F};

    // prime selection: reduction must stay squarefree
    u64 p = 65537;
    for (;;) {
        while (!is_prime_u64(p)) ++p;
        PPoly fp(F.size());
        for (std::size_t k = 0; k < F.size(); ++k) {
            Int r;
            mpz_fdiv_r_ui(r.get_mpz_t(), F[k].get_mpz_t(), static_cast<unsigned long>(p));
            fp[k] = r.get_ui();
        }
        ptrim(fp);
        if (pdeg(fp) == n) {
            PPoly g = pgcd(fp, pderiv(fp, p), p);
            if (pdeg(g) == 0) break;
        }
        ++p;
    }

    PPoly fp(F.size());
    for (std::size_t k = 0; k < F.size(); ++k) {
        Int r;
        mpz_fdiv_r_ui(r.get_mpz_t(), F[k].get_mpz_t(), static_cast<unsigned long>(p));
        fp[k] = r.get_ui();
    }
    std::vector<PPoly> fac = factor_mod_p(fp, p);
    if (fac.size() == 1) return {F};

    // Mignotte-type bound on coefficients of monic factors: 2^n * ||F||_2;
    // we use the safe integer bound (n+1) * 2^n * max|coeff|.
    Int H(0);
    for (const auto& c : F) H = std::max(H, Int(abs(c)));
    Int B = Int(n + 1) * H;
    mpz_mul_2exp(B.get_mpz_t(), B.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    int steps = 1;
    Int pk(p);
    while (pk <= 2 * B) {
        pk *= p;
        ++steps;
    }

    Int modulus;
    std::vector<ZPoly> lifted = hensel_lift(F, fac, p, steps, modulus);

    // subset recombination
    std::vector<ZPoly> out;
    ZPoly rest = F;
    std::vector<std::size_t> live(lifted.size());
    for (std::size_t k = 0; k < live.size(); ++k) live[k] = k;

    auto try_subset = [&](const std::vector<std::size_t>& idx) -> bool {
        ZPoly cand{Int(1)};
        for (std::size_t i : idx) cand = zmul(cand, lifted[live[i]]);
        for (auto& c : cand) c = mod_sym(c, modulus);
        bool ok = false;
        ZPoly q = zdiv_monic(rest, cand, ok);
        if (!ok) return false;
        out.push_back(cand);
        rest = std::move(q);
        std::vector<std::size_t> nl;
        for (std::size_t k = 0; k < live.size(); ++k)
            if (std::find(idx.begin(), idx.end(), k) == idx.end()) nl.push_back(live[k]);
        live = std::move(nl);
        return true;
    };

    bool progress = true;
    while (progress && !live.empty()) {
        progress = false;
        for (std::size_t size = 1; size * 2 <= live.size(); ++size) {
            // iterate size-subsets of [0, live.size()) in lexicographic order
            std::vector<std::size_t> idx(size);
            for (std::size_t k = 0; k < size; ++k) idx[k] = k;
            bool done = false;
            while (!done) {
                if (try_subset(idx)) {
                    progress = true;
                    break;
                }
                // next combination
                int pos = static_cast<int>(size) - 1;
                while (pos >= 0 && idx[static_cast<std::size_t>(pos)] ==
                                       live.size() - size + static_cast<std::size_t>(pos))
                    --pos;
                if (pos < 0)
                    done = true;
                else {
                    ++idx[static_cast<std::size_t>(pos)];
                    for (std::size_t k = static_cast<std::size_t>(pos) + 1; k < size; ++k)
                        idx[k] = idx[k - 1] + 1;
                }
            }
            if (progress) break;
        }
    }
    if (zdeg(rest) > 0) out.push_back(rest);
    return out;
}

} // namespace detail_factor

// ------------------------------------------------------------------ Q(i) ---

namespace detail_factor {

inline UniPoly conj_poly(const UniPoly& f) {
    std::vector<GaussRat> c(f.coeffs());
    for (auto& x : c) x = x.conj();
    return UniPoly(std::move(c));
}

// Monic irreducible rational factors of a squarefree real-coefficient monic
// polynomial (coefficients must lie in Q).
inline std::vector<UniPoly> factor_squarefree_rational(const UniPoly& f) {
    for (const auto& c : f.coeffs())
        if (!c.is_real()) throw value_error("factor_squarefree_rational: non-real coefficient");
    if (f.deg() <= 1) return {f.monic()};

    // clear denominators -> primitive integer polynomial
    Int den(1);
    for (const auto& c : f.coeffs()) den = lcm(den, c.re.get_den());
    ZPoly P(f.coeffs().size());
    for (std::size_t k = 0; k < P.size(); ++k) {
        Rat v = f.coeffs()[k].re * Rat(den);
        P[k] = v.get_num();
    }
    Int cont = zcontent(P);
    if (cont != 0)
        for (auto& c : P) c /= cont;
    if (P.back() < 0)
        for (auto& c : P) c = -c;

    // monicize: M(y) = lc^{n-1} P(y/lc), i.e. M_k = a_k lc^{n-1-k}, M_n = 1
    Int lc = P.back();
    int n = zdeg(P);
    ZPoly M(P.size());
    M[static_cast<std::size_t>(n)] = 1;
    Int scale(1);
    for (int k = n - 1; k >= 0; --k) {
        M[static_cast<std::size_t>(k)] = P[static_cast<std::size_t>(k)] * scale;
        scale *= lc;
    }

    std::vector<ZPoly> zf = factor_monic_squarefree_int(M);

    std::vector<UniPoly> out;
    for (const auto& g : zf) {
        // map back: factor of P is primitive part of g(lc*x); return monic
        std::vector<GaussRat> c(g.size());
        Rat s(1);
        for (std::size_t k = 0; k < g.size(); ++k) {
            c[k] = GaussRat(Rat(g[k]) * s);
            s *= Rat(lc);
        }
        out.push_back(UniPoly(std::move(c)).monic());
    }
    std::sort(out.begin(), out.end(), poly_less);
    return out;
}

// Trager norm method for a squarefree monic polynomial over Q(i).
inline std::vector<UniPoly> factor_squarefree_gauss(const UniPoly& g) {
    if (g.deg() <= 1) return {g};
    bool all_real = true;
    for (const auto& c : g.coeffs())
        if (!c.is_real()) {
            all_real = false;
            break;
        }
    (void)all_real;

    for (long s = 0;; s = (s > 0 ? -s : -s + 1)) {
        GaussRat shift(Rat(0), Rat(-s));  // evaluate g(x + (-s)i) = g(x - s i)
        UniPoly gs = g.shift_arg(shift);
        UniPoly N = gs * conj_poly(gs);
        if (gcd(N, N.derivative()).deg() == 0) {
            std::vector<UniPoly> rat_factors = factor_squarefree_rational(N);
            std::vector<UniPoly> out;
            for (const auto& h : rat_factors) {
                UniPoly d = gcd(gs, h);
                if (d.deg() >= 1) out.push_back(d.shift_arg(GaussRat(Rat(0), Rat(s))));
            }
            std::sort(out.begin(), out.end(), poly_less);
            // exactness check: product of factors must reproduce g
            UniPoly prod = UniPoly::one();
            for (const auto& d : out) prod = prod * d;
            if (prod != g) throw consistency_error("Trager factorization failed verification");
            return out;
        }
        if (s > 64) throw consistency_error("Trager: no squarefree norm found");
    }
}

} // namespace detail_factor

// Yun's squarefree decomposition (characteristic 0): f monic ->
// list of (g_i, i) with f = prod g_i^i and g_i squarefree pairwise coprime.
inline std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& f) {
    if (f.is_zero()) throw value_error("squarefree decomposition of zero polynomial");
    UniPoly fm = f.monic();
    std::vector<std::pair<UniPoly, int>> out;
    if (fm.deg() == 0) return out;
    UniPoly df = fm.derivative();
    UniPoly a = gcd(fm, df);
    UniPoly w = exact_div(fm, a);
    UniPoly y = exact_div(df, a);
    UniPoly z = y - w.derivative();
    int i = 1;
    while (w.deg() > 0) {
        UniPoly gi = gcd(w, z);
        if (gi.deg() > 0) out.push_back({gi, i});
        w = exact_div(w, gi);
        y = exact_div(z, gi);
        z = y - w.derivative();
        ++i;
    }
    return out;
}

// f / gcd(f, f'), monic: the squarefree part.
inline UniPoly squarefree_part(const UniPoly& f) {
    if (f.is_zero()) throw value_error("squarefree part of zero polynomial");
    if (f.deg() == 0) return UniPoly::one();
    UniPoly g = gcd(f, f.derivative());
    if (g.deg() == 0) return f.monic();
    return exact_div(f, g).monic();
}

// Full factorization over Q(i): exact and deterministic.
inline GFactorization factor_univariate(const UniPoly& f) {
    if (f.is_zero()) throw value_error("factor_univariate: zero polynomial");
    GFactorization out;
    out.unit = f.lc();
    if (f.deg() == 0) return out;
    for (const auto& [part, mult] : squarefree_decomposition(f)) {
        for (const auto& irr : detail_factor::factor_squarefree_gauss(part))
            out.factors.push_back({irr, mult});
    }
    std::sort(out.factors.begin(), out.factors.end(),
              [](const GFactor& a, const GFactor& b) { return poly_less(a.factor, b.factor); });
    return out;
}

// Roots in Q(i) with multiplicities (from the linear factors), sorted.
inline std::vector<std::pair<GaussRat, int>> roots_in_gauss(const UniPoly& f) {
    std::vector<std::pair<GaussRat, int>> out;
    for (const auto& g : factor_univariate(f).factors)
        if (g.factor.deg() == 1) out.push_back({-g.factor[0], g.mult});
    return out;
}

} // namespace speccurve

#endif
