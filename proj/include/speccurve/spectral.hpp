#ifndef SPECCURVE_SPECTRAL_HPP
#define SPECCURVE_SPECTRAL_HPP

// Spectral curve construction and analysis: characteristic polynomial with
// section bounds, affine chart forms, reducedness, irreducibility (exact over
// Q(i)(z), plus a sound sufficient certificate of absolute irreducibility),
// the singular locus, and the companion-matrix quasi-inverse.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/bivar_factor.hpp"
#include "speccurve/chart.hpp"
#include "speccurve/higgs.hpp"
#include "speccurve/newton_puiseux.hpp"
#include "speccurve/numberfield.hpp"

namespace speccurve {

struct DivisorPoint {
    GaussRat location;
    int order = 0;  // m_i; the divisor D carries p_i with coefficient m_i + 1
};

// P(z, zeta) = zeta^r + a_1 zeta^{r-1} + ... + a_r with a_k a section of L^k,
// L = K(D) on the projective line: a_k has pole order <= k(m_i+1) at p_i and
// decays as O(z^{-2k}) at infinity.
struct SpectralData {
    int rank = 0;
    std::vector<RatFunc> a;  // a_1 .. a_r
    std::vector<DivisorPoint> points;

    int deg_D() const {
        int d = 0;
        for (const auto& pt : points) d += pt.order + 1;
        return d;
    }
    int deg_L() const { return deg_D() - 2; }

    friend bool operator==(const SpectralData& x, const SpectralData& y) {
        return x.rank == y.rank && x.a == y.a;
    }
};

inline ValidationReport validate_spectral(const SpectralData& S) {
    ValidationReport rep;
    rep.add("rank", "global", S.rank >= 2, S.rank >= 2 ? "" : "rank must be at least 2");
    rep.add("coefficient-count", "global", static_cast<int>(S.a.size()) == S.rank, "");
    for (std::size_t i = 0; i < S.points.size(); ++i)
        for (std::size_t j = i + 1; j < S.points.size(); ++j)
            if (S.points[i].location == S.points[j].location)
                rep.add("distinct-locations", "global", false, "divisor points coincide");
    UniPoly master = UniPoly::one();
    for (const auto& pt : S.points)
        master = master *
                 UniPoly::linear_root(pt.location).pow(static_cast<unsigned>(S.rank * (pt.order + 1)));
    for (int k = 1; k <= static_cast<int>(S.a.size()); ++k) {
        const RatFunc& ak = S.a[static_cast<std::size_t>(k - 1)];
        if (ak.is_zero()) continue;
        bool ok = true;
        std::string detail;
        if (!divmod(master, ak.den()).second.is_zero()) {
            ok = false;
            detail = "pole outside the declared divisor";
        }
        if (ok && ak.valuation_at_infinity() < 2 * k) {
            ok = false;
            detail = "not O(z^-" + std::to_string(2 * k) + ") at infinity";
        }
        if (ok)
            for (const auto& pt : S.points)
                if (ak.valuation_at(pt.location) < -k * (pt.order + 1)) {
                    ok = false;
                    detail = "pole order exceeds k(m+1) at z=" + gauss_to_string(pt.location);
                }
        rep.add("section-bound-a" + std::to_string(k), "global", ok, detail);
    }
    return rep;
}

// det(zeta I - M) with the divisor data taken from the declared points.
inline SpectralData char_poly(const HiggsField& H) {
    SpectralData S;
    S.rank = H.rank;
    S.a = char_poly_higgs(H);
    for (const auto& pt : H.points) S.points.push_back({pt.location, pt.order});
    ValidationReport rep = validate_spectral(S);
    if (!rep.ok)
        throw consistency_error("char_poly: section bounds violated (invalid Higgs field): " +
                                rep.first_failure());
    return S;
}

// Local chart at declared point i: substitute zeta = zeta_i z_i^{-(m_i+1)},
// z = p_i + z_i, and clear denominators minimally to a primitive polynomial.
inline ChartCurve to_chart(const SpectralData& S, std::size_t point_index) {
    if (point_index >= S.points.size()) throw value_error("to_chart: bad point index");
    const DivisorPoint& pt = S.points[point_index];
    int m = pt.order;
    RatFunc zpow(UniPoly::monomial(GaussRat(1), static_cast<std::size_t>(m) + 1));
    std::vector<RatFunc> coeffs(static_cast<std::size_t>(S.rank) + 1);
    coeffs[static_cast<std::size_t>(S.rank)] = RatFunc(1);
    RatFunc scale(1);
    for (int k = 1; k <= S.rank; ++k) {
        scale *= zpow;
        const RatFunc& ak = S.a[static_cast<std::size_t>(k - 1)];
        if (ak.is_zero()) continue;
        RatFunc shifted(ak.num().shift_arg(pt.location), ak.den().shift_arg(pt.location));
        coeffs[static_cast<std::size_t>(S.rank - k)] = shifted * scale;
    }
    ChartCurve chart;
    chart.Q = BiPoly::from_ratfunc_coeffs(coeffs);
    chart.point_index = static_cast<int>(point_index);
    chart.order_m = m;
    chart.chart_id = "p" + std::to_string(point_index);
    chart.provenance = "spectral curve in the frame zeta = zeta_i z_i^-(m+1) at z=" +
                       gauss_to_string(pt.location);
    return chart;
}

// The chart at infinity: z = 1/v and zeta = eta v^2 (eigenvalues decay as
// O(z^{-2}), so eta is the finite coordinate; a_k = O(z^{-2k}) makes the
// chart coefficients a_k(1/v) v^{-2k} regular at v = 0).
inline BiPoly infinity_chart(const SpectralData& S) {
    std::vector<RatFunc> coeffs(static_cast<std::size_t>(S.rank) + 1);
    coeffs[static_cast<std::size_t>(S.rank)] = RatFunc(1);
    for (int k = 1; k <= S.rank; ++k) {
        const RatFunc& ak = S.a[static_cast<std::size_t>(k - 1)];
        if (ak.is_zero()) continue;
        int N = std::max(ak.num().deg(), ak.den().deg());
        auto rev = [N](const UniPoly& p) {
            std::vector<GaussRat> v(static_cast<std::size_t>(N) + 1);
            for (int t = 0; t <= p.deg(); ++t)
                v[static_cast<std::size_t>(N - t)] = p[static_cast<std::size_t>(t)];
            return UniPoly(std::move(v));
        };
        RatFunc at_inv(rev(ak.num()), rev(ak.den()));
        RatFunc vpow(UniPoly::one(), UniPoly::monomial(GaussRat(1), static_cast<std::size_t>(2 * k)));
        coeffs[static_cast<std::size_t>(S.rank - k)] = at_inv * vpow;
    }
    return BiPoly::from_ratfunc_coeffs(coeffs);
}

// Squarefree as a polynomial in zeta over Q(i)(z): squarefreeness of the
// primitive cleared form (forward declaration of the clearing below).
inline BiPoly cleared_global_form(const SpectralData& S);

inline bool is_reduced(const SpectralData& S) {
    return is_squarefree_w(cleared_global_form(S));
}

enum class BaseIrreducibility { IrreducibleOverBase, ReducibleWithFactors };
enum class AbsoluteVerdict { Certified, Undetermined, NotApplicable };

struct IrreducibilityReport {
    BaseIrreducibility base = BaseIrreducibility::IrreducibleOverBase;
    std::vector<BiPoly> factors;  // primitive cleared factors (global form)
    AbsoluteVerdict absolute = AbsoluteVerdict::Undetermined;
    std::string witness;
    int max_ramification = 1;
};

// Primitive cleared global form of P in (z, zeta).
inline BiPoly cleared_global_form(const SpectralData& S) {
    std::vector<RatFunc> coeffs(static_cast<std::size_t>(S.rank) + 1);
    coeffs[static_cast<std::size_t>(S.rank)] = RatFunc(1);
    for (int k = 1; k <= S.rank; ++k)
        coeffs[static_cast<std::size_t>(S.rank - k)] = S.a[static_cast<std::size_t>(k - 1)];
    return BiPoly::from_ratfunc_coeffs(coeffs);
}

namespace detail_spectral {

inline int smallest_prime_factor(int n) {
    for (int d = 2; d * d <= n; ++d)
        if (n % d == 0) return d;
    return n;
}

inline int max_branch_ramification(const BiPoly& Q) {
    int e = 1;
    for (const auto& b : newton_puiseux_chart(Q, Rat(1))) {
        e = std::max(e, b.ramification);
        // a cluster whose undetermined coefficient sits at a fractional level
        // is ramified with cycle length divisible by that denominator
        if (b.tail) e = std::max(e, static_cast<int>(b.tail->first.get_den().get_si()));
    }
    return e;
}

} // namespace detail_spectral

// Exact factorization over Q(i)(z) plus a sound sufficient certificate of
// absolute irreducibility: a branch of ramification index e over some point
// rules out any factorization into s conjugate factors of degree r/s < e.
// The scan covers the declared points, the Q(i)-rational roots of the
// discriminant, and the point at infinity. No false certificates: when the
// criterion does not apply the verdict stays Undetermined.
inline IrreducibilityReport irreducibility(const SpectralData& S) {
    if (!is_reduced(S)) throw value_error("irreducibility: spectral curve is not reduced");
    IrreducibilityReport rep;
    BiPoly F = cleared_global_form(S);
    rep.factors = factor_bivariate_squarefree(F);
    if (rep.factors.size() > 1) {
        rep.base = BaseIrreducibility::ReducibleWithFactors;
        rep.absolute = AbsoluteVerdict::NotApplicable;
        rep.witness = "splits over Q(i)(z) into " + std::to_string(rep.factors.size()) + " factors";
        return rep;
    }
    rep.base = BaseIrreducibility::IrreducibleOverBase;

    int r = S.rank;
    int threshold = r / detail_spectral::smallest_prime_factor(r);
    int e_max = 1;
    std::string where;
    for (std::size_t i = 0; i < S.points.size() && e_max <= threshold; ++i) {
        int e = detail_spectral::max_branch_ramification(to_chart(S, i).Q);
        if (e > e_max) {
            e_max = e;
            where = "z=" + gauss_to_string(S.points[i].location);
        }
    }
    if (e_max <= threshold) {
        int e = detail_spectral::max_branch_ramification(infinity_chart(S));
        if (e > e_max) {
            e_max = e;
            where = "z=infinity";
        }
    }
    if (e_max <= threshold) {
        BiPoly Fw = F.derivative_w();
        if (Fw.deg_w() >= 1) {
            UniPoly disc = resultant_w(F, Fw);
            for (const auto& [z0, mult] : roots_in_gauss(disc)) {
                (void)mult;
                bool declared = false;
                for (const auto& pt : S.points)
                    if (pt.location == z0) declared = true;
                if (declared) continue;
                int e = detail_spectral::max_branch_ramification(F.shift_z(z0));
                if (e > e_max) {
                    e_max = e;
                    where = "z=" + gauss_to_string(z0);
                }
                if (e_max > threshold) break;
            }
        }
    }
    rep.max_ramification = e_max;
    if (e_max > threshold) {
        rep.absolute = AbsoluteVerdict::Certified;
        rep.witness = "branch of ramification index " + std::to_string(e_max) + " at " + where +
                      " exceeds r/p = " + std::to_string(threshold) +
                      " (p the smallest prime factor of r), so no splitting into conjugate "
                      "factors exists";
    } else {
        rep.absolute = AbsoluteVerdict::Undetermined;
        rep.witness = "no ramification witness found (max index " + std::to_string(e_max) +
                      "); absolute irreducibility undecided";
    }
    return rep;
}

// ------------------------------------------------------- singular locus ----

struct SingularSolution {
    GaussRat z0, w0;
};

// Solutions with coordinates outside Q(i), presented as a triangular system
// h(z) = 0, g(z, w) = 0 with h irreducible over Q(i) and g reduced mod h.
struct TriangularSystem {
    UniPoly h;
    BiPoly g;
};

struct SingularLocus {
    std::vector<SingularSolution> exact;
    std::vector<TriangularSystem> triangular;
    bool empty() const { return exact.empty() && triangular.empty(); }
};

namespace detail_spectral {

// Res_w with graceful handling of w-constant arguments.
inline UniPoly resultant_any(const BiPoly& f, const BiPoly& g) {
    if (f.is_zero() || g.is_zero()) throw value_error("resultant of zero polynomial");
    if (g.deg_w() == 0) return g.wcoeff(0).pow(static_cast<unsigned>(f.deg_w()));
    if (f.deg_w() == 0) return f.wcoeff(0).pow(static_cast<unsigned>(g.deg_w()));
    return resultant_w(f, g);
}

} // namespace detail_spectral

// Common solutions of Q = dQ/dz = dQ/dw = 0 in the chart, by resultant
// elimination. Complete: an empty result certifies smoothness in the chart.
inline SingularLocus singular_points(const ChartCurve& chart) {
    const BiPoly& Q = chart.Q;
    if (Q.is_zero() || Q.deg_w() < 1) throw value_error("singular_points: need positive w-degree");
    if (!is_squarefree_w(Q)) throw value_error("singular_points: non-reduced input, reduce first");
    SingularLocus out;
    BiPoly Qw = Q.derivative_w();
    BiPoly Qz = Q.derivative_z();
    if (Qz.is_zero()) {
        // Q is a squarefree polynomial of w alone: fibers are constant and
        // smooth, no singular points
        return out;
    }
    UniPoly R1 = detail_spectral::resultant_any(Q, Qw);
    UniPoly R2 = detail_spectral::resultant_any(Q, Qz);
    UniPoly h = gcd(R1, R2);
    if (h.deg() == 0) return out;

    for (const auto& [hj, mult] : factor_univariate(h).factors) {
        (void)mult;
        if (hj.deg() == 1) {
            GaussRat z0 = -hj[0];
            UniPoly q = Q.eval_z(z0), qw = Qw.eval_z(z0), qz = Qz.eval_z(z0);
            UniPoly g = gcd(gcd(q, qw), qz);
            if (g.deg() == 0) continue;
            for (const auto& [psi, pm] : factor_univariate(g).factors) {
                (void)pm;
                if (psi.deg() == 1) {
                    out.exact.push_back({z0, -psi[0]});
                } else {
                    std::vector<UniPoly> gv(psi.coeffs().size());
                    for (std::size_t t = 0; t < psi.coeffs().size(); ++t)
                        gv[t] = UniPoly::constant(psi.coeffs()[t]);
                    out.triangular.push_back({UniPoly::linear_root(z0), BiPoly(std::move(gv))});
                }
            }
        } else {
            NumberField fld{hj};
            NFPoly q = nf_from_bipoly(&fld, Q);
            NFPoly qw = nf_from_bipoly(&fld, Qw);
            NFPoly qz = nf_from_bipoly(&fld, Qz);
            NFPoly g = nf_gcd(nf_gcd(q, qw), qz);
            if (nf_deg(g) >= 1) {
                std::vector<UniPoly> gv(g.size());
                for (std::size_t t = 0; t < g.size(); ++t) gv[t] = g[t].rep();
                out.triangular.push_back({hj, BiPoly(std::move(gv))});
            }
        }
    }
    std::sort(out.exact.begin(), out.exact.end(), [](const SingularSolution& a, const SingularSolution& b) {
        int c = cmp(a.z0, b.z0);
        if (c != 0) return c < 0;
        return cmp(a.w0, b.w0) < 0;
    });
    return out;
}

// ------------------------------------------------- companion quasi-inverse --

// Multiplication by zeta on O_Sigma pushed forward in the basis
// 1, zeta, ..., zeta^{r-1}: the companion matrix of P (last column -a_k).
// The result carries the divisor data but no normal-form metadata; its polar
// behaviour is recovered through the Puiseux layer, not from matrix entries.
inline HiggsField companion_higgs(const SpectralData& S) {
    ValidationReport rep = validate_spectral(S);
    if (!rep.ok) throw value_error("companion_higgs: invalid spectral data: " + rep.first_failure());
    std::size_t r = static_cast<std::size_t>(S.rank);
    RMat M(r, r);
    for (std::size_t j = 0; j + 1 < r; ++j) M(j + 1, j) = RatFunc(1);
    for (std::size_t j = 0; j < r; ++j) M(j, r - 1) = -S.a[r - 1 - j];
    HiggsField H;
    H.rank = S.rank;
    H.matrix = std::move(M);
    for (const auto& pt : S.points) H.points.push_back({pt.location, pt.order, std::nullopt});
    return H;
}

} // namespace speccurve

#endif
