#ifndef SPECCURVE_NEWTON_PUISEUX_HPP
#define SPECCURVE_NEWTON_PUISEUX_HPP

// Newton-Puiseux expansion of the branches of a chart curve Q(z, w) = 0 at
// z = 0, over Q(i). The classical polygon recursion, with two departures
// forced by exact arithmetic:
//   - a polygon root outside Q(i) stops the refinement of those branches;
//     they are kept as one cluster carrying the irreducible polynomial of the
//     undetermined coefficient (exact data, no floating approximation);
//   - conjugate fractional-exponent series that are individually
//     representable over Q(i) are merged into one branch with the cycle
//     length recorded as its ramification index.
//
// Every returned Branch represents `count` of the deg_w(Q) series roots;
// the counts always sum to deg_w(Q).

#include <algorithm>
#include <deque>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/chart.hpp"
#include "speccurve/factor.hpp"
#include "speccurve/series.hpp"

namespace speccurve {

struct Branch {
    int point_index = -1;
    PuiseuxSeries expansion;  // eigenvalue expansion (exponents shifted by -(m+1))
    int ramification = 1;     // cycle length of the stored series' orbit
    int count = 1;            // number of series roots represented
    bool hit_truncation = false;  // stopped at the requested truncation while >1 root remained
    // First coefficient level outside Q(i): (eigenvalue exponent, minimal
    // polynomial product of the undetermined coefficient). Empty when the
    // stored expansion is a faithful representative.
    std::optional<std::pair<Rat, UniPoly>> tail;

    bool separated() const { return count == 1 || (ramification == count && !hit_truncation && !tail); }
};

namespace detail_np {

struct WorkItem {
    BiPoly F;            // polynomial in (zs, w) with zs = z^{1/scale}
    Int scale;           // current ramification of the working variable
    Rat offset;          // original root = prefix(z) + z^offset * (root of F)
    std::vector<PuiseuxSeries::Term> prefix;
    bool restrict_positive;  // recursed items follow roots with w -> 0
};

// Lower convex hull of the support points (j, val_z wcoeff_j); returns the
// hull vertex list (j ascending).
inline std::vector<std::pair<int, int>> newton_hull(const BiPoly& F) {
    std::vector<std::pair<int, int>> pts;
    for (int j = 0; j <= F.deg_w(); ++j) {
        const UniPoly& c = F.wcoeff(static_cast<std::size_t>(j));
        if (c.is_zero()) continue;
        pts.push_back({j, c.valuation_at_zero()});
    }
    std::vector<std::pair<int, int>> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            auto [x1, y1] = hull[hull.size() - 2];
            auto [x2, y2] = hull[hull.size() - 1];
            // keep lower hull: remove if p is below or on the segment direction
            long long cross = static_cast<long long>(x2 - x1) * (p.second - y1) -
                              static_cast<long long>(p.first - x1) * (y2 - y1);
            if (cross <= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    return hull;
}

// Edge polynomial phi(T) for the hull edge (j1,v1)-(j2,v2).
inline UniPoly edge_poly(const BiPoly& F, int j1, int v1, int j2, int v2) {
    std::vector<GaussRat> c(static_cast<std::size_t>(j2 - j1) + 1);
    Rat slope(v2 - v1, j2 - j1);
    slope.canonicalize();
    for (int j = j1; j <= j2; ++j) {
        Rat line = Rat(v1) + slope * Rat(j - j1);
        if (line.get_den() != 1) continue;
        long k = line.get_num().get_si();
        if (k < 0) continue;
        c[static_cast<std::size_t>(j - j1)] =
            F.wcoeff(static_cast<std::size_t>(j))[static_cast<std::size_t>(k)];
    }
    return UniPoly(std::move(c));
}

// w := z^p * (c + w'), with a global z-power shift keeping it polynomial.
inline BiPoly subst_scaled_root(const BiPoly& F, const GaussRat& c, long p) {
    long m0 = p >= 0 ? 0 : -p * F.deg_w();
    BiPoly result;
    BiPoly repl = BiPoly::constant(c) + BiPoly::var_w();
    for (int j = F.deg_w(); j >= 0; --j) {
        BiPoly term(F.wcoeff(static_cast<std::size_t>(j))
                        .shifted_up(static_cast<std::size_t>(p * j + m0)));
        result = result * repl + term;
    }
    return result;
}

} // namespace detail_np

// All branches of Q(z,w) = 0 over z = 0 to the requested truncation order
// (exponents of the chart variable w as series in z; truncation in the same
// chart exponents). Counts sum to deg_w(Q).
inline std::vector<Branch> newton_puiseux_chart(const BiPoly& Q, const Rat& trunc_chart) {
    using detail_np::WorkItem;
    if (Q.is_zero() || Q.deg_w() < 1) throw value_error("newton_puiseux: need positive w-degree");

    std::vector<Branch> out;
    std::deque<WorkItem> work;
    work.push_back({Q, Int(1), Rat(0), {}, false});

    while (!work.empty()) {
        WorkItem it = std::move(work.front());
        work.pop_front();
        BiPoly F = std::move(it.F);

        // exact termination: w' = 0 is a root
        if (F.wcoeff(0).is_zero()) {
            int v = 0;
            while (F.wcoeff(static_cast<std::size_t>(v)).is_zero()) ++v;
            Branch b;
            b.expansion = PuiseuxSeries(it.prefix, std::nullopt);
            b.count = v;
            out.push_back(std::move(b));
            F = BiPoly(std::vector<UniPoly>(F.wcoeffs().begin() + v, F.wcoeffs().end()));
            if (F.deg_w() == 0) continue;
        }

        auto hull = detail_np::newton_hull(F);
        for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
            auto [j1, v1] = hull[e];
            auto [j2, v2] = hull[e + 1];
            Rat mu_scaled(v1 - v2, j2 - j1);  // w ~ c * zs^mu_scaled on this edge
            mu_scaled.canonicalize();
            if (it.restrict_positive && sgn(mu_scaled) <= 0) continue;
            Rat mu_abs = it.offset + mu_scaled / Rat(it.scale);
            int width = j2 - j1;

            if (mu_abs >= trunc_chart) {
                Branch b;
                b.expansion = PuiseuxSeries(it.prefix, trunc_chart);
                b.count = width;
                b.hit_truncation = width > 1;
                out.push_back(std::move(b));
                continue;
            }

            UniPoly phi = detail_np::edge_poly(F, j1, v1, j2, v2);
            auto fac = factor_univariate(phi);
            long q = static_cast<long>(mu_scaled.get_den().get_si());
            for (const auto& [psi, mult] : fac.factors) {
                if (psi.deg() == 1) {
                    GaussRat c = -psi[0];
                    WorkItem next;
                    next.scale = it.scale * q;
                    next.offset = mu_abs;
                    next.prefix = it.prefix;
                    next.prefix.push_back({mu_abs, c});
                    Rat mu_int = mu_scaled * Rat(q);
                    long p = mu_int.get_num().get_si();
                    BiPoly Fq = q > 1 ? F.scale_z(static_cast<std::size_t>(q)) : F;
                    BiPoly Fs = detail_np::subst_scaled_root(Fq, c, p);
                    Fs = Fs.divided_by_z_pow(Fs.val_z());
                    next.F = std::move(Fs);
                    next.restrict_positive = true;
                    work.push_back(std::move(next));
                } else {
                    Branch b;
                    b.expansion = PuiseuxSeries(it.prefix, mu_abs);
                    b.count = mult * psi.deg();
                    b.tail = {{mu_abs, psi}};
                    out.push_back(std::move(b));
                }
            }
        }
    }

    // merge Q(i)-rational Galois orbits (conjugates under z^{1/N} -> w z^{1/N})
    std::vector<Branch> merged;
    std::vector<bool> used(out.size(), false);
    for (std::size_t a = 0; a < out.size(); ++a) {
        if (used[a]) continue;
        Branch b = out[a];
        Int N = b.expansion.ramification();
        if (N > 1 && !b.tail && !b.hit_truncation && b.count == 1) {
            std::vector<GaussRat> twists;
            if (N % 2 == 0) twists.push_back(GaussRat(-1));
            if (N % 4 == 0) {
                twists.push_back(GaussRat::I());
                twists.push_back(-GaussRat::I());
            }
            for (const auto& omega : twists) {
                PuiseuxSeries tw = b.expansion.galois_twist(omega);
                for (std::size_t c = a + 1; c < out.size(); ++c) {
                    if (used[c] || out[c].tail || out[c].hit_truncation || out[c].count != 1)
                        continue;
                    if (out[c].expansion == tw) {
                        used[c] = true;
                        b.count += out[c].count;
                        break;
                    }
                }
            }
        }
        b.ramification = static_cast<int>(N.get_si());
        merged.push_back(std::move(b));
    }

    // deterministic ordering
    std::sort(merged.begin(), merged.end(), [](const Branch& x, const Branch& y) {
        int c = cmp(x.expansion, y.expansion);
        if (c != 0) return c < 0;
        return x.count < y.count;
    });

    int total = 0;
    for (const auto& b : merged) total += b.count;
    if (total != Q.deg_w())
        throw consistency_error("newton_puiseux: branch count " + std::to_string(total) +
                                " does not match degree " + std::to_string(Q.deg_w()));
    return merged;
}

// Branches of the eigenvalue zeta = zeta_i z^{-(m+1)} at the chart's point,
// truncated at the requested eigenvalue order. Throws precision_error when
// distinct branches remain unseparated at that order.
inline std::vector<Branch> newton_puiseux(const ChartCurve& chart, const Rat& truncation,
                                          bool allow_unseparated = false) {
    // an exact w^v factor (v-fold zero branch) is fine; the rest must be squarefree
    int v = 0;
    while (v <= chart.Q.deg_w() && chart.Q.wcoeff(static_cast<std::size_t>(v)).is_zero()) ++v;
    BiPoly stripped(std::vector<UniPoly>(chart.Q.wcoeffs().begin() + v, chart.Q.wcoeffs().end()));
    if (stripped.deg_w() >= 1 && !is_squarefree_w(stripped))
        throw value_error("newton_puiseux: curve is not reduced");
    Rat shift(chart.order_m + 1);
    std::vector<Branch> raw = newton_puiseux_chart(chart.Q, truncation + shift);
    for (auto& b : raw) {
        b.point_index = chart.point_index;
        b.expansion = b.expansion.shifted(-shift);
        if (b.tail) b.tail->first -= shift;
    }
    if (!allow_unseparated) {
        for (const auto& b : raw)
            if (b.hit_truncation)
                throw precision_error("branches not separated at truncation order z^" +
                                      rat_to_string(truncation) + " (point index " +
                                      std::to_string(chart.point_index) + ")");
    }
    return raw;
}

} // namespace speccurve

#endif
