#ifndef SPECCURVE_HIGGS_HPP
#define SPECCURVE_HIGGS_HPP

// Irregular Higgs fields on the projective line with semi-simple irregular
// parts: data model, normal-form validator, builder from polar data, and
// parabolic flag compatibility.
//
// Conventions: the field is stored as M = theta(d/dz), an r x r matrix of
// rational functions. At a declared point p with order m, the local normal
// form (after conjugating by the frame) is
//   sum_{k=1..m} diag(zeta^k_1..zeta^k_r) (z-p)^{-(k+1)} + Lambda (z-p)^{-1}
//   + holomorphic,
// and the jets row j holds (zeta^m_j, ..., zeta^1_j). Entries decay as
// O(z^{-2}) at infinity (trivial bundle, theta regular at infinity).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/bipoly.hpp"
#include "speccurve/factor.hpp"
#include "speccurve/linalg.hpp"

namespace speccurve {

struct NormalForm {
    QMat frame;                                // r x r invertible (default identity)
    std::vector<std::vector<GaussRat>> jets;   // r rows, m entries each: (zeta^m .. zeta^1)
    QMat residue;                              // r x r, block-compatible with the jet partition
};

struct SingularPoint {
    GaussRat location;
    int order = 0;  // m >= 0; the pole order of theta there is at most m+1
    std::optional<NormalForm> normal_form;
};

struct HiggsField {
    int rank = 0;
    RMat matrix;  // theta(d/dz)
    std::vector<SingularPoint> points;
};

struct ValidationCheck {
    std::string name;
    std::string location;  // point or "global"
    bool ok = true;
    std::string detail;
};

struct ValidationReport {
    bool ok = true;
    std::vector<ValidationCheck> checks;

    void add(std::string name, std::string location, bool pass, std::string detail = "") {
        ok = ok && pass;
        checks.push_back({std::move(name), std::move(location), pass, std::move(detail)});
    }
    std::string first_failure() const {
        for (const auto& c : checks)
            if (!c.ok) return c.name + " at " + c.location + (c.detail.empty() ? "" : ": " + c.detail);
        return "";
    }
};

// ------------------------------------------------------------- helpers -----

inline RMat lift_to_ratfunc(const QMat& m) {
    RMat r(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = RatFunc(m(i, j));
    return r;
}

// Laurent coefficient matrix of M at p, at the given order.
inline QMat laurent_coefficient_matrix(const RMat& M, const GaussRat& p, int order) {
    QMat c(M.rows(), M.cols());
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) {
            if (M(i, j).is_zero()) continue;
            c(i, j) = M(i, j).laurent_at(p, order, order)[0];
        }
    return c;
}

// Partition of basis indices {0..r-1} by equal jet tuples, groups ordered by
// jet tuple (lexicographic), indices ascending inside a group.
inline std::vector<std::vector<int>> jet_partition(const NormalForm& nf) {
    auto jet_cmp = [](const std::vector<GaussRat>& a, const std::vector<GaussRat>& b) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            int c = cmp(a[k], b[k]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::map<std::vector<GaussRat>, std::vector<int>, decltype(jet_cmp)> groups(jet_cmp);
    for (std::size_t j = 0; j < nf.jets.size(); ++j) groups[nf.jets[j]].push_back(static_cast<int>(j));
    std::vector<std::vector<int>> out;
    for (auto& [jet, idx] : groups) out.push_back(idx);
    return out;
}

// True if C is diagonalizable over Q(i) (all eigenvalues in Q(i), geometric
// multiplicities full).
inline bool is_diagonalizable_over_gauss(const QMat& C) {
    auto coeffs = char_poly_coeffs(C);
    std::vector<GaussRat> pc(coeffs.size() + 1);
    pc[coeffs.size()] = GaussRat(1);
    for (std::size_t k = 0; k < coeffs.size(); ++k) pc[coeffs.size() - 1 - k] = coeffs[k];
    UniPoly chi(std::move(pc));
    auto fac = factor_univariate(chi);
    for (const auto& [g, mult] : fac.factors) {
        if (g.deg() != 1) return false;
        GaussRat lambda = -g[0];
        QMat shifted = C;
        for (std::size_t d = 0; d < C.rows(); ++d) shifted(d, d) -= lambda;
        std::size_t geom = C.rows() - shifted.rank();
        if (static_cast<int>(geom) != mult) return false;
    }
    return true;
}

// --------------------------------------------------------- validation ------

inline std::vector<RatFunc> char_poly_higgs(const HiggsField& H);  // defined below

inline ValidationReport validate_higgs(const HiggsField& H) {
    ValidationReport rep;
    int r = H.rank;
    rep.add("rank", "global", r >= 2, r >= 2 ? "" : "rank must be at least 2");
    if (H.matrix.rows() != static_cast<std::size_t>(r) ||
        H.matrix.cols() != static_cast<std::size_t>(r)) {
        rep.add("matrix-shape", "global", false, "matrix is not r x r");
        return rep;
    }
    for (std::size_t a = 0; a < H.points.size(); ++a)
        for (std::size_t b = a + 1; b < H.points.size(); ++b)
            if (H.points[a].location == H.points[b].location)
                rep.add("distinct-locations", "global", false,
                        "points " + std::to_string(a) + " and " + std::to_string(b) + " coincide");

    // pole locations: every entry denominator divides prod (z-p_i)^{r(m_i+1)}
    UniPoly master = UniPoly::one();
    for (const auto& pt : H.points)
        master = master * UniPoly::linear_root(pt.location).pow(
                              static_cast<unsigned>(r * (pt.order + 1)));
    bool locations_ok = true;
    std::string loc_detail;
    for (std::size_t i = 0; i < H.matrix.rows() && locations_ok; ++i)
        for (std::size_t j = 0; j < H.matrix.cols() && locations_ok; ++j) {
            const RatFunc& f = H.matrix(i, j);
            if (f.is_zero()) continue;
            if (!divmod(master, f.den()).second.is_zero()) {
                locations_ok = false;
                loc_detail = "entry (" + std::to_string(i) + "," + std::to_string(j) +
                             ") has a pole outside the declared divisor";
            }
        }
    rep.add("pole-locations", "global", locations_ok, loc_detail);

    // O(z^{-2}) decay at infinity, entrywise
    bool decay_ok = true;
    std::string decay_detail;
    for (std::size_t i = 0; i < H.matrix.rows() && decay_ok; ++i)
        for (std::size_t j = 0; j < H.matrix.cols() && decay_ok; ++j) {
            const RatFunc& f = H.matrix(i, j);
            if (f.is_zero()) continue;
            if (f.valuation_at_infinity() < 2) {
                decay_ok = false;
                decay_detail = "entry (" + std::to_string(i) + "," + std::to_string(j) +
                               ") is not O(z^-2) at infinity";
            }
        }
    rep.add("infinity-decay", "global", decay_ok, decay_detail);

    // per-point normal form checks
    for (std::size_t pi = 0; pi < H.points.size(); ++pi) {
        const auto& pt = H.points[pi];
        std::string at = "point " + std::to_string(pi) + " (z=" + gauss_to_string(pt.location) + ")";
        if (!pt.normal_form) {
            // no declared frame data; pole order is constrained only through
            // the characteristic polynomial section bounds below
            continue;
        }
        const NormalForm& nf = pt.normal_form.value();
        if (nf.frame.rows() != static_cast<std::size_t>(r) || nf.jets.size() != static_cast<std::size_t>(r) ||
            nf.residue.rows() != static_cast<std::size_t>(r)) {
            rep.add("normal-form-shape", at, false, "frame/jets/residue dimensions do not match rank");
            continue;
        }
        bool jets_len_ok = true;
        for (const auto& row : nf.jets)
            if (row.size() != static_cast<std::size_t>(pt.order)) jets_len_ok = false;
        if (!jets_len_ok) {
            rep.add("jet-length", at, false, "each jet row must have m entries");
            continue;
        }
        RMat conj;
        try {
            RMat g = lift_to_ratfunc(nf.frame);
            conj = lift_to_ratfunc(nf.frame.inverse()) * H.matrix * g;
        } catch (const value_error&) {
            rep.add("frame-invertible", at, false, "frame matrix is singular");
            continue;
        }
        // polar orders -(k+1), k = m..1: diagonal with the declared jets
        for (int k = pt.order; k >= 1; --k) {
            QMat coeff = laurent_coefficient_matrix(conj, pt.location, -(k + 1));
            bool diag_ok = true, match_ok = true;
            int bad_index = -1;
            for (std::size_t i = 0; i < coeff.rows(); ++i)
                for (std::size_t j = 0; j < coeff.cols(); ++j) {
                    if (i != j && !coeff(i, j).is_zero()) diag_ok = false;
                    if (i == j && coeff(i, j) != nf.jets[i][static_cast<std::size_t>(pt.order - k)]) {
                        match_ok = false;
                        if (bad_index < 0) bad_index = static_cast<int>(i);
                    }
                }
            if (!diag_ok) {
                if (!is_diagonalizable_over_gauss(coeff))
                    rep.add("polar-part", at, false,
                            "semi-simple over Q(i) required (order z^-" + std::to_string(k + 1) +
                                " coefficient is not diagonalizable over Q(i))");
                else
                    rep.add("polar-part", at, false,
                            "order z^-" + std::to_string(k + 1) +
                                " coefficient is not diagonal in the declared frame");
            } else if (!match_ok) {
                rep.add("jet-match", at, false,
                        "jet mismatch at basis index " + std::to_string(bad_index) + " (order z^-" +
                            std::to_string(k + 1) + ")");
            } else {
                rep.add("jet-match-z^-" + std::to_string(k + 1), at, true);
            }
        }
        // residue matches Lambda
        QMat res = laurent_coefficient_matrix(conj, pt.location, -1);
        rep.add("residue-match", at, res == nf.residue,
                res == nf.residue ? "" : "residue differs from declared Lambda");
        // Lambda block structure respects the jet partition
        auto part = jet_partition(nf);
        std::vector<int> block_of(static_cast<std::size_t>(r), -1);
        for (std::size_t b = 0; b < part.size(); ++b)
            for (int idx : part[b]) block_of[static_cast<std::size_t>(idx)] = static_cast<int>(b);
        bool blocks_ok = true;
        for (std::size_t i = 0; i < nf.residue.rows(); ++i)
            for (std::size_t j = 0; j < nf.residue.cols(); ++j)
                if (block_of[i] != block_of[j] && !nf.residue(i, j).is_zero()) blocks_ok = false;
        rep.add("residue-blocks", at, blocks_ok,
                blocks_ok ? "" : "Lambda is not block diagonal with respect to the jet partition");
        // declared pole order bound, entrywise
        bool order_ok = true;
        for (std::size_t i = 0; i < H.matrix.rows() && order_ok; ++i)
            for (std::size_t j = 0; j < H.matrix.cols() && order_ok; ++j) {
                const RatFunc& f = H.matrix(i, j);
                if (f.is_zero()) continue;
                if (f.valuation_at(pt.location) < -(pt.order + 1)) order_ok = false;
            }
        rep.add("pole-order", at, order_ok,
                order_ok ? "" : "entry pole order exceeds m+1 despite declared normal form");
    }

    // residue sum (entrywise) over all declared points is the zero matrix
    if (locations_ok && decay_ok) {
        QMat sum(static_cast<std::size_t>(r), static_cast<std::size_t>(r));
        for (const auto& pt : H.points) sum += laurent_coefficient_matrix(H.matrix, pt.location, -1);
        rep.add("residue-sum", "global", sum.is_zero(),
                sum.is_zero() ? "" : "entrywise residue sum over the declared points is nonzero");
        GaussRat tr;
        for (std::size_t d = 0; d < sum.rows(); ++d) tr += sum(d, d);
        rep.add("residue-trace-sum", "global", tr.is_zero(), "");
    }

    // gauge-invariant section bounds on the characteristic polynomial
    if (locations_ok && decay_ok) {
        std::vector<RatFunc> a = char_poly_higgs(H);
        for (int k = 1; k <= r; ++k) {
            const RatFunc& ak = a[static_cast<std::size_t>(k - 1)];
            if (ak.is_zero()) continue;
            bool ok = ak.valuation_at_infinity() >= 2 * k;
            std::string det;
            if (!ok) det = "a_" + std::to_string(k) + " is not O(z^-" + std::to_string(2 * k) + ") at infinity";
            for (const auto& pt : H.points) {
                if (ak.valuation_at(pt.location) < -k * (pt.order + 1)) {
                    ok = false;
                    det = "a_" + std::to_string(k) + " pole order exceeds k(m+1) at z=" +
                          gauss_to_string(pt.location);
                }
            }
            rep.add("section-bound-a" + std::to_string(k), "global", ok, det);
        }
    }
    return rep;
}

// Characteristic polynomial coefficients a_1..a_r of det(zeta I - M).
//
// Fast route: when every entry denominator splits over the declared points,
// clear to a polynomial matrix N = d M, take the fraction-free determinant of
// (zeta d I - N) over Q(i)[z, zeta], and strip the known linear factors from
// each coefficient. This avoids Euclidean gcds on large rational functions.
// Falls back to Faddeev-LeVerrier otherwise.
inline std::vector<RatFunc> char_poly_higgs(const HiggsField& H) {
    std::size_t r = H.matrix.rows();
    bool fast = r >= 1 && !H.points.empty();
    std::vector<int> expo(H.points.size(), 0);
    for (std::size_t i = 0; i < r && fast; ++i)
        for (std::size_t j = 0; j < r && fast; ++j) {
            const RatFunc& f = H.matrix(i, j);
            if (f.is_zero()) continue;
            int covered = 0;
            for (std::size_t p = 0; p < H.points.size(); ++p) {
                int v = f.den().root_multiplicity(H.points[p].location);
                expo[p] = std::max(expo[p], v);
                covered += v;
            }
            if (covered != f.den().deg()) fast = false;  // pole off the divisor
        }
    if (!fast) return char_poly_coeffs(H.matrix);

    UniPoly d = UniPoly::one();
    for (std::size_t p = 0; p < H.points.size(); ++p)
        d = d * UniPoly::linear_root(H.points[p].location).pow(static_cast<unsigned>(expo[p]));

    std::vector<std::vector<BiPoly>> B(r, std::vector<BiPoly>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            const RatFunc& f = H.matrix(i, j);
            UniPoly N = f.is_zero() ? UniPoly() : f.num() * exact_div(d, f.den());
            std::vector<UniPoly> wc(2);
            wc[0] = -N;
            if (i == j) wc[1] = d;
            B[i][j] = BiPoly(std::move(wc));
        }
    BiPoly P = bipoly_det(std::move(B));
    UniPoly dr = d.pow(static_cast<unsigned>(r));
    if (P.deg_w() != static_cast<int>(r) || P.lc_w() != dr)
        throw consistency_error("fraction-free characteristic polynomial: bad leading term");

    std::vector<RatFunc> a(r);
    for (std::size_t k = 1; k <= r; ++k) {
        UniPoly num = P.wcoeff(r - k);
        if (num.is_zero()) continue;
        UniPoly den = UniPoly::one();
        for (std::size_t p = 0; p < H.points.size(); ++p) {
            int want = static_cast<int>(r) * expo[p];
            if (want == 0) continue;
            UniPoly lin = UniPoly::linear_root(H.points[p].location);
            int have = num.root_multiplicity(H.points[p].location);
            int strip = std::min(have, want);
            for (int t = 0; t < strip; ++t) num = exact_div(num, lin);
            den = den * lin.pow(static_cast<unsigned>(want - strip));
        }
        a[k - 1] = RatFunc::from_reduced(std::move(num), std::move(den));
    }
    return a;
}

// ------------------------------------------------------------- builder -----

// M = sum_i g_i (diag polar jets + Lambda_i/(z-p_i)) g_i^{-1} + tail.
// Requires the conjugated residues to sum to zero entrywise.
inline HiggsField build_higgs(int rank, const std::vector<SingularPoint>& points,
                              const std::optional<RMat>& tail = std::nullopt) {
    if (rank < 2) throw value_error("build_higgs: rank must be at least 2");
    std::size_t r = static_cast<std::size_t>(rank);
    for (const auto& pt : points)
        if (!pt.normal_form) throw value_error("build_higgs: every point needs jets/frame/residue data");
    for (std::size_t a = 0; a < points.size(); ++a)
        for (std::size_t b = a + 1; b < points.size(); ++b)
            if (points[a].location == points[b].location)
                throw value_error("build_higgs: point locations must be distinct");

    QMat residue_sum(r, r);
    for (const auto& pt : points) {
        const auto& nf = pt.normal_form.value();
        residue_sum += nf.frame * nf.residue * nf.frame.inverse();
    }
    if (!residue_sum.is_zero())
        throw value_error(
            "build_higgs: residues do not sum to zero, so this is not a section of "
            "End(E)(x)K(D) on the projective line with trivial bundle; add a balancing "
            "regular point");

    RMat M(r, r);
    for (const auto& pt : points) {
        const auto& nf = pt.normal_form.value();
        RMat local(r, r);
        UniPoly lin = UniPoly::linear_root(pt.location);
        for (std::size_t j = 0; j < r; ++j) {
            RatFunc diag;
            for (int k = 1; k <= pt.order; ++k) {
                const GaussRat& zk = nf.jets[j][static_cast<std::size_t>(pt.order - k)];
                if (zk.is_zero()) continue;
                diag += RatFunc(UniPoly::constant(zk), lin.pow(static_cast<unsigned>(k + 1)));
            }
            local(j, j) = diag;
        }
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                if (nf.residue(i, j).is_zero()) continue;
                local(i, j) += RatFunc(UniPoly::constant(nf.residue(i, j)), lin);
            }
        M += lift_to_ratfunc(nf.frame) * local * lift_to_ratfunc(nf.frame.inverse());
    }
    if (tail) M += tail.value();

    HiggsField H{rank, std::move(M), points};
    ValidationReport rep = validate_higgs(H);
    if (!rep.ok) throw value_error("build_higgs: built field fails validation: " + rep.first_failure());
    return H;
}

// ---------------------------------------- raw commuting polar matrices -----

// Preprocess raw polar data: C[k-1] is the coefficient matrix of
// (z-p)^{-(k+1)} for k = m..1 (C.front() is the deepest order), Lambda_raw the
// residue. Accepts only families simultaneously diagonalizable over Q(i).
inline SingularPoint point_from_polar_matrices(const GaussRat& location,
                                               const std::vector<QMat>& polar,
                                               const QMat& residue_raw) {
    int m = static_cast<int>(polar.size());
    std::size_t r = residue_raw.rows();
    for (const auto& C : polar)
        if (C.rows() != r || C.cols() != r)
            throw value_error("polar coefficient matrices must all be r x r");

    // refine the joint eigenspace decomposition one matrix at a time
    std::vector<QMat> spaces{QMat::identity(r)};
    std::vector<std::vector<GaussRat>> labels{{}};
    for (const auto& C : polar) {
        std::vector<QMat> next_spaces;
        std::vector<std::vector<GaussRat>> next_labels;
        for (std::size_t s = 0; s < spaces.size(); ++s) {
            const QMat& B = spaces[s];
            // restriction S with C B = B S: solve columnwise
            std::size_t d = B.cols();
            QMat CB = C * B;
            QMat aug(r, d + d);
            for (std::size_t i = 0; i < r; ++i) {
                for (std::size_t j = 0; j < d; ++j) aug(i, j) = B(i, j);
                for (std::size_t j = 0; j < d; ++j) aug(i, d + j) = CB(i, j);
            }
            if (QMat(B).rank() != d) throw value_error("internal: basis not independent");
            aug.rref();
            QMat S(d, d);
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) S(i, j) = aug(i, d + j);
            // verify invariance: B * S == C * B
            if (B * S != CB)
                throw value_error("polar coefficient matrices do not commute / do not preserve "
                                  "the joint eigenspaces; semi-simple commuting family required");
            auto coeffs = char_poly_coeffs(S);
            std::vector<GaussRat> pc(coeffs.size() + 1);
            pc[coeffs.size()] = GaussRat(1);
            for (std::size_t k = 0; k < coeffs.size(); ++k) pc[coeffs.size() - 1 - k] = coeffs[k];
            auto fac = factor_univariate(UniPoly(std::move(pc)));
            std::size_t dim_total = 0;
            for (const auto& [g, mult] : fac.factors) {
                if (g.deg() != 1)
                    throw inexact_error("polar part has eigenvalues outside Q(i); "
                                        "semi-simple over Q(i) required");
                GaussRat lambda = -g[0];
                QMat shifted = S;
                for (std::size_t dd = 0; dd < d; ++dd) shifted(dd, dd) -= lambda;
                QMat K = kernel_basis(shifted);
                if (K.cols() == 0 || static_cast<int>(K.cols()) != mult)
                    throw value_error("semi-simple over Q(i) required (polar coefficient is not "
                                      "diagonalizable)");
                dim_total += K.cols();
                QMat newB = B * K;
                next_spaces.push_back(newB);
                auto lab = labels[s];
                lab.push_back(lambda);
                next_labels.push_back(lab);
            }
            if (dim_total != d)
                throw value_error("semi-simple over Q(i) required (defective polar coefficient)");
        }
        spaces = std::move(next_spaces);
        labels = std::move(next_labels);
    }

    // assemble frame and jets
    QMat frame(r, r);
    std::vector<std::vector<GaussRat>> jets(r);
    std::size_t col = 0;
    for (std::size_t s = 0; s < spaces.size(); ++s) {
        for (std::size_t j = 0; j < spaces[s].cols(); ++j, ++col) {
            for (std::size_t i = 0; i < r; ++i) frame(i, col) = spaces[s](i, j);
            jets[col] = labels[s];
            if (m == 0) jets[col].clear();
        }
    }
    QMat residue = frame.inverse() * residue_raw * frame;
    SingularPoint pt{location, m, NormalForm{frame, jets, residue}};
    // block structure check
    auto part = jet_partition(pt.normal_form.value());
    std::vector<int> block_of(r, -1);
    for (std::size_t b = 0; b < part.size(); ++b)
        for (int idx : part[b]) block_of[static_cast<std::size_t>(idx)] = static_cast<int>(b);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (block_of[i] != block_of[j] && !residue(i, j).is_zero())
                throw value_error("residue is not block diagonal with respect to the joint "
                                  "eigenspace decomposition");
    return pt;
}

// ------------------------------------------------------ parabolic flags ----

struct ParabolicFlag {
    int point_index = 0;
    // steps[t] spans F^{t+1} (the proper subspaces, decreasing chain; F^0 is
    // the full fiber and is implicit); columns are vectors in the fiber.
    std::vector<QMat> steps;
    // weights alpha^0 <= ... listed as (alpha^{l-1}, ..., alpha^0), strictly
    // decreasing, inside [0, 1).
    std::vector<Rat> weights;
};

struct FlagBlockSplit {
    std::vector<int> block;           // basis indices of the joint eigenspace
    std::vector<std::size_t> dims;    // induced flag dimensions per step
};

struct FlagSplitting {
    bool compatible = false;
    std::string reason;
    std::vector<FlagBlockSplit> blocks;
};

namespace detail_flag {

// basis matrix of span(A) intersect span(B)
inline QMat intersection_basis(const QMat& A, const QMat& B) {
    std::size_t n = A.rows();
    QMat aug(n, A.cols() + B.cols());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < A.cols(); ++j) aug(i, j) = A(i, j);
        for (std::size_t j = 0; j < B.cols(); ++j) aug(i, A.cols() + j) = B(i, j);
    }
    QMat K = kernel_basis(aug);
    // intersection vectors: A * x for each kernel column's A-part
    QMat X(A.cols(), K.cols());
    for (std::size_t i = 0; i < A.cols(); ++i)
        for (std::size_t j = 0; j < K.cols(); ++j) X(i, j) = K(i, j);
    QMat V = A * X;
    // prune dependent columns
    QMat Vt = V.transpose();
    std::size_t rank = Vt.rref();
    QMat out(n, rank);
    std::size_t col = 0;
    for (std::size_t i = 0; i < rank; ++i, ++col)
        for (std::size_t j = 0; j < n; ++j) out(j, col) = Vt(i, j);
    return out;
}

} // namespace detail_flag

// Checks the Claim-style compatibility: every flag step splits as the direct
// sum of its intersections with the joint eigenspaces of the jet partition,
// and Lambda preserves every step. Returns the induced per-block flags.
inline FlagSplitting check_flag_compatibility(const ParabolicFlag& flag, const SingularPoint& pt,
                                              int rank) {
    FlagSplitting out;
    if (!pt.normal_form) {
        out.reason = "point carries no normal form data";
        return out;
    }
    const NormalForm& nf = pt.normal_form.value();
    std::size_t r = static_cast<std::size_t>(rank);
    if (nf.frame.rows() != r) {
        out.reason = "dimension mismatch";
        throw value_error("check_flag_compatibility: dimension mismatch");
    }
    if (flag.weights.size() != flag.steps.size() + 1) {
        out.reason = "weights must number one more than the proper steps";
        return out;
    }
    Rat prev(1);
    for (const auto& w : flag.weights) {
        if (!(w < prev) || sgn(w) < 0) {
            out.reason = "weights must satisfy 1 > a^{l-1} > ... > a^0 >= 0";
            return out;
        }
        prev = w;
    }

    QMat frame_inv = nf.frame.inverse();
    auto part = jet_partition(nf);

    // flag steps in frame coordinates; verify strict decreasing chain
    std::vector<QMat> steps;
    for (const auto& S : flag.steps) {
        if (S.rows() != r) throw value_error("check_flag_compatibility: dimension mismatch");
        steps.push_back(frame_inv * S);
    }
    std::size_t prev_dim = r;
    for (const auto& S : steps) {
        std::size_t d = S.rank();
        if (d == 0 || d >= prev_dim) {
            out.reason = "flag chain is not strictly decreasing";
            return out;
        }
        prev_dim = d;
    }

    // coordinate-block bases
    std::vector<QMat> block_bases;
    for (const auto& blk : part) {
        QMat B(r, blk.size());
        for (std::size_t j = 0; j < blk.size(); ++j) B(static_cast<std::size_t>(blk[j]), j) = GaussRat(1);
        block_bases.push_back(B);
    }

    out.blocks.resize(part.size());
    for (std::size_t b = 0; b < part.size(); ++b) out.blocks[b].block = part[b];

    for (std::size_t t = 0; t < steps.size(); ++t) {
        std::size_t dim = steps[t].rank();
        std::size_t sum = 0;
        for (std::size_t b = 0; b < part.size(); ++b) {
            QMat inter = detail_flag::intersection_basis(steps[t], block_bases[b]);
            out.blocks[b].dims.push_back(inter.cols());
            sum += inter.cols();
        }
        if (sum != dim) {
            out.reason = "step " + std::to_string(t) +
                         " is not the direct sum of its intersections with the joint eigenspaces";
            out.blocks.clear();
            return out;
        }
        // Lambda-invariance of the step
        QMat LS = nf.residue * steps[t];
        QMat aug(r, steps[t].cols() + LS.cols());
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < steps[t].cols(); ++j) aug(i, j) = steps[t](i, j);
            for (std::size_t j = 0; j < LS.cols(); ++j) aug(i, steps[t].cols() + j) = LS(i, j);
        }
        if (aug.rank() != dim) {
            out.reason = "Lambda does not preserve step " + std::to_string(t);
            out.blocks.clear();
            return out;
        }
    }
    out.compatible = true;
    return out;
}

} // namespace speccurve

#endif
