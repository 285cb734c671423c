#ifndef SPECCURVE_CASIMIR_HPP
#define SPECCURVE_CASIMIR_HPP

// The nested eigenvalue data at each singular point: branches grouped by
// their polar jet prefixes (zeta^m, ..., zeta^1), with multiplicities, and at
// the bottom level the residue eigenvalues stored as one monic polynomial per
// group (exactly representable even when the eigenvalues leave Q(i)).

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/newton_puiseux.hpp"
#include "speccurve/spectral.hpp"

namespace speccurve {

struct CasimirLeaf {
    UniPoly poly;       // monic; roots are the residue eigenvalues of the group
    int d = 0;          // number of branches through the group
    bool ramified = false;   // some branch in the group has a cycle of length > 1
    int degree_mismatch = 0; // deg(poly) - d; nonzero flags an anomaly
};

struct CasimirNode {
    GaussRat label;  // the zeta^{m-level+1} coefficient shared by the group
    int level = 1;   // 1..m
    int d = 0;
    std::vector<CasimirNode> children;
    std::optional<CasimirLeaf> leaf;  // present exactly at level m
};

struct CasimirPointTree {
    int point_index = 0;
    GaussRat location;
    int order_m = 0;
    int d_total = 0;
    std::vector<CasimirNode> roots;       // level-1 nodes (m >= 1)
    std::optional<CasimirLeaf> root_leaf; // the whole-fiber leaf when m = 0
    std::vector<Branch> branches;
};

struct CasimirData {
    std::vector<CasimirPointTree> points;
    int retries = 0;  // adaptive truncation extensions that were needed
};

namespace detail_casimir {

// Jet tuple (zeta^m, ..., zeta^1) of a branch: coefficients at eigenvalue
// exponents -(m+1), ..., -2. Throws inexact_error when that part of the
// expansion is not given by exact Q(i) coefficients at integer exponents.
inline std::vector<GaussRat> branch_jets(const Branch& b, int m) {
    std::vector<GaussRat> jets;
    for (const auto& [e, c] : b.expansion.terms()) {
        (void)c;
        if (e < Rat(-1) && e.get_den() != 1)
            throw inexact_error("branch has a fractional exponent below the residue level; "
                                "the irregular part is not semi-simple in the sense required");
    }
    if (b.tail && b.tail->first < Rat(-1))
        throw inexact_error("jet coefficient outside Q(i) (minimal polynomial " +
                            b.tail->second.str("t") + "); exact blow-up centers require Q(i) jets");
    for (int k = 0; k < m; ++k) jets.push_back(b.expansion.coeff_at(Rat(-(m + 1) + k)));
    return jets;
}

inline UniPoly leaf_poly_by_substitution(const BiPoly& Q, const std::vector<GaussRat>& jets, int m) {
    UniPoly A;
    for (int k = 0; k < m; ++k)
        A += UniPoly::monomial(jets[static_cast<std::size_t>(k)], static_cast<std::size_t>(k));
    BiPoly F = Q.subst_w(A, static_cast<std::size_t>(m));
    int v = F.val_z();
    std::vector<GaussRat> coeffs(static_cast<std::size_t>(F.deg_w()) + 1);
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        coeffs[j] = F.wcoeff(j)[static_cast<std::size_t>(v)];
    UniPoly L(std::move(coeffs));
    if (L.is_zero()) throw consistency_error("leaf polynomial vanished identically");
    return L.monic();
}

struct GroupRec {
    std::vector<GaussRat> jets;
    int d = 0;
    bool ramified = false;
};

} // namespace detail_casimir

// Groups the branches of one chart into the nested eigenvalue tree.
// Branches must be truncated strictly past the z^{-1} term.
inline CasimirPointTree eigenvalue_tree(const std::vector<Branch>& branches, const ChartCurve& chart,
                                        const GaussRat& location) {
    int m = chart.order_m;
    for (const auto& b : branches) {
        // A cluster whose tail polynomial sits at the residue level still
        // determines the tree exactly (that is the lambda data itself); only
        // a plain truncation at or below z^-1 loses information.
        if (!b.expansion.trunc()) continue;
        const Rat& tr = *b.expansion.trunc();
        if (tr < Rat(-1) || (tr == Rat(-1) && !b.tail))
            throw precision_error("eigenvalue_tree: branches must be expanded past the z^-1 term");
    }
    CasimirPointTree tree;
    tree.point_index = chart.point_index;
    tree.location = location;
    tree.order_m = m;
    tree.branches = branches;

    // group by full jet tuple
    auto tuple_less = [](const std::vector<GaussRat>& a, const std::vector<GaussRat>& b) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            int c = cmp(a[k], b[k]);
            if (c != 0) return c < 0;
        }
        return false;
    };
    std::map<std::vector<GaussRat>, detail_casimir::GroupRec, decltype(tuple_less)> groups(tuple_less);
    int total = 0;
    for (const auto& b : branches) {
        auto jets = detail_casimir::branch_jets(b, m);
        auto& g = groups[jets];
        g.jets = jets;
        g.d += b.count;
        g.ramified = g.ramified || b.ramification > 1;
        total += b.count;
    }
    tree.d_total = total;

    auto make_leaf = [&](const detail_casimir::GroupRec& g) {
        CasimirLeaf leaf;
        leaf.poly = detail_casimir::leaf_poly_by_substitution(chart.Q, g.jets, m);
        leaf.d = g.d;
        leaf.ramified = g.ramified;
        leaf.degree_mismatch = leaf.poly.deg() - g.d;
        return leaf;
    };

    if (m == 0) {
        // single group (jets are empty tuples)
        detail_casimir::GroupRec g = groups.begin()->second;
        g.d = total;
        for (const auto& [jets, rec] : groups) {
            (void)jets;
            g.ramified = g.ramified || rec.ramified;
        }
        tree.root_leaf = make_leaf(g);
        return tree;
    }

    // nested construction level by level
    struct Builder {
        static void insert(std::vector<CasimirNode>& nodes, const detail_casimir::GroupRec& g,
                           int level, int m, const CasimirLeaf& leaf) {
            const GaussRat& lab = g.jets[static_cast<std::size_t>(level - 1)];
            CasimirNode* node = nullptr;
            for (auto& n : nodes)
                if (n.label == lab) node = &n;
            if (!node) {
                nodes.push_back(CasimirNode{lab, level, 0, {}, std::nullopt});
                node = &nodes.back();
            }
            node->d += g.d;
            if (level == m)
                node->leaf = leaf;
            else
                insert(node->children, g, level + 1, m, leaf);
        }
        static void sort_nodes(std::vector<CasimirNode>& nodes) {
            std::sort(nodes.begin(), nodes.end(),
                      [](const CasimirNode& a, const CasimirNode& b) { return cmp(a.label, b.label) < 0; });
            for (auto& n : nodes) sort_nodes(n.children);
        }
    };
    for (const auto& [jets, g] : groups) {
        (void)jets;
        Builder::insert(tree.roots, g, 1, m, make_leaf(g));
    }
    Builder::sort_nodes(tree.roots);
    return tree;
}

// ------------------------------------------------------ declared trees -----

// The tree a normal form declares directly: jets give the grouping, residue
// blocks give the leaf polynomials.
inline CasimirPointTree declared_tree(const SingularPoint& pt, int point_index, int rank) {
    if (!pt.normal_form) throw value_error("declared_tree: point has no normal form");
    const NormalForm& nf = pt.normal_form.value();
    CasimirPointTree tree;
    tree.point_index = point_index;
    tree.location = pt.location;
    tree.order_m = pt.order;
    tree.d_total = rank;

    auto blocks = jet_partition(nf);
    auto block_leaf = [&](const std::vector<int>& blk) {
        std::size_t d = blk.size();
        QMat sub(d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                sub(i, j) = nf.residue(static_cast<std::size_t>(blk[i]), static_cast<std::size_t>(blk[j]));
        auto c = char_poly_coeffs(sub);
        std::vector<GaussRat> pc(d + 1);
        pc[d] = GaussRat(1);
        for (std::size_t k = 0; k < d; ++k) pc[d - 1 - k] = c[k];
        CasimirLeaf leaf;
        leaf.poly = UniPoly(std::move(pc));
        leaf.d = static_cast<int>(d);
        return leaf;
    };

    if (pt.order == 0) {
        std::vector<int> all(static_cast<std::size_t>(rank));
        for (int j = 0; j < rank; ++j) all[static_cast<std::size_t>(j)] = j;
        tree.root_leaf = block_leaf(all);
        return tree;
    }
    for (const auto& blk : blocks) {
        const auto& jets = nf.jets[static_cast<std::size_t>(blk[0])];
        CasimirLeaf leaf = block_leaf(blk);
        std::vector<CasimirNode>* level_nodes = &tree.roots;
        for (int level = 1; level <= pt.order; ++level) {
            const GaussRat& lab = jets[static_cast<std::size_t>(level - 1)];
            CasimirNode* node = nullptr;
            for (auto& n : *level_nodes)
                if (n.label == lab) node = &n;
            if (!node) {
                level_nodes->push_back(CasimirNode{lab, level, 0, {}, std::nullopt});
                node = &level_nodes->back();
            }
            node->d += static_cast<int>(blk.size());
            if (level == pt.order)
                node->leaf = leaf;
            else
                level_nodes = &node->children;
        }
    }
    struct S {
        static void sort_nodes(std::vector<CasimirNode>& nodes) {
            std::sort(nodes.begin(), nodes.end(),
                      [](const CasimirNode& a, const CasimirNode& b) { return cmp(a.label, b.label) < 0; });
            for (auto& n : nodes) sort_nodes(n.children);
        }
    };
    S::sort_nodes(tree.roots);
    return tree;
}

namespace detail_casimir {

inline bool leaves_equal(const std::optional<CasimirLeaf>& a, const std::optional<CasimirLeaf>& b) {
    if (a.has_value() != b.has_value()) return false;
    if (!a) return true;
    return a->poly == b->poly && a->d == b->d;
}

inline bool nodes_equal(const std::vector<CasimirNode>& a, const std::vector<CasimirNode>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].label != b[k].label || a[k].d != b[k].d) return false;
        if (!leaves_equal(a[k].leaf, b[k].leaf)) return false;
        if (!nodes_equal(a[k].children, b[k].children)) return false;
    }
    return true;
}

} // namespace detail_casimir

inline bool trees_equal(const CasimirPointTree& a, const CasimirPointTree& b) {
    return a.order_m == b.order_m && a.d_total == b.d_total &&
           detail_casimir::leaves_equal(a.root_leaf, b.root_leaf) &&
           detail_casimir::nodes_equal(a.roots, b.roots);
}

// --------------------------------------------------------------- casimir ---

struct CasimirOptions {
    int truncation_extra = 4;  // extra adaptive truncation steps on precision errors
};

// Full Casimir data of a spectral curve: chart + Puiseux + tree per declared
// point, with adaptive truncation.
inline CasimirData casimir(const SpectralData& S, const CasimirOptions& opt = {}) {
    // Reducedness is required except for an exact zeta^v factor (the zero
    // eigenvalue with multiplicity), which the expansion handles exactly; the
    // chart-level gate inside newton_puiseux enforces this.
    CasimirData out;
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        ChartCurve chart = to_chart(S, i);
        std::vector<Branch> branches;
        Rat trunc(0);
        for (int attempt = 0;; ++attempt) {
            try {
                branches = newton_puiseux(chart, trunc);
                break;
            } catch (const precision_error&) {
                if (attempt >= opt.truncation_extra) throw;
                trunc += 1;
                ++out.retries;
            }
        }
        out.points.push_back(eigenvalue_tree(branches, chart, S.points[i].location));
    }
    return out;
}

// Casimir data of a Higgs field; cross-checks the computed tree against the
// declared jets and residue blocks wherever a normal form is present.
inline CasimirData casimir(const HiggsField& H, const CasimirOptions& opt = {}) {
    SpectralData S = char_poly(H);
    CasimirData out = casimir(S, opt);
    for (std::size_t i = 0; i < H.points.size(); ++i) {
        if (!H.points[i].normal_form) continue;
        CasimirPointTree decl = declared_tree(H.points[i], static_cast<int>(i), H.rank);
        if (!trees_equal(out.points[i], decl))
            throw consistency_error(
                "casimir: computed eigenvalue tree disagrees with the declared jets/residues at "
                "point " + std::to_string(i) + " (z=" + gauss_to_string(H.points[i].location) + ")");
    }
    return out;
}

} // namespace speccurve

#endif
