#ifndef SPECCURVE_LATTICE_HPP
#define SPECCURVE_LATTICE_HPP

// Picard lattice of the blown-up ruled surface: basis {fbar, sbar, ebar_nu},
// Gram matrix fbar^2 = 0, fbar.sbar = 1, sbar^2 = -e, ebar_nu.ebar_mu =
// -delta, with e = deg L. Divisor classes are integer vectors over this
// basis. Pure integer arithmetic.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "speccurve/blowup.hpp"

namespace speccurve {

using DivisorClass = std::vector<long long>;

struct LatticeNodeRef {
    const BlowupNode* node = nullptr;
    int point_index = 0;
    int order_m = 0;
    long long parent = -1;  // index into nodes[] of the parent node; -1 = fiber
};

struct IntersectionLattice {
    int e = 0;                        // deg L = deg D - 2
    std::vector<std::string> labels;  // "f", "s", then one per exceptional class
    std::vector<LatticeNodeRef> nodes;  // parallel to labels[2..]

    std::size_t dim() const { return labels.size(); }
    DivisorClass zero() const { return DivisorClass(dim(), 0); }

    long long pair(const DivisorClass& A, const DivisorClass& B) const {
        long long s = A[0] * B[1] + A[1] * B[0];  // fbar.sbar = 1
        s -= static_cast<long long>(e) * A[1] * B[1];
        for (std::size_t k = 2; k < dim(); ++k) s -= A[k] * B[k];
        return s;
    }
};

inline DivisorClass operator+(DivisorClass a, const DivisorClass& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] += b[k];
    return a;
}
inline DivisorClass operator-(DivisorClass a, const DivisorClass& b) {
    for (std::size_t k = 0; k < a.size(); ++k) a[k] -= b[k];
    return a;
}
inline DivisorClass operator*(long long s, DivisorClass a) {
    for (auto& x : a) x *= s;
    return a;
}

// Basis order: fbar, sbar, then the exceptional classes per point in tower
// order, depth-first with children after their parent.
inline IntersectionLattice lattice(const BlowupTower& T, const SpectralData& S) {
    IntersectionLattice L;
    L.e = S.deg_L();
    L.labels = {"f", "s"};
    struct Rec {
        static void add(IntersectionLattice& L, const BlowupNode& n, int point_index, int order_m,
                        long long parent_index) {
            long long my_index = static_cast<long long>(L.nodes.size());
            L.labels.push_back(n.exceptional_id);
            L.nodes.push_back({&n, point_index, order_m, parent_index});
            for (const auto& ch : n.children) add(L, ch, point_index, order_m, my_index);
        }
    };
    for (const auto& pt : T.points)
        for (const auto& root : pt.roots) Rec::add(L, root, pt.point_index, pt.order_m, -1);
    return L;
}

// [Sigma~] = r (sbar + e fbar) - sum d_nu ebar_nu.
inline DivisorClass spectral_class(const IntersectionLattice& L, int rank) {
    DivisorClass C = L.zero();
    C[0] = static_cast<long long>(rank) * L.e;
    C[1] = rank;
    for (std::size_t k = 0; k < L.nodes.size(); ++k) C[2 + k] = -L.nodes[k].node->d;
    return C;
}

// K = sigma*K_Z + sum ebar with K_Z = -2 sbar - (e+2) fbar.
inline DivisorClass canonical_class(const IntersectionLattice& L) {
    DivisorClass K = L.zero();
    K[0] = -(L.e + 2);
    K[1] = -2;
    for (std::size_t k = 0; k < L.nodes.size(); ++k) K[2 + k] = 1;
    return K;
}

// Degeneracy divisor of the pulled-back 2-form: prime multiplicities are 2 on
// (xi=0), m_i+1 on the proper transform of the fiber over p_i, and m_i+1-k on
// the level-k exceptional divisors; assembled into the class basis via
// [X-proper] = [X-total] - sum of the ebar of centers lying on X.
struct DegeneracyDivisor {
    DivisorClass cls;
    // prime multiplicities per exceptional class (parallel to lattice nodes)
    std::vector<int> node_orders;
    // symbolic pole order of the 2-form pulled through each chart map,
    // computed from the z-valuation of the jacobian dz ^ dzeta_i = z^level dz ^ dw
    std::vector<int> symbolic_orders;
    bool symbolic_match = true;
};

inline DegeneracyDivisor degeneracy_class(const IntersectionLattice& L, const SpectralData& S) {
    DegeneracyDivisor out;
    DivisorClass D = L.zero();
    D[1] = 2;  // 2 (xi = 0); (xi=0) has class sbar
    // fibers: (m_i + 1) * [F_i-proper]; level-1 centers sit on the fiber
    for (std::size_t pi = 0; pi < S.points.size(); ++pi) {
        DivisorClass F = L.zero();
        F[0] = 1;
        for (std::size_t k = 0; k < L.nodes.size(); ++k)
            if (L.nodes[k].point_index == static_cast<int>(pi) && L.nodes[k].node->level == 1)
                F[2 + k] = -1;
        D = D + static_cast<long long>(S.points[pi].order + 1) * F;
    }
    // exceptional divisors: weight (m_i + 1 - level) times [E_nu-proper]
    out.node_orders.resize(L.nodes.size());
    out.symbolic_orders.resize(L.nodes.size());
    for (std::size_t k = 0; k < L.nodes.size(); ++k) {
        const auto& ref = L.nodes[k];
        int weight = ref.order_m + 1 - ref.node->level;
        out.node_orders[k] = weight;
        DivisorClass E = L.zero();
        E[2 + k] = 1;
        for (std::size_t j = 0; j < L.nodes.size(); ++j)
            if (L.nodes[j].parent == static_cast<long long>(k)) E[2 + j] = -1;
        D = D + static_cast<long long>(weight) * E;

        // independent symbolic route: the chart map is zeta_i = A(z) + z^level w,
        // so dz ^ dzeta_i = z^level dz ^ dw, and the ambient form
        // dz ^ dzeta = z^{-(m+1)} dz ^ dzeta_i picks up pole order
        // (m+1) - val_z(d(subst)/dw) along E.
        ChartSubstitution cs = chart_substitution(*ref.node);
        UniPoly jac = UniPoly::monomial(GaussRat(1), static_cast<std::size_t>(cs.level));
        BiPoly subst = BiPoly(cs.prefix) + BiPoly::monomial(GaussRat(1), static_cast<std::size_t>(cs.level), 1);
        UniPoly jac_check = subst.derivative_w().wcoeff(0);
        if (jac_check != jac) out.symbolic_match = false;
        int order = ref.order_m + 1 - jac_check.valuation_at_zero();
        out.symbolic_orders[k] = order;
        if (order != weight) out.symbolic_match = false;
    }
    out.cls = std::move(D);
    return out;
}

// Adjunction: g = 1 + (C^2 + C.K)/2.
inline long long arithmetic_genus(const DivisorClass& C, const IntersectionLattice& L) {
    long long n = L.pair(C, C) + L.pair(C, canonical_class(L));
    if (n % 2 != 0) throw consistency_error("adjunction number is odd");
    return 1 + n / 2;
}

// d = delta + r(r-1) e / 2.
inline long long spectral_degree(long long delta, int rank, int e) {
    long long rr = static_cast<long long>(rank) * (rank - 1);
    if ((rr * e) % 2 != 0) throw consistency_error("r(r-1)e must be even");
    return delta + rr * e / 2;
}

// Hilbert polynomial of the class with respect to the ample
// L = (sbar + e fbar) + fbar - sum ebar: H(t) = (C.L) t + 1 - g_a(C).
struct HilbertPolynomial {
    long long slope = 0;
    long long constant = 0;
};

inline DivisorClass ample_class(const IntersectionLattice& L) {
    DivisorClass A = L.zero();
    A[0] = L.e + 1;
    A[1] = 1;
    for (std::size_t k = 0; k < L.nodes.size(); ++k) A[2 + k] = -1;
    return A;
}

inline HilbertPolynomial hilbert_polynomial(const DivisorClass& C, const IntersectionLattice& L) {
    HilbertPolynomial H;
    H.slope = L.pair(C, ample_class(L));
    H.constant = 1 - arithmetic_genus(C, L);
    return H;
}

} // namespace speccurve

#endif
