#include <catch2/catch.hpp>

#include "fixtures.hpp"
#include "speccurve/casimir.hpp"
#include "speccurve/spectral.hpp"

using namespace speccurve;

namespace {
BiPoly bp(std::initializer_list<std::initializer_list<int>> wcoeffs) {
    std::vector<UniPoly> v;
    for (auto& cs : wcoeffs) {
        std::vector<GaussRat> c;
        for (int x : cs) c.push_back(GaussRat(x));
        v.push_back(UniPoly(std::move(c)));
    }
    return BiPoly(std::move(v));
}
} // namespace

TEST_CASE("char poly of E1 is zeta^2 - z^-4") {
    SpectralData S = char_poly(fixtures::e1_higgs());
    REQUIRE(S.a[0].is_zero());
    REQUIRE(S.a[1] == -RatFunc(UniPoly::one(), UniPoly::monomial(GaussRat(1), 4)));
    REQUIRE(S.deg_L() == 0);
}

TEST_CASE("zero Higgs field has char poly zeta^r") {
    HiggsField H;
    H.rank = 3;
    H.matrix = RMat(3, 3);
    H.points = {{GaussRat(0), 0, std::nullopt}};
    SpectralData S = char_poly(H);
    for (const auto& a : S.a) REQUIRE(a.is_zero());
}

TEST_CASE("E2 validates: pole orders within section bounds") {
    SpectralData S = fixtures::e2_spectral();
    REQUIRE(validate_spectral(S).ok);
    // tightness: declaring the point at 1 regular with order 0 leaves a_2
    // pole order 1 <= 2 there; dropping the point breaks validation
    SpectralData bad = S;
    bad.points = {{GaussRat(0), 1}};
    REQUIRE(!validate_spectral(bad).ok);
}

TEST_CASE("charts: E1 and E2 at their irregular points") {
    SpectralData S1 = char_poly(fixtures::e1_higgs());
    ChartCurve c1 = to_chart(S1, 0);
    REQUIRE(c1.Q == bp({{-1}, {}, {1}}));  // zeta_i^2 - 1

    SpectralData S2 = fixtures::e2_spectral();
    ChartCurve c2 = to_chart(S2, 0);
    REQUIRE(c2.Q == bp({{-1}, {}, {-1, 1}}));  // zeta_i^2 (z-1) - 1

    // degree preserved in zeta and output primitive
    REQUIRE(c2.Q.deg_w() == 2);
    REQUIRE(c2.Q.content_z().deg() == 0);

    // zeta^r chart is zeta_i^r
    HiggsField H0;
    H0.rank = 2;
    H0.matrix = RMat(2, 2);
    H0.points = {{GaussRat(0), 1, std::nullopt}};
    ChartCurve c0 = to_chart(char_poly(H0), 0);
    REQUIRE(c0.Q == bp({{}, {}, {1}}));
}

TEST_CASE("is_reduced") {
    REQUIRE(is_reduced(char_poly(fixtures::e1_higgs())));
    REQUIRE(is_reduced(fixtures::e2_spectral()));
    // (zeta - z^-2)^2 = zeta^2 - 2 z^-2 zeta + z^-4
    SpectralData S;
    S.rank = 2;
    S.a = {RatFunc(UniPoly::constant(GaussRat(-2)), UniPoly::monomial(GaussRat(1), 2)),
           RatFunc(UniPoly::one(), UniPoly::monomial(GaussRat(1), 4))};
    S.points = {{GaussRat(0), 1}};
    REQUIRE(!is_reduced(S));
}

TEST_CASE("irreducibility: E1 splits as (zeta_i - 1)(zeta_i + 1)") {
    SpectralData S = char_poly(fixtures::e1_higgs());
    auto rep = irreducibility(S);
    REQUIRE(rep.base == BaseIrreducibility::ReducibleWithFactors);
    REQUIRE(rep.absolute == AbsoluteVerdict::NotApplicable);
    REQUIRE(rep.factors.size() == 2);
    // chart forms of the global factors (z^2 zeta -+ 1): substitute into the
    // chart frame to pin the fixture factors zeta_i -+ 1
    ChartCurve chart = to_chart(S, 0);
    auto chart_factors = factor_bivariate_squarefree(chart.Q);
    REQUIRE(chart_factors.size() == 2);
    REQUIRE(chart_factors[0] == bp({{-1}, {1}}));  // zeta_i - 1
    REQUIRE(chart_factors[1] == bp({{1}, {1}}));   // zeta_i + 1
}

TEST_CASE("irreducibility: E2 is absolutely irreducible with a ramification certificate") {
    auto rep = irreducibility(fixtures::e2_spectral());
    REQUIRE(rep.base == BaseIrreducibility::IrreducibleOverBase);
    REQUIRE(rep.absolute == AbsoluteVerdict::Certified);
    REQUIRE(rep.max_ramification == 2);
}

TEST_CASE("irreducibility: zeta^2 - 2 z^-4 stays undetermined") {
    SpectralData S;
    S.rank = 2;
    S.a = {RatFunc(0), RatFunc(UniPoly::constant(GaussRat(-2)), UniPoly::monomial(GaussRat(1), 4))};
    S.points = {{GaussRat(0), 1}};
    auto rep = irreducibility(S);
    REQUIRE(rep.base == BaseIrreducibility::IrreducibleOverBase);
    REQUIRE(rep.absolute == AbsoluteVerdict::Undetermined);
}

TEST_CASE("singular points by resultant elimination") {
    // zeta_i^2 - 1: smooth (two disjoint branches)
    ChartCurve c1{bp({{-1}, {}, {1}}), 0, 1, "", ""};
    REQUIRE(singular_points(c1).empty());

    // w^2 - z^2: node at the origin
    ChartCurve c2{bp({{0, 0, -1}, {}, {1}}), 0, 0, "", ""};
    auto loc = singular_points(c2);
    REQUIRE(loc.exact.size() == 1);
    REQUIRE(loc.exact[0].z0 == GaussRat(0));
    REQUIRE(loc.exact[0].w0 == GaussRat(0));

    // E2 chart: empty singular locus
    ChartCurve c3 = to_chart(fixtures::e2_spectral(), 0);
    REQUIRE(singular_points(c3).empty());

    // non-reduced input is an error
    BiPoly h = bp({{0, -1}, {}, {1}});
    ChartCurve c4{h * h, 0, 0, "", ""};
    REQUIRE_THROWS_WITH(singular_points(c4), Catch::Contains("reduce first"));

    // cuspidal curve with irrational singular fiber: w^2 - (z^2-2)^2 has
    // nodes at z = +-sqrt(2), w = 0: reported as a triangular system
    UniPoly z2m2(std::vector<GaussRat>{GaussRat(-2), GaussRat(0), GaussRat(1)});
    BiPoly c5q = BiPoly(std::vector<UniPoly>{-(z2m2 * z2m2), UniPoly(), UniPoly::one()});
    ChartCurve c5{c5q, 0, 0, "", ""};
    auto loc5 = singular_points(c5);
    REQUIRE(loc5.exact.empty());
    REQUIRE(loc5.triangular.size() == 1);
    REQUIRE(loc5.triangular[0].h == z2m2);
    REQUIRE(loc5.triangular[0].g.deg_w() == 1);
}

TEST_CASE("companion matrix quasi-inverse") {
    SpectralData S1 = char_poly(fixtures::e1_higgs());
    HiggsField C1 = companion_higgs(S1);
    REQUIRE(C1.matrix(0, 1) == RatFunc(UniPoly::one(), UniPoly::monomial(GaussRat(1), 4)));
    REQUIRE(C1.matrix(1, 0) == RatFunc(1));
    REQUIRE(C1.matrix(0, 0).is_zero());
    REQUIRE(C1.matrix(1, 1).is_zero());
    REQUIRE(char_poly(C1) == S1);

    SpectralData S2 = fixtures::e2_spectral();
    HiggsField C2 = companion_higgs(S2);
    UniPoly den = UniPoly::monomial(GaussRat(1), 4) *
                  UniPoly(std::vector<GaussRat>{GaussRat(-1), GaussRat(1)});
    REQUIRE(C2.matrix(0, 1) == RatFunc(UniPoly::one(), den));
    REQUIRE(char_poly(C2) == S2);

    // zeta^r: nilpotent companion block
    SpectralData S0;
    S0.rank = 3;
    S0.a = {RatFunc(0), RatFunc(0), RatFunc(0)};
    S0.points = {{GaussRat(0), 0}};
    HiggsField C0 = companion_higgs(S0);
    REQUIRE(C0.matrix(1, 0) == RatFunc(1));
    REQUIRE(C0.matrix(2, 1) == RatFunc(1));
    for (std::size_t j = 0; j < 3; ++j) REQUIRE(C0.matrix(j, 2).is_zero());
}

TEST_CASE("casimir of E1 matches the declared tree") {
    HiggsField H = fixtures::e1_higgs();
    CasimirData cd = casimir(H);
    REQUIRE(cd.points.size() == 1);
    const auto& tree = cd.points[0];
    REQUIRE(tree.order_m == 1);
    REQUIRE(tree.roots.size() == 2);
    REQUIRE(tree.roots[0].label == GaussRat(-1));
    REQUIRE(tree.roots[1].label == GaussRat(1));
    for (const auto& n : tree.roots) {
        REQUIRE(n.d == 1);
        REQUIRE(n.leaf.has_value());
        REQUIRE(n.leaf->poly == UniPoly::monomial(GaussRat(1), 1));  // w (lambda = 0)
        REQUIRE(n.leaf->degree_mismatch == 0);
    }
}

TEST_CASE("casimir of the E2 companion field") {
    HiggsField H = companion_higgs(fixtures::e2_spectral());
    CasimirData cd = casimir(H);
    REQUIRE(cd.points.size() == 2);

    const auto& at0 = cd.points[0];
    REQUIRE(at0.order_m == 1);
    REQUIRE(at0.roots.size() == 2);
    REQUIRE(at0.roots[0].label == -GaussRat::I());
    REQUIRE(at0.roots[1].label == GaussRat::I());
    // leaves (w + i/2) and (w - i/2)
    UniPoly minus(std::vector<GaussRat>{GaussRat(Rat(0), Rat(1, 2)), GaussRat(1)});
    UniPoly plus(std::vector<GaussRat>{GaussRat(Rat(0), Rat(-1, 2)), GaussRat(1)});
    REQUIRE(at0.roots[0].leaf->poly == minus);
    REQUIRE(at0.roots[1].leaf->poly == plus);

    const auto& at1 = cd.points[1];
    REQUIRE(at1.order_m == 0);
    REQUIRE(at1.root_leaf.has_value());
    REQUIRE(at1.root_leaf->poly == UniPoly::monomial(GaussRat(1), 2));  // w^2
    REQUIRE(at1.root_leaf->ramified);  // ramification 2 over the regular point
    REQUIRE(at1.root_leaf->d == 2);
}

TEST_CASE("casimir of the zero field with a regular point") {
    HiggsField H;
    H.rank = 3;
    H.matrix = RMat(3, 3);
    NormalForm nf;
    nf.frame = QMat::identity(3);
    nf.jets = {{}, {}, {}};
    nf.residue = QMat(3, 3);
    H.points = {{GaussRat(0), 0, nf}};
    CasimirData cd = casimir(H);
    REQUIRE(cd.points[0].root_leaf.has_value());
    REQUIRE(cd.points[0].root_leaf->poly == UniPoly::monomial(GaussRat(1), 3));  // w^3
}

TEST_CASE("casimir detects an injected jet mismatch") {
    HiggsField H = fixtures::e1_higgs();
    H.points[0].normal_form->jets = {{GaussRat(1)}, {GaussRat(2)}};  // wrong declaration
    // validation would fail, but casimir's own cross-check must fire too
    REQUIRE_THROWS_AS(casimir(H), consistency_error);
}

TEST_CASE("casimir requires a reduced curve (beyond an exact zeta power)") {
    // (zeta - z^-2)^2 is genuinely non-reduced
    SpectralData S;
    S.rank = 2;
    S.a = {RatFunc(UniPoly::constant(GaussRat(-2)), UniPoly::monomial(GaussRat(1), 2)),
           RatFunc(UniPoly::one(), UniPoly::monomial(GaussRat(1), 4))};
    S.points = {{GaussRat(0), 1}};
    REQUIRE_THROWS_AS(casimir(S), value_error);
}

TEST_CASE("symmetric functions of the branches reproduce the a_k expansions") {
    // E2 at z=0: e_1 = b_1 + b_2 must vanish (a_1 = 0) and e_2 = b_1 b_2 must
    // match the Laurent expansion of a_2, coefficient by coefficient, up to
    // the tracked truncation order
    SpectralData S = fixtures::e2_spectral();
    ChartCurve chart = to_chart(S, 0);
    auto branches = newton_puiseux(chart, Rat(2));
    REQUIRE(branches.size() == 2);
    PuiseuxSeries e1 = branches[0].expansion + branches[1].expansion;
    PuiseuxSeries e2 = branches[0].expansion * branches[1].expansion;
    for (const auto& [e, c] : e1.terms()) {
        (void)e;
        REQUIRE(c.is_zero());
    }
    REQUIRE(e2.trunc().has_value());
    // compare exponents -4 .. trunc-1 against a_2's exact Laurent coefficients
    Rat tr = *e2.trunc();
    auto lc = S.a[1].laurent_at(GaussRat(0), -4, -1);
    for (int ord = -4; Rat(ord) < tr && ord <= -1; ++ord)
        REQUIRE(e2.coeff_at(Rat(ord)) == lc[static_cast<std::size_t>(ord + 4)]);

    // a random framed diagonal field: same identity at its irregular point
    NormalForm nf;
    nf.frame = QMat::identity(2);
    nf.frame(0, 1) = GaussRat(1);  // unipotent frame
    nf.jets = {{GaussRat(2)}, {GaussRat(-1)}};
    nf.residue = QMat(2, 2);
    nf.residue(0, 0) = GaussRat(Rat(1, 2));
    nf.residue(1, 1) = GaussRat(-3);
    NormalForm bal;
    bal.frame = QMat::identity(2);
    bal.jets = {{}, {}};
    bal.residue = QMat(2, 2);
    bal.residue(0, 0) = GaussRat(Rat(-1, 2));
    bal.residue(0, 1) = GaussRat(Rat(7, 2));
    bal.residue(1, 1) = GaussRat(3);
    // conjugated residue sum must vanish: frame * residue * frame^{-1} has
    // off-diagonal spill, balanced explicitly above
    QMat sum = nf.frame * nf.residue * nf.frame.inverse() + bal.residue;
    REQUIRE(sum.is_zero());
    HiggsField H = build_higgs(2, {{GaussRat(0), 1, nf}, {GaussRat(1), 0, bal}});
    SpectralData S2 = char_poly(H);
    ChartCurve c2 = to_chart(S2, 0);
    auto br2 = newton_puiseux(c2, Rat(1));
    REQUIRE(br2.size() == 2);
    PuiseuxSeries s1 = br2[0].expansion + br2[1].expansion;
    PuiseuxSeries s2 = br2[0].expansion * br2[1].expansion;
    auto la1 = S2.a[0].laurent_at(GaussRat(0), -2, 0);
    for (const auto& [e, c] : s1.terms()) {
        if (e.get_den() != 1 || e > 0) continue;
        long idx = e.get_num().get_si() + 2;
        REQUIRE(-c == la1[static_cast<std::size_t>(idx)]);
    }
    auto la2 = S2.a[1].laurent_at(GaussRat(0), -4, -1);
    for (int ord = -4; Rat(ord) < *s2.trunc() && ord <= -1; ++ord)
        REQUIRE(s2.coeff_at(Rat(ord)) == la2[static_cast<std::size_t>(ord + 4)]);
}

TEST_CASE("branch multiplicities sum to the rank at every tree level") {
    NormalForm nf;
    nf.frame = QMat::identity(3);
    nf.jets = {{GaussRat(1), GaussRat(2)}, {GaussRat(1), GaussRat(2)}, {GaussRat(1), GaussRat(-1)}};
    nf.residue = QMat(3, 3);
    nf.residue(0, 0) = GaussRat(1);
    nf.residue(0, 1) = GaussRat(2);
    nf.residue(1, 1) = GaussRat(-1);
    nf.residue(2, 2) = GaussRat(Rat(1, 3));
    NormalForm bal;
    bal.frame = QMat::identity(3);
    bal.jets = {{}, {}, {}};
    bal.residue = QMat(3, 3) - nf.residue;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) bal.residue(i, j) = -nf.residue(i, j);
    HiggsField H = build_higgs(3, {{GaussRat(0), 2, nf}, {GaussRat(1), 0, bal}});
    CasimirData cd = casimir(H);
    const auto& tree = cd.points[0];
    REQUIRE(tree.d_total == 3);
    int level1 = 0;
    for (const auto& n : tree.roots) {
        level1 += n.d;
        int level2 = 0;
        for (const auto& ch : n.children) level2 += ch.d;
        REQUIRE(level2 == n.d);
    }
    REQUIRE(level1 == 3);
}

TEST_CASE("galois stability of the branch grouping") {
    // E2 at the regular point z=1: the ramified pair is invariant under
    // z^{1/2} -> -z^{1/2}
    SpectralData S = fixtures::e2_spectral();
    ChartCurve chart = to_chart(S, 1);
    auto branches = newton_puiseux(chart, Rat(1));
    REQUIRE(branches.size() == 1);
    const auto& b = branches[0];
    REQUIRE(b.ramification == 2);
    PuiseuxSeries twisted = b.expansion.galois_twist(GaussRat(-1));
    // the twisted series is the conjugate sheet of the same branch
    REQUIRE(!(twisted == b.expansion));
    REQUIRE(twisted.galois_twist(GaussRat(-1)) == b.expansion);
}
