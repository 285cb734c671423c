#include <catch2/catch.hpp>

#include "speccurve/factor.hpp"
#include "speccurve/prng.hpp"

using namespace speccurve;

namespace {
UniPoly from_ints(std::initializer_list<int> cs) {
    std::vector<GaussRat> v;
    for (int c : cs) v.push_back(GaussRat(c));
    return UniPoly(std::move(v));
}

UniPoly rebuild(const GFactorization& f) {
    UniPoly p = UniPoly::constant(f.unit);
    for (const auto& [g, m] : f.factors) p = p * g.pow(static_cast<unsigned>(m));
    return p;
}
} // namespace

TEST_CASE("w^2 + 1 splits over Q(i)") {
    UniPoly f = from_ints({1, 0, 1});
    auto fac = factor_univariate(f);
    REQUIRE(fac.factors.size() == 2);
    REQUIRE(fac.factors[0].factor.deg() == 1);
    REQUIRE(fac.factors[1].factor.deg() == 1);
    // roots are +-i
    auto roots = roots_in_gauss(f);
    REQUIRE(roots.size() == 2);
    bool has_i = false, has_minus_i = false;
    for (const auto& [r, m] : roots) {
        REQUIRE(m == 1);
        if (r == GaussRat::I()) has_i = true;
        if (r == -GaussRat::I()) has_minus_i = true;
    }
    REQUIRE(has_i);
    REQUIRE(has_minus_i);
}

TEST_CASE("-1 - 2i w has the single root i/2") {
    UniPoly f(std::vector<GaussRat>{GaussRat(-1), GaussRat(Rat(0), Rat(-2))});
    auto roots = roots_in_gauss(f);
    REQUIRE(roots.size() == 1);
    REQUIRE(roots[0].first == GaussRat(Rat(0), Rat(1, 2)));
    auto fac = factor_univariate(f);
    REQUIRE(fac.unit == GaussRat(Rat(0), Rat(-2)));
    REQUIRE(rebuild(fac) == f);
}

TEST_CASE("w^2 - 2 stays irreducible over Q(i)") {
    UniPoly f = from_ints({-2, 0, 1});
    auto fac = factor_univariate(f);
    REQUIRE(fac.factors.size() == 1);
    REQUIRE(fac.factors[0].factor.deg() == 2);
    REQUIRE(fac.factors[0].mult == 1);
}

TEST_CASE("squarefree decomposition and multiplicities") {
    // (w-1)^2 (w+1)
    UniPoly f = UniPoly::linear_root(GaussRat(1)).pow(2) * UniPoly::linear_root(GaussRat(-1));
    auto fac = factor_univariate(f);
    REQUIRE(fac.factors.size() == 2);
    UniPoly prod = rebuild(fac);
    REQUIRE(prod == f);
    int total = 0;
    for (const auto& [g, m] : fac.factors) total += m * g.deg();
    REQUIRE(total == 3);
}

TEST_CASE("rational factorization handles composite integer polys") {
    // (2w+1)(w^2+w+1)(w-3)
    UniPoly f = from_ints({1, 2}) * from_ints({1, 1, 1}) * from_ints({-3, 1});
    auto fac = factor_univariate(f);
    REQUIRE(rebuild(fac) == f);
    REQUIRE(fac.factors.size() == 3);
    // w^2+w+1 has no roots in Q(i), so it must appear as a quadratic factor
    bool quad = false;
    for (const auto& [g, m] : fac.factors)
        if (g.deg() == 2) quad = true;
    REQUIRE(quad);
}

TEST_CASE("gaussian-coefficient factorization") {
    // (w - i)^2 (w - (1+i)/2)
    UniPoly f = UniPoly::linear_root(GaussRat::I()).pow(2) *
                UniPoly::linear_root(GaussRat(Rat(1, 2), Rat(1, 2)));
    auto fac = factor_univariate(f);
    REQUIRE(rebuild(fac) == f);
    auto roots = roots_in_gauss(f);
    REQUIRE(roots.size() == 2);
}

TEST_CASE("factor product reproduces input on random polynomials") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int deg = 1 + static_cast<int>(rng.below(8));
        std::vector<GaussRat> c(static_cast<std::size_t>(deg) + 1);
        for (auto& x : c)
            x = GaussRat(Rat(rng.range(-6, 6)), Rat(rng.range(-3, 3)));
        if (c.back().is_zero()) c.back() = GaussRat(1);
        // occasionally square a factor to exercise multiplicities
        UniPoly f(c);
        if (trial % 7 == 0) f = f * f;
        auto fac = factor_univariate(f);
        REQUIRE(rebuild(fac) == f);
        for (const auto& [g, m] : fac.factors) {
            REQUIRE(g.is_monic());
            REQUIRE(m >= 1);
        }
    }
}

TEST_CASE("zero polynomial is a domain error") {
    REQUIRE_THROWS_AS(factor_univariate(UniPoly()), value_error);
    REQUIRE_THROWS_AS(squarefree_part(UniPoly()), value_error);
}

TEST_CASE("univariate squarefree part") {
    UniPoly wm1 = UniPoly::linear_root(GaussRat(1));
    UniPoly wp1 = UniPoly::linear_root(GaussRat(-1));
    REQUIRE(squarefree_part(wm1.pow(2) * wp1) == wm1 * wp1);
    UniPoly f = from_ints({-2, 0, 1});
    REQUIRE(squarefree_part(f) == f);  // already squarefree
    // idempotent and divides its input
    SplitMix64 rng(5);
    for (int t = 0; t < 25; ++t) {
        std::vector<GaussRat> c(1 + rng.below(5));
        for (auto& x : c) x = GaussRat(Rat(rng.range(-4, 4)));
        c.push_back(GaussRat(1));
        UniPoly g(c);
        if (t % 2 == 0) g = g * g;
        UniPoly s = squarefree_part(g);
        REQUIRE(squarefree_part(s) == s);
        REQUIRE(divmod(g, s).second.is_zero());
    }
}
