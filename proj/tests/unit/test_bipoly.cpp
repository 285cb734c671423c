#include <catch2/catch.hpp>

#include "speccurve/bipoly.hpp"
#include "speccurve/bivar_factor.hpp"
#include "speccurve/newton_puiseux.hpp"

using namespace speccurve;

namespace {
BiPoly bp(std::initializer_list<std::initializer_list<int>> wcoeffs) {
    // inner lists are z-coefficients of w^0, w^1, ...
    std::vector<UniPoly> v;
    for (auto& cs : wcoeffs) {
        std::vector<GaussRat> c;
        for (int x : cs) c.push_back(GaussRat(x));
        v.push_back(UniPoly(std::move(c)));
    }
    return BiPoly(std::move(v));
}
} // namespace

TEST_CASE("resultant matches hand-computed Sylvester determinants") {
    // f = w^2 - 1, g = w - 1 share the root w = 1: resultant 0
    REQUIRE(resultant_w(bp({{-1}, {}, {1}}), bp({{-1}, {1}})).is_zero());

    // f = w^2 - z, g = w: resultant -z (3x3 Sylvester determinant)
    UniPoly r = resultant_w(bp({{0, -1}, {}, {1}}), bp({{}, {1}}));
    REQUIRE(r == UniPoly(std::vector<GaussRat>{GaussRat(0), GaussRat(-1)}));

    // f = w^2 - c, g = 2w: resultant -4c for a few constants
    for (int c : {1, 2, -3, 5}) {
        UniPoly rr = resultant_w(bp({{-c}, {}, {1}}), bp({{}, {2}}));
        REQUIRE(rr == UniPoly::constant(GaussRat(-4 * c)));
    }

    REQUIRE_THROWS_AS(resultant_w(BiPoly(), bp({{}, {1}})), value_error);
    REQUIRE_THROWS_AS(resultant_w(bp({{1}}), bp({{}, {1}})), value_error);
}

TEST_CASE("resultant vanishes exactly when a common w-factor exists") {
    // randomized cross-check against the explicit gcd over Q(i)(z)
    SplitMix64 rng(99);
    for (int trial = 0; trial < 40; ++trial) {
        auto rnd_bp = [&](int dw, int dz) {
            std::vector<UniPoly> v(static_cast<std::size_t>(dw) + 1);
            for (auto& c : v) {
                std::vector<GaussRat> cc(static_cast<std::size_t>(dz) + 1);
                for (auto& x : cc) x = GaussRat(Rat(rng.range(-3, 3)));
                c = UniPoly(std::move(cc));
            }
            return BiPoly(std::move(v));
        };
        BiPoly f = rnd_bp(2, 2), g = rnd_bp(2, 1);
        if (f.deg_w() < 1 || g.deg_w() < 1) continue;
        if (trial % 3 == 0) {
            // plant a common factor
            BiPoly common = bp({{0, 1}, {1}});  // z + w
            f = f * common;
            g = g * common;
        }
        bool res_zero = resultant_w(f, g).is_zero();
        bool gcd_nontrivial = gcd_w(f, g).deg_w() > 0;
        REQUIRE(res_zero == gcd_nontrivial);
    }
}

TEST_CASE("squarefree part in w") {
    // (w-1)^2 (w+1) -> (w-1)(w+1) = w^2 - 1
    BiPoly f = bp({{-1}, {1}}) * bp({{-1}, {1}}) * bp({{1}, {1}});
    BiPoly s = squarefree_part_w(f);
    REQUIRE(s == bp({{-1}, {}, {1}}));

    // w^2 - z^4 is already squarefree
    BiPoly g = bp({{0, 0, 0, 0, -1}, {}, {1}});
    REQUIRE(squarefree_part_w(g) == g);
    REQUIRE(is_squarefree_w(g));

    // (w^2 - z)^2 -> w^2 - z
    BiPoly h = bp({{0, -1}, {}, {1}});
    REQUIRE(squarefree_part_w(h * h) == h);
    REQUIRE(!is_squarefree_w(h * h));

    // squarefree_part is idempotent and divides its input
    BiPoly sf = squarefree_part_w(f);
    REQUIRE(squarefree_part_w(sf) == sf);
    REQUIRE(try_exact_divide(f, sf).has_value());

    REQUIRE_THROWS_AS(squarefree_part_w(BiPoly()), value_error);
}

TEST_CASE("substitution w -> A(z) + z^k w") {
    // (1 + z w)^2 - 1 = z(2w + z w^2)
    BiPoly q = bp({{-1}, {}, {1}});  // w^2 - 1
    BiPoly t = q.subst_w(UniPoly::one(), 1);
    REQUIRE(t.val_z() == 1);
    BiPoly proper = t.divided_by_z_pow(1).primitive_normalized();
    REQUIRE(proper == bp({{}, {2}, {0, 1}}));  // z w^2 + 2 w
}

TEST_CASE("opposite chart substitution") {
    // Q = w^2 - 1 at center c=1: G(z',u) = (1+u)^2 - 1 = 2u + u^2
    BiPoly q = bp({{-1}, {}, {1}});
    BiPoly g = q.subst_opposite_chart(GaussRat(1));
    REQUIRE(g == bp({{}, {2}, {1}}));
    // Q = z - w at c=0: G = z'u - u
    BiPoly q2 = bp({{0, 1}, {-1}});
    BiPoly g2 = q2.subst_opposite_chart(GaussRat(0));
    REQUIRE(g2 == bp({{}, {-1, 1}}));
}

TEST_CASE("bivariate factorization splits and certifies") {
    // z^4 w^2 - 1 = (z^2 w - 1)(z^2 w + 1)
    BiPoly f = bp({{-1}, {}, {0, 0, 0, 0, 1}});
    auto fac = factor_bivariate_squarefree(f);
    REQUIRE(fac.size() == 2);
    REQUIRE(fac[0].deg_w() == 1);
    REQUIRE(fac[1].deg_w() == 1);

    // (z-1) w^2 - 1 is irreducible
    BiPoly g = bp({{-1}, {}, {-1, 1}});
    REQUIRE(factor_bivariate_squarefree(g).size() == 1);

    // w^2 - 2 z^{-4} cleared: z^4 w^2 - 2, irreducible over Q(i)(z)
    BiPoly h = bp({{-2}, {}, {0, 0, 0, 0, 1}});
    REQUIRE(factor_bivariate_squarefree(h).size() == 1);

    // product of three planted factors
    BiPoly a = bp({{0, 1}, {1}});       // z + w
    BiPoly b = bp({{1, 1}, {2}});       // 1 + z + 2w
    BiPoly c = bp({{-1}, {}, {1, 1}});  // (1+z)w^2 - 1
    auto fac2 = factor_bivariate_squarefree(a * b * c);
    REQUIRE(fac2.size() == 3);
    BiPoly prod = fac2[0];
    for (std::size_t k = 1; k < fac2.size(); ++k) prod = prod * fac2[k];
    // product reproduces the input up to the unit normalization
    REQUIRE(prod.primitive_normalized() == (a * b * c).primitive_normalized());
}

TEST_CASE("newton polygon expansion: plain branches") {
    // w^2 - 1: two branches w = 1, w = -1, exact
    auto br = newton_puiseux_chart(bp({{-1}, {}, {1}}), Rat(3));
    REQUIRE(br.size() == 2);
    for (const auto& b : br) {
        REQUIRE(b.count == 1);
        REQUIRE(b.expansion.is_exact());
        REQUIRE(b.expansion.terms().size() == 1);
        REQUIRE(b.expansion.terms()[0].first == 0);
    }
    REQUIRE(br[0].expansion.coeff_at(Rat(0)) == GaussRat(-1));
    REQUIRE(br[1].expansion.coeff_at(Rat(0)) == GaussRat(1));
}

TEST_CASE("newton polygon expansion: E2-style chart at the irregular point") {
    // (z-1) w^2 - 1: w = +-i (1 + z/2 + 3z^2/8 + ...)
    auto br = newton_puiseux_chart(bp({{-1}, {}, {-1, 1}}), Rat(2));
    REQUIRE(br.size() == 2);
    for (const auto& b : br) REQUIRE(b.count == 1);
    // branches sorted deterministically; check the coefficient data as a set
    bool seen_i = false, seen_minus_i = false;
    for (const auto& b : br) {
        GaussRat c0 = b.expansion.coeff_at(Rat(0));
        GaussRat c1 = b.expansion.coeff_at(Rat(1));
        if (c0 == GaussRat::I()) {
            seen_i = true;
            REQUIRE(c1 == GaussRat(Rat(0), Rat(1, 2)));
        }
        if (c0 == -GaussRat::I()) {
            seen_minus_i = true;
            REQUIRE(c1 == GaussRat(Rat(0), Rat(-1, 2)));
        }
    }
    REQUIRE(seen_i);
    REQUIRE(seen_minus_i);
}

TEST_CASE("newton polygon expansion: ramified pair merges into one branch") {
    // (1+z)^4 w^2 - z near z=0: w = +- z^{1/2}(1+z)^{-2}: one branch, ram 2
    BiPoly one_plus_z = bp({{1, 1}});
    BiPoly q = one_plus_z.pow(4) * bp({{}, {}, {1}}) - bp({{0, 1}});
    auto br = newton_puiseux_chart(q, Rat(3));
    REQUIRE(br.size() == 1);
    REQUIRE(br[0].count == 2);
    REQUIRE(br[0].ramification == 2);
    REQUIRE(br[0].expansion.coeff_at(Rat(1, 2)) == GaussRat(1));
    REQUIRE(br[0].expansion.coeff_at(Rat(3, 2)) == GaussRat(-2));
}

TEST_CASE("newton polygon expansion: irrational coefficient becomes a cluster") {
    // w^2 - 2: branches +-sqrt(2), kept as one cluster with tail w^2 - 2
    auto br = newton_puiseux_chart(bp({{-2}, {}, {1}}), Rat(2));
    REQUIRE(br.size() == 1);
    REQUIRE(br[0].count == 2);
    REQUIRE(br[0].tail.has_value());
    REQUIRE(br[0].tail->first == Rat(0));
    REQUIRE(br[0].tail->second.deg() == 2);
}

TEST_CASE("newton polygon expansion: polar branch") {
    // z w - 1: w = z^{-1}
    auto br = newton_puiseux_chart(bp({{-1}, {0, 1}}), Rat(2));
    REQUIRE(br.size() == 1);
    REQUIRE(br[0].expansion.coeff_at(Rat(-1)) == GaussRat(1));
}

TEST_CASE("non-reduced chart input is rejected") {
    BiPoly h = bp({{0, -1}, {}, {1}});
    ChartCurve c{h * h, 0, 0, "", ""};
    REQUIRE_THROWS_AS(newton_puiseux(c, Rat(0)), value_error);
}
