#include <catch2/catch.hpp>

#include "speccurve/rational.hpp"

using namespace speccurve;

TEST_CASE("gaussian rational arithmetic is exact") {
    GaussRat a(Rat(1, 2), Rat(3, 4));
    GaussRat b(Rat(-1, 3), Rat(2));

    REQUIRE(a + b == GaussRat(Rat(1, 6), Rat(11, 4)));
    REQUIRE(a * b == GaussRat(Rat(1, 2) * Rat(-1, 3) - Rat(3, 4) * Rat(2),
                              Rat(1, 2) * Rat(2) + Rat(3, 4) * Rat(-1, 3)));
    REQUIRE(a * a.inv() == GaussRat(1));
    REQUIRE(GaussRat::I() * GaussRat::I() == GaussRat(-1));
    REQUIRE(a.conj().conj() == a);
    REQUIRE(a.norm() == Rat(1, 4) + Rat(9, 16));
}

TEST_CASE("division by zero throws") {
    REQUIRE_THROWS_AS(GaussRat().inv(), value_error);
}

TEST_CASE("scalar parsing and printing round trip") {
    for (const char* s : {"0", "1", "-1", "1/2", "-3/4", "i", "-i", "2i", "1/2i",
                          "1/2+3/4i", "2-i", "-1/3-5/7i"}) {
        GaussRat g = parse_gauss(s);
        REQUIRE(parse_gauss(gauss_to_string(g)) == g);
    }
    REQUIRE(parse_gauss("3/2") == GaussRat(Rat(3, 2)));
    REQUIRE(parse_gauss("-i") == GaussRat(Rat(0), Rat(-1)));
    REQUIRE(parse_gauss("1/2+3/4i") == GaussRat(Rat(1, 2), Rat(3, 4)));
    REQUIRE(gauss_to_string(GaussRat(Rat(0), Rat(-1))) == "-i");
    REQUIRE(gauss_to_string(GaussRat(Rat(2), Rat(-1, 2))) == "2-1/2i");
}

TEST_CASE("decimals and malformed scalars are rejected") {
    REQUIRE_THROWS_AS(parse_gauss("1.5"), parse_error);
    REQUIRE_THROWS_AS(parse_gauss(""), parse_error);
    REQUIRE_THROWS_AS(parse_gauss("1+2"), parse_error);
    REQUIRE_THROWS_AS(parse_gauss("i+i"), parse_error);
    REQUIRE_THROWS_AS(parse_gauss("1/0"), parse_error);
    REQUIRE_THROWS_AS(parse_rat("2/4x"), parse_error);
}

TEST_CASE("total order on Q(i) is consistent") {
    GaussRat a(Rat(1, 2)), b(Rat(1, 2), Rat(1));
    REQUIRE(cmp(a, b) < 0);
    REQUIRE(cmp(b, a) > 0);
    REQUIRE(cmp(a, a) == 0);
}
