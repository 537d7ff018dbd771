#include <doctest.h>

#include "qtl/laurent.hpp"

using qtl::LaurentPoly;

TEST_SUITE("laurent") {

TEST_CASE("canonicalize merges, drops zeros and is idempotent") {
    CHECK(LaurentPoly::canonicalize({{2, 1}, {2, -1}}).isZero());

    LaurentPoly three = LaurentPoly::canonicalize({{0, 3}});
    CHECK(three.terms().size() == 1);
    CHECK(three.coeff(0) == 3);

    LaurentPoly p = LaurentPoly::canonicalize({{-4, mpq_class(1, 2)}, {0, 0}});
    CHECK(p.terms().size() == 1);
    CHECK(p.coeff(-4) == mpq_class(1, 2));
    CHECK(p == LaurentPoly::canonicalize({{-4, mpq_class(1, 2)}}));
}

TEST_CASE("zero polynomial is the empty map") {
    LaurentPoly z;
    CHECK(z.isZero());
    CHECK(z.terms().empty());
    CHECK((z + z).isZero());
    CHECK((z * LaurentPoly::monomial(5)).isZero());
}

TEST_CASE("ring arithmetic") {
    LaurentPoly u = LaurentPoly::monomial(1);
    LaurentPoly one(mpq_class(1));
    CHECK((u - u).isZero());
    CHECK(u * u == LaurentPoly::monomial(2));
    CHECK((u - one) * (u + one) == LaurentPoly::monomial(2) - one);
    CHECK((-u) + u == LaurentPoly());
    CHECK(u.shifted(3) == LaurentPoly::monomial(4));
    CHECK(u.scaled(mpq_class(-2)) == LaurentPoly::monomial(1, -2));
}

TEST_CASE("exponent bookkeeping") {
    LaurentPoly p = LaurentPoly::canonicalize({{-3, 1}, {2, mpq_class(5, 7)}});
    CHECK(p.minExp() == -3);
    CHECK(p.maxExp() == 2);
    CHECK(p.degreeSpan() == 5);
    CHECK(p.coeff(2) == mpq_class(5, 7));
    CHECK(p.coeff(1) == 0);
}

TEST_CASE("string form lists terms by ascending exponent") {
    LaurentPoly p = LaurentPoly::canonicalize({{2, 1}, {-4, mpq_class(-3, 2)}, {0, 1}});
    CHECK(p.str() == "-3/2*u^-4 + 1 + u^2");
    CHECK(LaurentPoly().str() == "0");
}

TEST_CASE("gcd and exact division") {
    LaurentPoly u = LaurentPoly::monomial(1);
    LaurentPoly one(mpq_class(1));
    LaurentPoly a = (u * u - one) * u.shifted(-3);  // unit factors must not matter
    LaurentPoly b = (u - one).scaled(mpq_class(7, 3));
    LaurentPoly g = LaurentPoly::gcd(a, b);
    CHECK(g == one - u);  // normalized: lowest exponent 0, positive low coefficient
    CHECK(LaurentPoly::divExact(u * u - one, u - one) == u + one);
    CHECK(LaurentPoly::divExact(a, g) * g == a);
}

TEST_CASE("pair normalization pins the denominator") {
    LaurentPoly num = LaurentPoly::monomial(3, -2);
    LaurentPoly den = LaurentPoly::monomial(1, mpq_class(-1, 2));
    LaurentPoly::normalizePair(num, den);
    CHECK(den.minExp() == 0);
    CHECK(den.coeff(den.minExp()) > 0);
    // the quotient is unchanged: num/den == -2u^3 / (-u/2) == 4u^2
    CHECK(num == den * LaurentPoly::monomial(2, 4));
}

}  // TEST_SUITE
