#include <doctest.h>

#include <random>
#include <vector>

#include "qtl/field.hpp"

using qtl::Fq;
using qtl::LaurentPoly;

namespace {

// deterministic field elements with small Laurent numerators/denominators
std::vector<Fq> sampleElems() {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> coef(-4, 4), exp(-3, 3);
    std::vector<Fq> out;
    while (out.size() < 12) {
        std::vector<std::pair<long, mpq_class>> n, d;
        for (int t = 0; t < 3; ++t) n.emplace_back(exp(rng), coef(rng));
        for (int t = 0; t < 2; ++t) d.emplace_back(exp(rng), coef(rng));
        LaurentPoly den = LaurentPoly::canonicalize(d);
        if (den.isZero()) continue;
        out.emplace_back(LaurentPoly::canonicalize(n), den);
    }
    return out;
}

}  // namespace

TEST_SUITE("field") {

TEST_CASE("defining relations of u") {
    CHECK(Fq::upow(0).isOne());
    CHECK(Fq::upow(2) == Fq::qpow(1));
    CHECK(Fq::upow(1) * Fq::upow(1) == Fq::qpow(1));
    CHECK(Fq::upow(-3) == Fq::upow(3).inv());
    CHECK(Fq::upow(-3).str() == "u^-3");
}

TEST_CASE("arithmetic anchors") {
    Fq q = Fq::qpow(1);
    CHECK((q + (-q)).isZero());
    CHECK((Fq(1) - q * q) / (Fq(1) - q) == Fq(1) + q);
    CHECK_THROWS_AS(Fq(1) / Fq(), qtl::DivisionByZero);
    CHECK_THROWS_AS(Fq(3).inv() * Fq(0).inv(), qtl::DivisionByZero);
}

TEST_CASE("pow") {
    Fq x = (Fq(1) + Fq::upow(1));
    CHECK(x.pow(0).isOne());
    CHECK(x.pow(3) == x * x * x);
    CHECK(x.pow(-2) == (x * x).inv());
}

TEST_CASE("reduced normalized representation makes equality structural") {
    // (u^2 - 1)/(u - 1) must reduce to u + 1
    Fq a(LaurentPoly::canonicalize({{2, 1}, {0, -1}}), LaurentPoly::canonicalize({{1, 1}, {0, -1}}));
    Fq b(LaurentPoly::canonicalize({{1, 1}, {0, 1}}), LaurentPoly(mpq_class(1)));
    CHECK(a == b);
    CHECK(a.den().isOne());
    // scaling numerator and denominator together changes nothing
    Fq c(LaurentPoly::canonicalize({{4, -2}, {2, 2}}),
         LaurentPoly::canonicalize({{3, -2}, {2, 2}}));
    Fq d(LaurentPoly::monomial(2), LaurentPoly::monomial(1));
    CHECK(c == d + Fq(1));  // c reduces to u + 1 and d to u
    CHECK((Fq(LaurentPoly::canonicalize({{1, 1}, {0, -1}})) /
           Fq(LaurentPoly::canonicalize({{1, 1}, {0, -1}}))).isOne());
}

TEST_CASE("field axioms on sampled elements") {
    auto xs = sampleElems();
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const Fq &a = xs[i], &b = xs[j];
            CHECK(a + b == b + a);
            CHECK(a * b == b * a);
            if (!b.isZero()) CHECK((a / b) * b == a);
            const Fq& c = xs[(i + j) % xs.size()];
            CHECK((a + b) + c == a + (b + c));
            CHECK((a * b) * c == a * (b * c));
            CHECK(a * (b + c) == a * b + a * c);
        }
    for (const Fq& a : xs) {
        CHECK((a + (-a)).isZero());
        if (!a.isZero()) CHECK((a * a.inv()).isOne());
    }
}

TEST_CASE("string round trip and parse conveniences") {
    Fq x(LaurentPoly::canonicalize({{0, 1}, {-4, mpq_class(-3, 2)}}),
         LaurentPoly::canonicalize({{0, 1}, {2, 1}}));
    CHECK(x.str() == "(-3/2*u^-4 + 1)/(1 + u^2)");
    CHECK(Fq::parse(x.str()) == x);
    CHECK(Fq::parse("q^2") == Fq::qpow(2));
    CHECK(Fq::parse("1/2") == Fq(mpq_class(1, 2)));
    CHECK(Fq::parse("(1 - q)*(1 + q)") == Fq(1) - Fq::qpow(2));
    for (const Fq& a : sampleElems()) CHECK(Fq::parse(a.str()) == a);
}

TEST_CASE("fromReduced matches the checked constructor on coprime input") {
    LaurentPoly n = LaurentPoly::canonicalize({{1, 1}, {0, 1}});
    LaurentPoly d = LaurentPoly::canonicalize({{1, 1}, {0, -1}});
    CHECK(Fq::fromReduced(n, d) == Fq(n, d));
}

}  // TEST_SUITE
