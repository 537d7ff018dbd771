#include <doctest.h>

#include "qtl/l0mod.hpp"
#include "qtl/scalar.hpp"

using qtl::EvalModuleSpec;
using qtl::ExactField;
using qtl::Fq;
using qtl::GradingBasis;
using qtl::L0Module;
using qtl::LElem;
using qtl::LKey;
using qtl::Matrix;

namespace {

bool isZeroM(const Matrix<Fq>& m) {
    for (const auto& v : m.a)
        if (!v.isZero()) return false;
    return true;
}

Matrix<Fq> comm(const Matrix<Fq>& a, const Matrix<Fq>& b) {
    ExactField F;
    Matrix<Fq> ab = matMul(F, a, b), ba = matMul(F, b, a);
    for (std::size_t i = 0; i < ab.a.size(); ++i) ab.a[i] -= ba.a[i];
    return ab;
}

qtl::ExpPolyDataEven remark52Data() {
    qtl::ExpPolyDataEven d;
    d.roots = {Fq(1), Fq(-1)};
    d.coeffs.push_back({std::vector<Fq>{Fq(1)}, std::vector<Fq>{Fq(mpq_class(1, 2))}});
    d.coeffs.push_back({std::vector<Fq>{Fq(1)}, std::vector<Fq>{Fq(mpq_class(1, 2))}});
    return d;
}

}  // namespace

TEST_SUITE("l0mod") {

TEST_CASE("sl2Irrep realizes the standard relations") {
    CHECK_THROWS(qtl::sl2Irrep(0));
    auto t1 = qtl::sl2Irrep(1);
    CHECK(isZeroM(t1.e12));
    CHECK(isZeroM(t1.e21));
    CHECK(isZeroM(t1.h));

    auto t2 = qtl::sl2Irrep(2);
    CHECK(t2.h.at(0, 0) == Fq(1));
    CHECK(t2.h.at(1, 1) == Fq(-1));
    CHECK(t2.e12.at(0, 1) == Fq(1));
    CHECK(t2.e21.at(1, 0) == Fq(1));

    auto t3 = qtl::sl2Irrep(3);
    CHECK(t3.h.at(0, 0) == Fq(2));
    CHECK(t3.h.at(1, 1) == Fq(0));
    CHECK(t3.h.at(2, 2) == Fq(-2));
    for (long d = 1; d <= 4; ++d) {
        auto t = qtl::sl2Irrep(d);
        CHECK(comm(t.e12, t.e21).a == t.h.a);
        Matrix<Fq> he = comm(t.h, t.e12);
        for (std::size_t i = 0; i < he.a.size(); ++i)
            CHECK(he.a[i] == t.e12.a[i] * Fq(2));
        Matrix<Fq> hf = comm(t.h, t.e21);
        for (std::size_t i = 0; i < hf.a.size(); ++i)
            CHECK(hf.a[i] == t.e21.a[i] * Fq(-2));
    }
}

TEST_CASE("evaluation module anchors") {
    GradingBasis bas{{0, 1}, {1, 0}};
    EvalModuleSpec trivial{{Fq(1)}, {1}, {}};
    trivial.psiA.value = [](long) { return Fq(); };
    L0Module m1 = qtl::buildEvalModule(trivial, bas, 4);
    CHECK(m1.dim == 1);
    for (long k = -4; k <= 4; ++k)
        for (int i = 0; i <= 1; ++i) {
            if (i == 0 && k == 0) continue;
            CHECK(isZeroM(m1.torusAct(i, k)));
        }

    EvalModuleSpec s2{{Fq(1)}, {2}, {}};
    s2.psiA.value = [](long) { return Fq(); };
    L0Module m2 = qtl::buildEvalModule(s2, bas, 4);
    Matrix<Fq> a = m2.torusAct(1, 0);  // t0^1 t^0 acts as -H
    CHECK(a.at(0, 0) == Fq(-1));
    CHECK(a.at(1, 1) == Fq(1));
    CHECK(a.at(0, 1).isZero());

    EvalModuleSpec s3{{Fq(1)}, {3}, {}};
    s3.psiA.value = [](long) { return Fq(); };
    L0Module m3 = qtl::buildEvalModule(s3, bas, 4);
    auto t3 = qtl::sl2Irrep(3);
    Matrix<Fq> b = m3.torusAct(0, 1);  // u^{-m22 m21} (E12 + E21); m22 m21 = 0 here
    for (std::size_t i = 0; i < b.a.size(); ++i)
        CHECK(b.a[i] == t3.e12.a[i] + t3.e21.a[i]);
}

TEST_CASE("evaluation module respects the degree-0 brackets") {
    GradingBasis bas{{1, 0}, {1, 1}};
    EvalModuleSpec s{{Fq(1)}, {2}, {}};
    s.psiA.value = [](long) { return Fq(); };
    L0Module mod = qtl::buildEvalModule(s, bas, 8);
    auto keys = qtl::enumerateGraded(0, 3, bas);
    for (const auto& a : keys)
        for (const auto& b : keys) {
            LElem br = qtl::bracketL(LElem::single(a), LElem::single(b));
            Matrix<Fq> lhs = mod.actElem(br);
            Matrix<Fq> rhs = comm(mod.act(a), mod.act(b));
            for (std::size_t i = 0; i < lhs.a.size(); ++i) CHECK(lhs.a[i] == rhs.a[i]);
        }
    // the central direction m21 c1 + m22 c2 acts as zero
    CHECK(isZeroM(mod.actElem(bas.centerM2())));
}

TEST_CASE("exp-polynomial character anchors") {
    GradingBasis bas;  // ((1,0),(0,1)), m21 = 0 even
    qtl::Character chi = qtl::psiFromExpPolyEven(remark52Data(), bas);
    CHECK(chi.psi(bas.beta()) == Fq(2));
    CHECK(chi.torus(1, 0) == Fq(mpq_class(1, 2)));
    CHECK(chi.psi(bas.centerM2()).isZero());
    for (long i : {-3L, -1L, 1L, 3L}) CHECK(chi.torus(0, i).isZero());
    // ((-1)^2 + 1) / (1 - q^2) at j = 0, i = 2; the u-weight is trivial here
    CHECK(chi.torus(0, 2) == Fq(2) / (Fq(1) - Fq::qpow(2)));
    CHECK(chi.torus(1, 2) == Fq(1) / (Fq(1) + Fq::qpow(2)));
    CHECK_THROWS(chi.torus(0, 0));

    qtl::ExpPolyDataEven zero;
    qtl::Character z = qtl::psiFromExpPolyEven(zero, bas);
    CHECK(z.psi(bas.beta()).isZero());
    for (long i : {-2L, 1L, 4L}) CHECK(z.torus(0, i).isZero());
}

TEST_CASE("exp-polynomial data for odd parity") {
    GradingBasis bas{{0, 1}, {1, 0}};
    qtl::ExpPolyDataOdd zero;
    qtl::OddPsi pz = qtl::psiFromExpPolyOdd(zero, bas);
    CHECK(pz.beta.isZero());

    qtl::ExpPolyDataOdd one{{Fq(1)}, {{Fq(1)}}};
    CHECK(qtl::psiFromExpPolyOdd(one, bas).beta == Fq(1));

    GradingBasis bas2{{1, 0}, {1, 1}};  // alpha = 1
    qtl::ExpPolyDataOdd dq{{Fq::qpow(1)}, {{Fq(1)}}};
    qtl::OddPsi pq = qtl::psiFromExpPolyOdd(dq, bas2);
    const long mm = bas2.m2.first * bas2.m2.second;
    CHECK(pq.value(1) == Fq::qpow(1) / ((Fq(1) - Fq::qpow(2)) * Fq::qpow(2 * mm)));
}

TEST_CASE("window characters fail loudly off the window") {
    GradingBasis bas;
    std::map<std::pair<int, long>, Fq> vals{{{1, 0}, Fq(5)}, {{0, 1}, Fq(7)}};
    qtl::Character chi = qtl::characterFromWindow(bas, vals, Fq(3));
    CHECK(chi.torus(1, 0) == Fq(5));
    CHECK(chi.torus(0, 1) == Fq(7));
    CHECK(chi.psi(bas.beta()) == Fq(3));
    CHECK_THROWS(chi.torus(0, 2));
}

TEST_CASE("annihilation criterion equals the divisibility predicate") {
    GradingBasis bas{{0, 1}, {1, 0}};
    // b represents x^2 - x = x (x - 1): divisible by (x - mu) for mu = 1
    EvalModuleSpec s{{Fq(1)}, {2}, {}};
    s.psiA.value = [](long) { return Fq(); };
    L0Module mod = qtl::buildEvalModule(s, bas, 12);
    std::vector<Fq> bDiv{Fq(-1), Fq(1)};
    CHECK(qtl::remark26Divisibility(s, bDiv));
    CHECK(qtl::remark26Check(mod, bDiv, 0));
    CHECK(qtl::remark26Check(mod, bDiv, 1));
    std::vector<Fq> bConst{Fq(1)};
    CHECK(!qtl::remark26Divisibility(s, bConst));
    CHECK(!qtl::remark26Check(mod, bConst, 0));

    EvalModuleSpec t{{Fq(1)}, {1}, {}};
    t.psiA.value = [](long) { return Fq(); };
    L0Module triv = qtl::buildEvalModule(t, bas, 12);
    CHECK(qtl::remark26Check(triv, bConst, 0));
    CHECK(qtl::remark26Check(triv, bConst, 1));
    CHECK(qtl::remark26Divisibility(t, bConst));
}

TEST_CASE("window actions of a small evaluation module span the matrix algebra") {
    GradingBasis bas{{0, 1}, {1, 0}};
    ExactField F;
    for (long d = 1; d <= 3; ++d) {
        EvalModuleSpec s{{Fq(2)}, {d}, {}};
        s.psiA.value = [](long) { return Fq(); };
        L0Module mod = qtl::buildEvalModule(s, bas, 4);
        std::vector<Matrix<Fq>> gens;
        for (long k = -3; k <= 3; ++k)
            for (int i = 0; i <= 1; ++i) {
                if (i == 0 && k == 0) continue;
                gens.push_back(mod.torusAct(i, k));
            }
        // close an independent set under products until the span saturates
        std::size_t n = static_cast<std::size_t>(d);
        auto spanRank = [&](const std::vector<Matrix<Fq>>& ms) {
            Matrix<Fq> span(n * n, ms.size());
            for (std::size_t c = 0; c < ms.size(); ++c) span.setCol(c, ms[c].a);
            return rank(F, span);
        };
        std::vector<Matrix<Fq>> alg;
        Matrix<Fq> id(n, n);
        for (std::size_t i = 0; i < n; ++i) id.at(i, i) = Fq(1);
        alg.push_back(id);
        for (const auto& g : gens) {
            alg.push_back(g);
            if (spanRank(alg) < alg.size()) alg.pop_back();
        }
        bool grew = true;
        while (grew && alg.size() < n * n) {
            grew = false;
            const std::size_t cur = alg.size();
            for (std::size_t a = 0; a < cur; ++a)
                for (std::size_t b = 0; b < cur; ++b) {
                    alg.push_back(matMul(F, alg[a], alg[b]));
                    if (spanRank(alg) < alg.size())
                        alg.pop_back();
                    else
                        grew = true;
                }
        }
        CHECK(alg.size() == n * n);
    }
}

TEST_CASE("character module pushes psi through matrices of size one") {
    GradingBasis bas;
    qtl::Character chi = qtl::psiFromExpPolyEven(remark52Data(), bas);
    L0Module mod = qtl::moduleFromCharacter(chi);
    CHECK(mod.dim == 1);
    CHECK(mod.cc1 == Fq(2));
    CHECK(mod.cc2.isZero());
    CHECK(mod.act(LKey::torus(1, {0, 0})).at(0, 0) == Fq(mpq_class(1, 2)));
    // one-dimensionality: psi kills every windowed commutator
    auto keys = qtl::enumerateGraded(0, 3, bas);
    for (const auto& a : keys)
        for (const auto& b : keys)
            CHECK(chi.psi(qtl::bracketL(LElem::single(a), LElem::single(b))).isZero());
}

TEST_CASE("spec validation") {
    EvalModuleSpec bad{{Fq(1), Fq(1)}, {1, 1}, {}};
    CHECK_THROWS(bad.validate());
    EvalModuleSpec zero{{Fq()}, {1}, {}};
    CHECK_THROWS(zero.validate());
    EvalModuleSpec neg{{Fq(1)}, {0}, {}};
    CHECK_THROWS(neg.validate());
}

}  // TEST_SUITE
