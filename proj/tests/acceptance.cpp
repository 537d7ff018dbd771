#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "oracle.hpp"
#include "qtl/config.hpp"
#include "qtl/isomap.hpp"
#include "qtl/quasifin.hpp"
#include "qtl/ztwo.hpp"

using qtl::Character;
using qtl::EvalModuleSpec;
using qtl::ExactField;
using qtl::ExpPolyDataEven;
using qtl::ExpPolyDataOdd;
using qtl::Fq;
using qtl::GradingBasis;
using qtl::L0Module;
using qtl::LElem;
using qtl::LKey;
using qtl::PrimeField;
using qtl::SubmoduleSpecW;
using qtl::TruncationParams;

namespace {

void report(int n, const std::string& what, bool ok) {
    std::cout << "criterion " << n << " (" << what << "): " << (ok ? "PASS" : "FAIL")
              << std::endl;
}

ExpPolyDataEven twoRootData() {
    ExpPolyDataEven d;
    d.roots = {Fq(1), Fq(-1)};
    d.coeffs.push_back({std::vector<Fq>{Fq(1)}, std::vector<Fq>{Fq(mpq_class(1, 2))}});
    d.coeffs.push_back({std::vector<Fq>{Fq(1)}, std::vector<Fq>{Fq(mpq_class(1, 2))}});
    return d;
}

L0Module twoRootTop() {
    return qtl::moduleFromCharacter(qtl::psiFromExpPolyEven(twoRootData(), GradingBasis{}));
}

L0Module evalTop(long d) {
    GradingBasis bas{{1, 0}, {1, 1}};
    ExpPolyDataOdd data;
    data.roots = {Fq(1)};
    data.coeffs = {{Fq(1)}};
    EvalModuleSpec spec{{Fq(1)}, {d}, qtl::psiFromExpPolyOdd(data, bas)};
    return qtl::buildEvalModule(spec, bas, 8);
}

std::vector<LKey> torusBox(long b) {
    std::vector<LKey> keys;
    for (long n1 = -b; n1 <= b; ++n1)
        for (long n2 = -b; n2 <= b; ++n2)
            for (int i = 0; i <= 1; ++i) {
                LKey k = LKey::torus(i, {n1, n2});
                if (!k.isForbidden()) keys.push_back(k);
            }
    return keys;
}

bool jacobiZero(const LKey& a, const LKey& b, const LKey& c) {
    LElem x = LElem::single(a), y = LElem::single(b), z = LElem::single(c);
    LElem s = qtl::bracketL(x, qtl::bracketL(y, z)) + qtl::bracketL(y, qtl::bracketL(z, x)) +
              qtl::bracketL(z, qtl::bracketL(x, y));
    return s.isZero();
}

/// monic expansion of prod (x - roots[r])^{mult[r]}
std::vector<Fq> monicProduct(const std::vector<Fq>& roots, const std::vector<long>& mult) {
    std::vector<Fq> p{Fq(1)};
    for (std::size_t r = 0; r < roots.size(); ++r)
        for (long m = 0; m < mult[r]; ++m) {
            std::vector<Fq> next(p.size() + 1);
            for (std::size_t i = 0; i < p.size(); ++i) {
                next[i + 1] += p[i];
                next[i] -= roots[r] * p[i];
            }
            p = std::move(next);
        }
    return p;
}

mpz_class factorial(long n) {
    mpz_class r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

std::string readFile(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("criterion-1") {
    bool ok = true;
    std::vector<LKey> keys = torusBox(2);
    for (const LKey& a : keys)
        for (const LKey& b : keys) {
            LElem ab = qtl::bracketL(LElem::single(a), LElem::single(b));
            LElem ba = qtl::bracketL(LElem::single(b), LElem::single(a));
            if (!(ab + ba).isZero()) ok = false;
        }
    for (const LKey& a : keys)
        for (const LKey& b : keys)
            for (const LKey& c : keys)
                if (!jacobiZero(a, b, c)) ok = false;
    std::mt19937 rng(0);
    std::uniform_int_distribution<long> idx(-5, 5);
    std::uniform_int_distribution<int> par(0, 1);
    int done = 0;
    while (done < 200) {
        LKey a = LKey::torus(par(rng), {idx(rng), idx(rng)});
        LKey b = LKey::torus(par(rng), {idx(rng), idx(rng)});
        LKey c = LKey::torus(par(rng), {idx(rng), idx(rng)});
        if (a.isForbidden() || b.isForbidden() || c.isForbidden()) continue;
        ++done;
        if (!jacobiZero(a, b, c)) ok = false;
    }
    report(1, "skew-symmetry and Jacobi, exact", ok);
    CHECK(ok);
}

TEST_CASE("criterion-2") {
    qtl::HomReport rep = qtl::verifyPhiTau(3);
    bool ok = rep.failures.empty() && rep.injectivityRank == rep.injectivityExpected &&
              rep.checkedPairs > 0;
    report(2, "matrix-form isomorphism on the box", ok);
    CHECK(ok);
}

TEST_CASE("criterion-3") {
    bool ok = true;
    // even case: degree-0 brackets stay on the central line m21 c1 + m22 c2
    for (const GradingBasis& bas : {GradingBasis{}, GradingBasis{{1, 1}, {2, 1}}}) {
        const long m21 = bas.m2.first, m22 = bas.m2.second;
        for (long k1 = -3; k1 <= 3; ++k1)
            for (long k2 = -3; k2 <= 3; ++k2)
                for (int i = 0; i <= 1; ++i)
                    for (int j = 0; j <= 1; ++j) {
                        LKey a = LKey::torus(i, bas.lattice(0, k1));
                        LKey b = LKey::torus(j, bas.lattice(0, k2));
                        if (a.isForbidden() || b.isForbidden()) continue;
                        LElem r = qtl::bracketL(LElem::single(a), LElem::single(b));
                        for (const auto& [k, c] : r.terms)
                            if (!k.isCentral()) ok = false;
                        if (!(r.coeff(LKey::c1()) * Fq(m22) - r.coeff(LKey::c2()) * Fq(m21))
                                 .isZero())
                            ok = false;
                    }
    }
    // odd case: the affine map preserves brackets and the two halves commute
    GradingBasis odd{{0, 1}, {1, 0}};
    if (!qtl::verifyPhiAff(3, odd).pass()) ok = false;
    for (long j = -3; j <= 3; ++j) {
        if (j == 0) continue;
        LElem a = LElem::single(LKey::torus(0, odd.lattice(0, 2 * j)));
        for (long l = -3; l <= 3; ++l) {
            LElem b1 = LElem::single(LKey::torus(1, odd.lattice(0, l)));
            LElem b2 = LElem::single(LKey::torus(0, odd.lattice(0, 2 * l + 1)));
            if (!qtl::bracketL(a, b1).isZero() || !qtl::bracketL(a, b2).isZero()) ok = false;
        }
    }
    report(3, "degree-0 structure, both parities", ok);
    CHECK(ok);
}

TEST_CASE("criterion-4") {
    bool ok = true;
    L0Module top = twoRootTop();
    PrimeField FP;
    std::vector<std::vector<long>> tables;
    for (long K : {4L, 6L, 8L})
        tables.push_back(qtl::buildHwModule(FP, top, top.basis, {K, K, 3}).dims());
    if (tables[0] != tables[1] || tables[1] != tables[2]) ok = false;
    if (tables[0] != oracle::hwDims(top, {4, 4, 3})) ok = false;
    if (tables[0].size() != 4 || tables[0][1] > 4) ok = false;
    ExactField FE;
    auto exact = qtl::buildHwModule(FE, top, top.basis, {4, 4, 3}).dims();
    if (exact != tables[0]) ok = false;
    report(4, "graded dimensions vs reference, both backends", ok);
    CHECK(ok);
}

TEST_CASE("criterion-5") {
    bool ok = true;
    std::mt19937 rng(0);
    const std::vector<Fq> pool = {Fq(2),          Fq(3),           Fq(mpq_class(1, 2)),
                                  Fq::qpow(1),    Fq::qpow(-1),    Fq(-1),
                                  -Fq::qpow(1),   Fq(5)};
    std::uniform_int_distribution<int> nr(1, 3), dg(0, 2), cf(1, 4);
    auto randCoeffs = [&](int deg, bool forceLead) {
        std::vector<Fq> c;
        for (int i = 0; i <= deg; ++i) c.push_back(Fq(cf(rng)));
        if (!forceLead) c.back() = Fq(cf(rng) - 1);  // may drop the top term
        if (forceLead && c.back().isZero()) c.back() = Fq(1);
        return c;
    };
    for (int trial = 0; trial < 20 && ok; ++trial) {
        const bool oddCase = trial % 2 == 1;
        const int n = nr(rng);
        std::vector<Fq> roots;
        std::vector<long> mult;
        std::vector<int> degs;
        {
            std::vector<Fq> shuffled = pool;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            for (int r = 0; r < n; ++r) {
                roots.push_back(shuffled[static_cast<std::size_t>(r)]);
                degs.push_back(dg(rng));
                mult.push_back(degs.back() + 1);
            }
        }
        const std::vector<Fq> expect = monicProduct(roots, mult);
        const long order = static_cast<long>(expect.size()) - 1;
        std::optional<std::vector<Fq>> raw;
        bool verdictOk = false;
        if (!oddCase) {
            GradingBasis bas;
            ExpPolyDataEven data;
            data.roots = roots;
            for (int r = 0; r < n; ++r)
                data.coeffs.push_back({randCoeffs(degs[static_cast<std::size_t>(r)], true),
                                       randCoeffs(degs[static_cast<std::size_t>(r)], false)});
            Character chi = qtl::psiFromExpPolyEven(data, bas);
            raw = qtl::recurrenceDetectRaw(qtl::deriveSequence(chi, 10), 9);
            verdictOk = qtl::verdictEven(chi, 9, 10).quasifinite;
        } else {
            GradingBasis bas{{1, 0}, {1, 1}};
            ExpPolyDataOdd data;
            data.roots = roots;
            for (int r = 0; r < n; ++r)
                data.coeffs.push_back(randCoeffs(degs[static_cast<std::size_t>(r)], true));
            EvalModuleSpec spec{{Fq(1)}, {1}, qtl::psiFromExpPolyOdd(data, bas)};
            raw = qtl::recurrenceDetectRaw(qtl::deriveSequence(spec.psiA, bas, 10), 9);
            verdictOk = qtl::verdictOdd(spec, bas, 9, 10).quasifinite;
        }
        if (!verdictOk || !raw || static_cast<long>(raw->size()) - 1 != order || *raw != expect)
            ok = false;
    }
    // factorial growth must stay undecided within the window
    {
        GradingBasis bas;
        const long range = 5;
        std::map<std::pair<int, long>, Fq> vals;
        for (long i = -range; i <= range; ++i)
            for (int j = 0; j <= 1; ++j) {
                Fq target(mpq_class(factorial(i + range)));
                if (i == 0) {
                    if (j == 1) vals[{1, 0}] = target * Fq(mpq_class(1, 2));
                    continue;
                }
                Fq pref = Fq(1) - Fq(j == 1 ? -1 : 1) * Fq::qpow(i);
                vals[{j, i}] = target / pref;
            }
        Character chi =
            qtl::characterFromWindow(bas, vals, Fq(mpq_class(factorial(range))));
        qtl::Verdict v = qtl::verdictEven(chi, 4, range);
        if (v.quasifinite || v.certificate.has_value()) ok = false;
    }
    report(5, "recurrence round-trip and factorial window", ok);
    CHECK(ok);
}

TEST_CASE("criterion-6") {
    ExactField F;
    auto mod = qtl::buildHwModule(F, twoRootTop(), GradingBasis{}, {4, 4, 3});
    qtl::GrowthReport rep = qtl::growthCheck(mod);
    bool ok = !rep.trivial && rep.pass && rep.witnessRank.size() == 3;
    for (std::size_t n = 0; ok && n < rep.witnessRank.size(); ++n)
        if (rep.witnessRank[n] < static_cast<long>(n) + 1) ok = false;
    for (long n = 1; n <= 3; ++n)
        if (mod.dimAt(n) < n) ok = false;
    report(6, "unbounded growth with exact witnesses", ok);
    CHECK(ok);
}

TEST_CASE("criterion-7") {
    bool ok = true;
    PrimeField FP;
    auto mod = qtl::buildHwModule(FP, twoRootTop(), GradingBasis{}, {4, 4, 3});
    if (qtl::integrabilityProbe(mod, {-1, 0}, +1, 0, 3).has_value()) ok = false;
    if (qtl::integrabilityProbe(mod, {-1, 0}, -1, 0, 3).has_value()) ok = false;
    ExactField FE;
    L0Module ev = evalTop(2);
    qtl::Matrix<Fq> E = ev.torusAct(0, 1);
    qtl::Matrix<Fq> O = ev.torusAct(1, 1);
    for (std::size_t i = 0; i < E.a.size(); ++i) E.a[i] -= O.a[i];
    bool nonzero = false;
    for (const auto& x : E.a) nonzero = nonzero || !x.isZero();
    if (!nonzero) ok = false;
    for (const auto& x : matMul(FE, E, E).a)
        if (!x.isZero()) ok = false;
    report(7, "non-nilpotent probes vs nilpotent evaluation raise", ok);
    CHECK(ok);
}

TEST_CASE("criterion-8") {
    bool ok = true;
    GradingBasis bas{{1, 0}, {1, 1}};
    qtl::OddPsi zero{[](long) { return Fq(); }, Fq()};
    const std::vector<Fq> muPool = {Fq(1), Fq::qpow(2), Fq(2)};
    std::vector<EvalModuleSpec> specs;
    for (long d1 = 1; d1 <= 3; ++d1) {
        specs.push_back({{muPool[0]}, {d1}, zero});
        for (long d2 = 1; d2 <= 3; ++d2)
            specs.push_back({{muPool[0], muPool[1]}, {d1, d2}, zero});
    }
    std::mt19937 rng(0);
    std::uniform_int_distribution<int> deg(1, 4), cf(-3, 3);
    long mismatches = 0;
    for (const auto& spec : specs) {
        L0Module mod = qtl::buildEvalModule(spec, bas, 8);
        for (int t = 0; t < 20; ++t) {
            std::vector<Fq> b;
            const int n = deg(rng);
            for (int i = 0; i < n; ++i) b.push_back(Fq(cf(rng)));
            const bool want = qtl::remark26Divisibility(spec, b);
            for (int k = 0; k <= 1; ++k)
                if (qtl::remark26Check(mod, b, k) != want) ++mismatches;
        }
    }
    ok = mismatches == 0;
    report(8, "annihilation check equals divisibility", ok);
    CHECK(ok);
}

TEST_CASE("criterion-9") {
    bool ok = true;
    L0Module top = twoRootTop();
    for (long res : {0L, 1L}) {
        qtl::WReport rep = qtl::verifyW(top, SubmoduleSpecW{2, {{res}}}, 6);
        if (!rep.invariant || !rep.irreducibleAtWindow) ok = false;
    }
    qtl::WReport full = qtl::verifyW(top, SubmoduleSpecW::full(1), 6);
    if (!full.invariant || full.irreducibleAtWindow) ok = false;
    PrimeField F;
    for (const SubmoduleSpecW& w :
         {SubmoduleSpecW{2, {{0}}}, SubmoduleSpecW{2, {{1}}}, SubmoduleSpecW::full(1)}) {
        auto z = qtl::extendZ2(F, top, w, 3, {4, 4, 2});
        auto grid = qtl::z2Dims(z);
        for (const auto& row : grid)
            for (long d : row)
                if (d < 0) ok = false;
        if (grid != oracle::z2Grid(top, w, 3, {4, 4, 2})) ok = false;
    }
    report(9, "loop submodule patterns and quotient grids", ok);
    CHECK(ok);
}

TEST_CASE("criterion-10") {
    namespace fs = std::filesystem;
    const std::string bin = QTL_BIN_PATH;
    const std::string cfg = QTL_CONFIG_DIR;
    auto runSuite = [&](const fs::path& dir) -> std::optional<std::string> {
        fs::remove_all(dir);
        fs::create_directories(dir);
        const std::string d = dir.string();
        const std::vector<std::string> cmds = {
            bin + " verify jacobi --box 2 --random 100 --range 5 --seed 9 --out " + d +
                "/jacobi.json",
            bin + " bracket \"t0^1 t^(1,0)\" \"t0^1 t^(-1,0)\"",
            bin + " dims --config " + cfg + "/remark52.cfg --backend prime --seed 9 --depth 2 "
                "--out " + d + "/dims.csv",
            bin + " quasifinite --config " + cfg + "/remark52.cfg --out " + d + "/qf.json",
            bin + " z2-dims --config " + cfg + "/remark52_w_even.cfg --backend prime --seed 9 "
                "--loop 3 --out " + d + "/z2.csv",
            bin + " probe --config " + cfg + "/remark52.cfg --m \"(-1,0)\" --sign 1 --power 2 "
                "--vindex 0 --depth 2 --out " + d + "/probe.json",
        };
        for (const std::string& c : cmds)
            if (std::system((c + " >> " + d + "/stdout.txt 2>&1").c_str()) != 0)
                return std::nullopt;
        std::string all;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) all += f.filename().string() + "\n" + readFile(f) + "\n";
        return all;
    };
    auto a = runSuite("acceptance_run_a");
    auto b = runSuite("acceptance_run_b");
    bool ok = a.has_value() && b.has_value() && !a->empty() && *a == *b;
    report(10, "byte-identical reports under a fixed seed", ok);
    CHECK(ok);
}
