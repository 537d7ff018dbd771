#include "qtl/isomap.hpp"

namespace qtl {

namespace {

TauElem phiTauKey(const LKey& k) {
    TauElem r;
    switch (k.kind) {
        case LKey::C1:
            r.add(TauKey::k1(), Fq(1));
            return r;
        case LKey::C2:
            r.add(TauKey::k2(), Fq(2));
            return r;
        default:
            break;
    }
    const long n1 = k.m.first, n2 = k.m.second;
    const Fq sign(k.i == 1 ? -1 : 1);
    if (((n1 % 2) + 2) % 2 == 1) {
        // t0^i t1^{2m1+1} t2^{m2}
        const long m1 = (n1 - 1) / 2, m2 = n2;
        r.add(TauKey::mat(1, 2, {m1, m2}), sign * Fq::qpow(-m2));
        r.add(TauKey::mat(2, 1, {m1 + 1, m2}), Fq(1));
    } else {
        // t0^i t1^{2m1} t2^{m2}
        const long m1 = n1 / 2, m2 = n2;
        r.add(TauKey::mat(1, 1, {m1, m2}), sign);
        r.add(TauKey::mat(2, 2, {m1, m2}), Fq::qpow(-m2));
        if (k.i == 1 && m1 == 0 && m2 == 0) r.add(TauKey::k1(), Fq(mpq_class(1, 2)));
    }
    return r;
}

}  // namespace

TauElem phiTau(const LElem& x) {
    TauElem r;
    for (const auto& [k, c] : x.terms) r += phiTauKey(k).scaled(c);
    return r;
}

AffElem phiAff(const LElem& x, const GradingBasis& basis) {
    if (basis.m21Even()) throw NotInDomain("affine map needs odd m21");
    AffElem r;
    // central part must lie on the m21 c1 + m22 c2 direction
    const Fq a = x.coeff(LKey::c1()), b = x.coeff(LKey::c2());
    const Fq alpha(basis.alpha());
    const Fq compBeta = (a * Fq(basis.m2.second) - b * Fq(basis.m2.first)) / alpha;
    if (!compBeta.isZero())
        throw NotInDomain("central component along m11 c1 + m12 c2 not allowed");
    const Fq compK = (Fq(basis.m1.first) * b - Fq(basis.m1.second) * a) / alpha;
    r.add(AffKey::k(), compK);
    for (const auto& [k, c] : x.terms) {
        if (k.isCentral()) continue;
        auto [g, loop] = basis.coords(k.m);
        if (g != 0) throw NotInDomain("element has nonzero grade: " + k.str());
        const long mm = basis.m2.second * basis.m2.first;  // m22 * m21
        if (loop % 2 == 0) {
            const long j = loop / 2;
            if (k.i != 1) throw NotInDomain("t0^0 t^{2j m2} lies outside the affine part");
            // The K correction enters only at j = 0 and with the opposite
            // sign to the loop part; any other choice breaks bracket
            // preservation on pairs whose product lands on t0^1 t^0.
            const Fq f = -(Fq::upow(-4 * j * j * mm)) * c;
            r.add(AffKey::h(j), f);
            if (j == 0) r.add(AffKey::k(), -f * Fq(mpq_class(1, 2)));
        } else {
            const long j = (loop - 1) / 2;  // loop = 2j+1, exact for odd loop
            const Fq f = Fq::upow(-(2 * j + 1) * (2 * j + 1) * mm) * c;
            r.add(AffKey::e12(j), k.i == 1 ? -f : f);
            r.add(AffKey::e21(j + 1), f);
        }
    }
    return r;
}

std::vector<LKey> lKeyBox(long box) {
    std::vector<LKey> keys{LKey::c1(), LKey::c2()};
    for (long n1 = -box; n1 <= box; ++n1)
        for (long n2 = -box; n2 <= box; ++n2)
            for (int i = 0; i <= 1; ++i) {
                LKey k = LKey::torus(i, {n1, n2});
                if (!k.isForbidden()) keys.push_back(k);
            }
    return keys;
}

std::vector<LKey> affDomainBox(long box, const GradingBasis& basis) {
    std::vector<LKey> keys;
    for (long j = -box; j <= box; ++j) {
        LKey h = LKey::torus(1, basis.lattice(0, j));
        if (!h.isForbidden()) keys.push_back(h);
    }
    for (long j = -box; j <= box; ++j) {
        LKey e = LKey::torus(0, basis.lattice(0, 2 * j + 1));
        if (!e.isForbidden()) keys.push_back(e);
    }
    return keys;
}

HomReport verifyPhiTau(long box) {
    return verifyHom<LKey, TauKey>([](const LElem& e) { return phiTau(e); }, bracketL,
                                   bracketTau, lKeyBox(box));
}

HomReport verifyPhiAff(long box, const GradingBasis& basis) {
    std::vector<LElem> elems;
    std::vector<std::string> labels;
    for (const auto& k : affDomainBox(box, basis)) {
        elems.push_back(LElem::single(k));
        labels.push_back(k.str());
    }
    elems.push_back(basis.centerM2());
    labels.push_back("m21*c1 + m22*c2");
    return verifyHom<LKey, AffKey>([&basis](const LElem& e) { return phiAff(e, basis); },
                                   bracketL, bracketAff, elems, labels);
}

}  // namespace qtl
