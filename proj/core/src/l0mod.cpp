#include "qtl/l0mod.hpp"

#include <map>
#include <memory>

namespace qtl {

Sl2Triple sl2Irrep(long d) {
    if (d <= 0) throw std::invalid_argument("sl2Irrep needs d >= 1");
    std::size_t n = static_cast<std::size_t>(d);
    Sl2Triple t{Matrix<Fq>(n, n), Matrix<Fq>(n, n), Matrix<Fq>(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        t.h.at(k, k) = Fq(d - 1 - 2 * static_cast<long>(k));
        if (k + 1 < n) {
            t.e21.at(k + 1, k) = Fq(1);
            long kk = static_cast<long>(k) + 1;
            t.e12.at(k, k + 1) = Fq(kk * (d - kk));
        }
    }
    return t;
}

Fq Character::psiKey(const LKey& k) const {
    switch (k.kind) {
        case LKey::C1: return cc1;
        case LKey::C2: return cc2;
        default: break;
    }
    auto [g, loop] = basis.coords(k.m);
    if (g != 0) throw std::invalid_argument("psi applied to key of nonzero grade: " + k.str());
    return torus(k.i, loop);
}

Fq Character::psi(const LElem& e) const {
    Fq r;
    for (const auto& [k, c] : e.terms) r += psiKey(k) * c;
    return r;
}

void EvalModuleSpec::validate() const {
    if (mu.empty() || mu.size() != dims.size())
        throw std::invalid_argument("mu and dims must be nonempty and equally long");
    for (std::size_t a = 0; a < mu.size(); ++a) {
        if (mu[a].isZero()) throw std::invalid_argument("mu entries must be nonzero");
        if (dims[a] < 1) throw std::invalid_argument("dims entries must be positive");
        for (std::size_t b = a + 1; b < mu.size(); ++b)
            if (mu[a] == mu[b]) throw std::invalid_argument("mu entries must be distinct");
    }
}

Matrix<Fq> L0Module::act(const LKey& k) const {
    Matrix<Fq> m(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    switch (k.kind) {
        case LKey::C1:
            for (std::size_t r = 0; r < m.rows; ++r) m.at(r, r) = cc1;
            return m;
        case LKey::C2:
            for (std::size_t r = 0; r < m.rows; ++r) m.at(r, r) = cc2;
            return m;
        default: break;
    }
    auto [g, loop] = basis.coords(k.m);
    if (g != 0)
        throw std::invalid_argument("L0 action applied to key of nonzero grade: " + k.str());
    return torusAct(k.i, loop);
}

Matrix<Fq> L0Module::actElem(const LElem& e) const {
    Matrix<Fq> m(static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    for (const auto& [k, c] : e.terms) {
        Matrix<Fq> a = act(k);
        for (std::size_t p = 0; p < m.a.size(); ++p) m.a[p] += a.a[p] * c;
    }
    return m;
}

namespace {

Fq polyAt(const std::vector<Fq>& coeffs, long i) {
    Fq x(i), r, p(1);
    for (const auto& c : coeffs) {
        r += c * p;
        p *= x;
    }
    return r;
}

void checkParity(const GradingBasis& basis, bool wantOdd, const char* who) {
    if (basis.m21Even() == wantOdd)
        throw std::invalid_argument(std::string(who) + ": basis m21 parity mismatch");
}

}  // namespace

Character psiFromExpPolyEven(const ExpPolyDataEven& data, const GradingBasis& basis) {
    checkParity(basis, false, "psiFromExpPolyEven");
    if (data.roots.size() != data.coeffs.size())
        throw std::invalid_argument("roots/coeffs size mismatch");
    Character chi;
    chi.basis = basis;
    Fq psiBeta;
    for (const auto& c : data.coeffs)
        if (!c[0].empty()) psiBeta += c[0][0];
    const long alpha = basis.alpha();
    const long w = basis.m2.first * basis.m2.second;  // m21 m22
    chi.torus = [data, alpha, w](int j, long i) -> Fq {
        if (i == 0) {
            if (j == 0)
                throw std::invalid_argument("psi undefined on the excluded key t0^0 t^0");
            Fq half(mpq_class(1, 2));
            Fq s;
            for (const auto& c : data.coeffs)
                if (!c[1].empty()) s += c[1][0];
            return half * s;
        }
        Fq num;
        for (std::size_t r = 0; r < data.roots.size(); ++r)
            num += polyAt(data.coeffs[r][j], i) * data.roots[r].pow(i);
        Fq den = (Fq(1) - Fq(j == 1 ? -1 : 1) * Fq::qpow(i * alpha)) * Fq::upow(i * i * w);
        return num / den;
    };
    chi.cc1 = Fq(basis.m2.second) * psiBeta / Fq(alpha);
    chi.cc2 = -(Fq(basis.m2.first) * psiBeta) / Fq(alpha);
    return chi;
}

OddPsi psiFromExpPolyOdd(const ExpPolyDataOdd& data, const GradingBasis& basis) {
    checkParity(basis, true, "psiFromExpPolyOdd");
    if (data.roots.size() != data.coeffs.size())
        throw std::invalid_argument("roots/coeffs size mismatch");
    OddPsi psi;
    for (const auto& c : data.coeffs)
        if (!c.empty()) psi.beta += c[0];
    const long alpha = basis.alpha();
    const long w = basis.m2.first * basis.m2.second;
    psi.value = [data, alpha, w](long i) -> Fq {
        if (i == 0) throw std::invalid_argument("psiA value at i = 0 is psi(beta)");
        Fq num;
        for (std::size_t r = 0; r < data.roots.size(); ++r)
            num += polyAt(data.coeffs[r], i) * data.roots[r].pow(i);
        Fq den = (Fq(1) - Fq::qpow(2 * i * alpha)) * Fq::qpow(2 * i * i * w);
        return num / den;
    };
    return psi;
}

Character characterFromWindow(const GradingBasis& basis,
                              const std::map<std::pair<int, long>, Fq>& values,
                              const Fq& psiBeta) {
    Character chi;
    chi.basis = basis;
    chi.torus = [values](int j, long k) -> Fq {
        auto it = values.find({j, k});
        if (it == values.end())
            throw std::out_of_range("psi window has no value at (" + std::to_string(j) + "," +
                                    std::to_string(k) + ")");
        return it->second;
    };
    const Fq alpha(basis.alpha());
    chi.cc1 = Fq(basis.m2.second) * psiBeta / alpha;
    chi.cc2 = -(Fq(basis.m2.first) * psiBeta) / alpha;
    return chi;
}

namespace {

// X lifted to tensor slot s of the product module
Matrix<Fq> slotLift(const std::vector<long>& dims, std::size_t slot, const Matrix<Fq>& X) {
    std::size_t total = 1;
    for (long d : dims) total *= static_cast<std::size_t>(d);
    Matrix<Fq> M(total, total);
    std::size_t before = 1, after = 1;
    for (std::size_t s = 0; s < slot; ++s) before *= static_cast<std::size_t>(dims[s]);
    for (std::size_t s = slot + 1; s < dims.size(); ++s)
        after *= static_cast<std::size_t>(dims[s]);
    std::size_t d = static_cast<std::size_t>(dims[slot]);
    for (std::size_t b = 0; b < before; ++b)
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) {
                if (X.at(r, c).isZero()) continue;
                for (std::size_t a = 0; a < after; ++a)
                    M.at((b * d + r) * after + a, (b * d + c) * after + a) = X.at(r, c);
            }
    return M;
}

}  // namespace

L0Module buildEvalModule(const EvalModuleSpec& spec, const GradingBasis& basis, long window) {
    checkParity(basis, true, "buildEvalModule");
    spec.validate();
    L0Module mod;
    mod.basis = basis;
    mod.oddCase = true;
    mod.dim = 1;
    for (long d : spec.dims) mod.dim *= d;
    const Fq alpha(basis.alpha());
    mod.cc1 = Fq(basis.m2.second) * spec.psiA.beta / alpha;
    mod.cc2 = -(Fq(basis.m2.first) * spec.psiA.beta) / alpha;

    auto lifted = std::make_shared<std::vector<Sl2Triple>>();
    for (std::size_t s = 0; s < spec.dims.size(); ++s) {
        Sl2Triple t = sl2Irrep(spec.dims[s]);
        lifted->push_back(Sl2Triple{slotLift(spec.dims, s, t.e12), slotLift(spec.dims, s, t.e21),
                                    slotLift(spec.dims, s, t.h)});
    }
    const long w = basis.m2.first * basis.m2.second;
    const long D = mod.dim;
    auto mu = spec.mu;
    auto psiA = spec.psiA;
    mod.torusAct = [lifted, mu, psiA, w, D](int i, long loop) -> Matrix<Fq> {
        std::size_t n = static_cast<std::size_t>(D);
        Matrix<Fq> M(n, n);
        if (loop % 2 == 0) {
            const long j = loop / 2;
            if (i == 0) {
                if (j == 0)
                    throw std::invalid_argument("excluded key t0^0 t^0 has no action");
                Fq v = psiA.value(j);
                for (std::size_t r = 0; r < n; ++r) M.at(r, r) = v;
                return M;
            }
            const Fq f = -Fq::upow(-4 * j * j * w);
            for (std::size_t s = 0; s < lifted->size(); ++s) {
                const Fq c = f * mu[s].pow(j);
                const Matrix<Fq>& H = (*lifted)[s].h;
                for (std::size_t p = 0; p < M.a.size(); ++p) M.a[p] += H.a[p] * c;
            }
            return M;
        }
        const long j = (loop - 1) / 2;  // loop = 2j+1, exact since loop is odd
        const Fq f = Fq::upow(-(2 * j + 1) * (2 * j + 1) * w);
        for (std::size_t s = 0; s < lifted->size(); ++s) {
            const Fq cUp = f * Fq(i == 1 ? -1 : 1) * mu[s].pow(j);
            const Fq cDn = f * mu[s].pow(j + 1);
            const Matrix<Fq>& E = (*lifted)[s].e12;
            const Matrix<Fq>& F = (*lifted)[s].e21;
            for (std::size_t p = 0; p < M.a.size(); ++p)
                M.a[p] += E.a[p] * cUp + F.a[p] * cDn;
        }
        return M;
    };
    (void)window;  // all actions are closed-form; nothing to precompute
    return mod;
}

L0Module moduleFromCharacter(const Character& chi) {
    checkParity(chi.basis, false, "moduleFromCharacter");
    L0Module mod;
    mod.basis = chi.basis;
    mod.oddCase = false;
    mod.dim = 1;
    mod.cc1 = chi.cc1;
    mod.cc2 = chi.cc2;
    auto torus = chi.torus;
    mod.torusAct = [torus](int i, long k) -> Matrix<Fq> {
        Matrix<Fq> M(1, 1);
        M.at(0, 0) = torus(i, k);
        return M;
    };
    return mod;
}

bool remark26Check(const L0Module& mod, const std::vector<Fq>& b, int k) {
    const std::size_t n = static_cast<std::size_t>(mod.dim);
    const long w = mod.basis.m2.second * mod.basis.m2.first;  // m22 m21
    Matrix<Fq> op1(n, n), op2(n, n);
    for (std::size_t idx = 0; idx < b.size(); ++idx) {
        const long i = static_cast<long>(idx) + 1;
        const Fq f1 = b[idx] * Fq::upow((2 * i + 1) * (2 * i + 1) * w);
        Matrix<Fq> a1 = mod.torusAct(k, 2 * i + 1);
        const Fq f2 = b[idx] * Fq::qpow(2 * i * i * w);
        Matrix<Fq> a2 = mod.torusAct(1, 2 * i);
        for (std::size_t p = 0; p < op1.a.size(); ++p) {
            op1.a[p] += a1.a[p] * f1;
            op2.a[p] += a2.a[p] * f2;
        }
    }
    for (const auto& v : op1.a)
        if (!v.isZero()) return false;
    for (const auto& v : op2.a)
        if (!v.isZero()) return false;
    return true;
}

bool remark26Divisibility(const EvalModuleSpec& spec, const std::vector<Fq>& b) {
    // B(mu_s) = sum_{i=1..n} b_i mu_s^i must vanish at every mu_s carried by
    // a slot of dimension >= 2 (the mu are distinct, so this is divisibility)
    for (std::size_t s = 0; s < spec.mu.size(); ++s) {
        if (spec.dims[s] < 2) continue;
        Fq val, p = spec.mu[s];
        for (const auto& bi : b) {
            val += bi * p;
            p *= spec.mu[s];
        }
        if (!val.isZero()) return false;
    }
    return true;
}

}  // namespace qtl
