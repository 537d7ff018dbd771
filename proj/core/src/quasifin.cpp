#include "qtl/quasifin.hpp"

#include "qtl/matrix.hpp"
#include "qtl/scalar.hpp"

namespace qtl {

SequenceWindow deriveSequence(const Character& psi, long range) {
    if (!psi.basis.m21Even())
        throw std::invalid_argument("deriveSequence(Character) needs even m21");
    SequenceWindow w;
    w.even = true;
    w.range = range;
    const long alpha = psi.basis.alpha();
    const long ww = psi.basis.m2.first * psi.basis.m2.second;
    for (long i = -range; i <= range; ++i)
        for (int j = 0; j <= 1; ++j) {
            if (i == 0) {
                w.f[{0, 0}] = psi.beta();
                w.f[{1, 0}] = Fq(2) * psi.torus(1, 0);
                break;
            }
            Fq pref = (Fq(1) - Fq(j == 1 ? -1 : 1) * Fq::qpow(i * alpha)) * Fq::upow(i * i * ww);
            w.f[{j, i}] = pref * psi.torus(j, i);
        }
    return w;
}

SequenceWindow deriveSequence(const OddPsi& psi, const GradingBasis& basis, long range) {
    if (basis.m21Even()) throw std::invalid_argument("deriveSequence(OddPsi) needs odd m21");
    SequenceWindow w;
    w.even = false;
    w.range = range;
    const long alpha = basis.alpha();
    const long ww = basis.m2.first * basis.m2.second;
    for (long i = -range; i <= range; ++i) {
        if (i == 0) {
            w.f[{0, 0}] = psi.beta;
            continue;
        }
        Fq pref = (Fq(1) - Fq::qpow(2 * i * alpha)) * Fq::qpow(2 * i * i * ww);
        w.f[{0, i}] = pref * psi.value(i);
    }
    return w;
}

std::optional<std::vector<Fq>> recurrenceDetectRaw(const SequenceWindow& w, long maxOrder) {
    if (2 * w.range + 1 < 2 * maxOrder + 2)
        throw std::invalid_argument("sequence window too short for requested order");
    ExactField F;
    const int parities = w.even ? 2 : 1;
    for (long n = 0; n <= maxOrder; ++n) {
        // rows: sum_i b_i f_{j,k+i} = 0 for k = -range .. range-n, both j
        const long kLo = -w.range, kHi = w.range - n;
        const std::size_t rows = static_cast<std::size_t>(parities * (kHi - kLo + 1));
        Matrix<Fq> A(rows, static_cast<std::size_t>(n) + 1);
        std::size_t r = 0;
        for (int j = 0; j < parities; ++j)
            for (long k = kLo; k <= kHi; ++k, ++r)
                for (long i = 0; i <= n; ++i) A.at(r, static_cast<std::size_t>(i)) = w.at(j, k + i);
        // normalize b_n = 1: solve the first n columns against -last column
        Matrix<Fq> Ahead(rows, static_cast<std::size_t>(n));
        std::vector<Fq> rhs(rows);
        for (std::size_t rr = 0; rr < rows; ++rr) {
            for (std::size_t c = 0; c + 1 <= static_cast<std::size_t>(n); ++c)
                Ahead.at(rr, c) = A.at(rr, c);
            rhs[rr] = -A.at(rr, static_cast<std::size_t>(n));
        }
        auto sol = solve(F, Ahead, rhs);
        if (!sol) continue;
        std::vector<Fq> b = *sol;
        b.push_back(Fq(1));
        // solve() leaves free coordinates at zero; re-verify and demand b_0 != 0
        bool ok = !b[0].isZero();
        for (std::size_t rr = 0; ok && rr < rows; ++rr) {
            Fq s;
            for (std::size_t c = 0; c < b.size(); ++c) s += A.at(rr, c) * b[c];
            ok = s.isZero();
        }
        if (ok) return b;
    }
    return std::nullopt;
}

std::optional<RecurrencePoly> recurrenceDetect(const SequenceWindow& w, long maxOrder,
                                               const GradingBasis& basis) {
    auto b = recurrenceDetectRaw(w, maxOrder);
    if (!b) return std::nullopt;
    RecurrencePoly P;
    const long ww = basis.m2.first * basis.m2.second;
    for (std::size_t i = 0; i < b->size(); ++i) {
        const long ii = static_cast<long>(i);
        P.a.push_back((*b)[i] * (w.even ? Fq::upow(ii * ii * ww) : Fq::qpow(2 * ii * ii * ww)));
    }
    return P;
}

bool checkConditionEven(const Character& psi, const RecurrencePoly& P, long window) {
    const GradingBasis& basis = psi.basis;
    if (!basis.m21Even()) throw std::invalid_argument("checkConditionEven needs even m21");
    const long alpha = basis.alpha();
    const long ww = basis.m2.first * basis.m2.second;
    const long n = P.order();
    for (long k = -window; k <= window; ++k)
        for (int j = 0; j <= 1; ++j) {
            Fq s;
            if (j == 0 && -k >= 0 && -k <= n)
                s += P.a[static_cast<std::size_t>(-k)] * Fq::upow(-2 * k * k * ww) * psi.beta();
            for (long i = 0; i <= n; ++i) {
                const long t = k + i;
                if (j == 0 && t == 0) continue;  // prefactor 1 - q^0 vanishes
                Fq pref = Fq(1) - Fq(j == 1 ? -1 : 1) * Fq::qpow(t * alpha);
                s += P.a[static_cast<std::size_t>(i)] * Fq::upow(2 * k * i * ww) * pref *
                     psi.torus(j, t);
            }
            if (!s.isZero()) return false;
        }
    return true;
}

bool checkConditionOdd(const EvalModuleSpec& spec, const RecurrencePoly& P,
                       const GradingBasis& basis, long window) {
    if (basis.m21Even()) throw std::invalid_argument("checkConditionOdd needs odd m21");
    const long alpha = basis.alpha();
    const long ww = basis.m2.first * basis.m2.second;
    const long n = P.order();
    L0Module mod = buildEvalModule(spec, basis, window);
    const std::size_t D = static_cast<std::size_t>(mod.dim);
    auto zero = [&](const Matrix<Fq>& M) {
        for (const auto& v : M.a)
            if (!v.isZero()) return false;
        return true;
    };
    for (long k = -window; k <= window; ++k) {
        // scalar condition on the Heisenberg part
        Fq s;
        if (-k >= 0 && -k <= n)
            s += P.a[static_cast<std::size_t>(-k)] * Fq::qpow(-4 * k * k * ww) * spec.psiA.beta;
        for (long i = 0; i <= n; ++i) {
            const long t = k + i;
            if (t == 0) continue;  // prefactor 1 - q^0 vanishes
            s += P.a[static_cast<std::size_t>(i)] * Fq::qpow(4 * k * i * ww) *
                 (Fq(1) - Fq::qpow(2 * t * alpha)) * spec.psiA.value(t);
        }
        if (!s.isZero()) return false;
        // matrix annihilation conditions, for P and its q^alpha shift
        for (int shift = 0; shift <= 1; ++shift) {
            Matrix<Fq> odd0(D, D), odd1(D, D);
            for (long i = 0; i <= n; ++i) {
                Fq c = P.a[static_cast<std::size_t>(i)];
                if (shift) c *= Fq::qpow(2 * i * alpha);
                Matrix<Fq> a1 = mod.torusAct(0, 2 * k + 1 + 2 * i);
                Matrix<Fq> a2 = mod.torusAct(1, k + 2 * i);
                const Fq f1 = c * Fq::qpow((2 * k + 1) * 2 * i * ww);
                const Fq f2 = c * Fq::qpow(k * 2 * i * ww);
                for (std::size_t p = 0; p < odd0.a.size(); ++p) {
                    odd0.a[p] += a1.a[p] * f1;
                    odd1.a[p] += a2.a[p] * f2;
                }
            }
            if (!zero(odd0) || !zero(odd1)) return false;
        }
    }
    return true;
}

Verdict verdictEven(const Character& psi, long maxOrder, long range) {
    Verdict v;
    v.maxOrder = maxOrder;
    v.range = range;
    SequenceWindow w = deriveSequence(psi, range);
    auto P = recurrenceDetect(w, maxOrder, psi.basis);
    if (!P) return v;
    v.certificate = P;
    v.conditionHolds = checkConditionEven(psi, *P, range - P->order());
    v.quasifinite = v.conditionHolds;
    return v;
}

Verdict verdictOdd(const EvalModuleSpec& spec, const GradingBasis& basis, long maxOrder,
                   long range) {
    Verdict v;
    v.maxOrder = maxOrder;
    v.range = range;
    SequenceWindow w = deriveSequence(spec.psiA, basis, range);
    auto b = recurrenceDetectRaw(w, maxOrder);
    if (!b) return v;
    // the certificate must also kill the sl2 tensor slots: multiply in the
    // factors (x - mu_j)(x - q^{2 alpha} mu_j) for every nontrivial slot
    // (ordinary convolution; the quadratic rescale below restores the torus
    // normalization)
    std::vector<Fq> B = *b;
    const long alpha = basis.alpha();
    for (std::size_t s = 0; s < spec.mu.size(); ++s) {
        if (spec.dims[s] < 2) continue;
        for (const Fq& root : {spec.mu[s], Fq::qpow(2 * alpha) * spec.mu[s]}) {
            std::vector<Fq> next(B.size() + 1);
            for (std::size_t i = 0; i < B.size(); ++i) {
                next[i + 1] += B[i];
                next[i] -= root * B[i];
            }
            B = std::move(next);
        }
    }
    RecurrencePoly P;
    const long ww = basis.m2.first * basis.m2.second;
    for (std::size_t i = 0; i < B.size(); ++i) {
        const long ii = static_cast<long>(i);
        P.a.push_back(B[i] * Fq::qpow(2 * ii * ii * ww));
    }
    v.certificate = P;
    v.conditionHolds = checkConditionOdd(spec, P, basis, range - P.order());
    v.quasifinite = v.conditionHolds;
    return v;
}

}  // namespace qtl
