#include "qtl/ztwo.hpp"

#include <sstream>

namespace qtl {

namespace {

/// Incremental echelon span over Fq with unit-vector membership queries.
struct Span {
    std::vector<std::vector<Fq>> vecs;
    std::vector<std::size_t> prow;

    bool insert(std::vector<Fq> v) {
        for (std::size_t e = 0; e < vecs.size(); ++e) {
            const Fq f = v[prow[e]];
            if (f.isZero()) continue;
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * vecs[e][i];
        }
        std::size_t pr = v.size();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].isZero()) {
                pr = i;
                break;
            }
        if (pr == v.size()) return false;
        const Fq inv = v[pr].inv();
        for (std::size_t i = 0; i < v.size(); ++i) v[i] *= inv;
        vecs.push_back(std::move(v));
        prow.push_back(pr);
        return true;
    }

    bool contains(std::vector<Fq> v) {
        for (std::size_t e = 0; e < vecs.size(); ++e) {
            const Fq f = v[prow[e]];
            if (f.isZero()) continue;
            for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * vecs[e][i];
        }
        for (const Fq& x : v)
            if (!x.isZero()) return false;
        return true;
    }
};

}  // namespace

WReport verifyW(const L0Module& top, const SubmoduleSpecW& w, long window) {
    w.validate(top.dim);
    WReport rep;
    const long gw = std::max<long>(2, w.modulus);
    if (window < 3 * gw) throw std::invalid_argument("window too small for the pattern");
    const long dim = top.dim;

    // window model: coordinates indexed by (slot b, exponent r), |r| <= window
    const long width = 2 * window + 1;
    auto flat = [&](long b, long r) {
        return static_cast<std::size_t>(b * width + (r + window));
    };
    const std::size_t total = static_cast<std::size_t>(dim * width);

    // cached generator matrices on the base fiber
    std::map<std::pair<int, long>, Matrix<Fq>> gens;
    for (int j = 0; j <= 1; ++j)
        for (long k = -gw; k <= gw; ++k) {
            if (j == 0 && k == 0) continue;  // excluded key
            gens[{j, k}] = top.torusAct(j, k);
        }

    // invariance: windowed generators keep pattern cells inside the pattern
    for (const auto& [jk, m] : gens) {
        for (long b = 0; b < dim; ++b)
            for (long r = -window; r <= window; ++r) {
                if (!w.allows(static_cast<std::size_t>(b), r)) continue;
                const long rt = r + jk.second;
                if (std::labs(rt) > window) continue;
                for (long bt = 0; bt < dim; ++bt) {
                    if (m.at(static_cast<std::size_t>(bt), static_cast<std::size_t>(b)).isZero())
                        continue;
                    if (!w.allows(static_cast<std::size_t>(bt), rt)) {
                        rep.invariant = false;
                        std::ostringstream os;
                        os << "t0^" << jk.first << " t^(" << jk.second
                           << " m2) maps slot " << b << " at x^" << r << " onto slot " << bt
                           << " at x^" << rt << " outside the pattern";
                        rep.violations.push_back(os.str());
                    }
                }
            }
    }

    // irreducibility within the window: the orbit span of every pattern basis
    // vector must contain every pattern cell of the core region
    const long core = window - 2 * gw;
    auto applyGen = [&](const Matrix<Fq>& m, long k, const std::vector<Fq>& v) {
        std::vector<Fq> out(total, Fq());
        for (long b = 0; b < dim; ++b)
            for (long r = -window; r <= window; ++r) {
                const Fq& c = v[flat(b, r)];
                if (c.isZero()) continue;
                const long rt = r + k;
                if (std::labs(rt) > window) continue;
                for (long bt = 0; bt < dim; ++bt) {
                    const Fq& e = m.at(static_cast<std::size_t>(bt), static_cast<std::size_t>(b));
                    if (!e.isZero()) out[flat(bt, rt)] += e * c;
                }
            }
        return out;
    };
    for (long b0 = 0; b0 < dim && rep.irreducibleAtWindow; ++b0)
        for (long r0 = -core; r0 <= core && rep.irreducibleAtWindow; ++r0) {
            if (!w.allows(static_cast<std::size_t>(b0), r0)) continue;
            Span span;
            std::vector<Fq> seed(total, Fq());
            seed[flat(b0, r0)] = Fq(1);
            span.insert(seed);
            bool grew = true;
            while (grew) {
                grew = false;
                const std::size_t have = span.vecs.size();
                for (std::size_t e = 0; e < have; ++e)
                    for (const auto& [jk, m] : gens)
                        if (span.insert(applyGen(m, jk.second, span.vecs[e]))) grew = true;
            }
            for (long b = 0; b < dim && rep.irreducibleAtWindow; ++b)
                for (long r = -core; r <= core; ++r) {
                    if (!w.allows(static_cast<std::size_t>(b), r)) continue;
                    std::vector<Fq> unit(total, Fq());
                    unit[flat(b, r)] = Fq(1);
                    if (!span.contains(std::move(unit))) {
                        rep.irreducibleAtWindow = false;
                        std::ostringstream os;
                        os << "orbit of slot " << b0 << " at x^" << r0
                           << " misses slot " << b << " at x^" << r;
                        rep.violations.push_back(os.str());
                        break;
                    }
                }
        }
    return rep;
}

}  // namespace qtl
