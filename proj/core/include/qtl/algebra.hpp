#ifndef QTL_ALGEBRA_HPP
#define QTL_ALGEBRA_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "qtl/field.hpp"

namespace qtl {

using IntPair = std::pair<long, long>;

inline IntPair operator+(const IntPair& a, const IntPair& b) {
    return {a.first + b.first, a.second + b.second};
}
inline IntPair operator-(const IntPair& a) { return {-a.first, -a.second}; }

/// Basis key for L: the two central elements and the torus monomials
/// t0^i t^(n1,n2) with i a residue mod 2.  Torus(0,(0,0)) is excluded from
/// the basis; bracketL proves its coefficient always cancels.
struct LKey {
    enum Kind { C1, C2, Torus } kind = C1;
    int i = 0;  // residue in {0,1}, Torus only
    IntPair m{0, 0};

    static LKey c1() { return LKey{C1, 0, {0, 0}}; }
    static LKey c2() { return LKey{C2, 0, {0, 0}}; }
    static LKey torus(int i, IntPair m) { return LKey{Torus, ((i % 2) + 2) % 2, m}; }

    bool isCentral() const { return kind != Torus; }
    bool isForbidden() const { return kind == Torus && i == 0 && m == IntPair{0, 0}; }

    // centrals first, then (m lexicographic, i)
    auto cmpKey() const { return std::make_tuple(static_cast<int>(kind), m, i); }
    bool operator<(const LKey& o) const { return cmpKey() < o.cmpKey(); }
    bool operator==(const LKey& o) const { return cmpKey() == o.cmpKey(); }

    std::string str() const;
};

/// Basis key for tau: E_ij over the rank-2 torus plus two central elements.
struct TauKey {
    enum Kind { K1, K2, Mat } kind = K1;
    int i = 1, j = 1;  // matrix position, Mat only
    IntPair m{0, 0};

    static TauKey k1() { return TauKey{K1, 1, 1, {0, 0}}; }
    static TauKey k2() { return TauKey{K2, 1, 1, {0, 0}}; }
    static TauKey mat(int i, int j, IntPair m) { return TauKey{Mat, i, j, m}; }

    bool isCentral() const { return kind != Mat; }
    auto cmpKey() const { return std::make_tuple(static_cast<int>(kind), m, i, j); }
    bool operator<(const TauKey& o) const { return cmpKey() < o.cmpKey(); }
    bool operator==(const TauKey& o) const { return cmpKey() == o.cmpKey(); }

    std::string str() const;
};

/// Basis key for the affine algebra: loop generators and the central K.
struct AffKey {
    enum Kind { K, E12, E21, H } kind = K;
    long j = 0;  // loop degree, non-K only

    static AffKey k() { return AffKey{K, 0}; }
    static AffKey e12(long j) { return AffKey{E12, j}; }
    static AffKey e21(long j) { return AffKey{E21, j}; }
    static AffKey h(long j) { return AffKey{H, j}; }

    bool isCentral() const { return kind == K; }
    auto cmpKey() const { return std::make_tuple(static_cast<int>(kind), j); }
    bool operator<(const AffKey& o) const { return cmpKey() < o.cmpKey(); }
    bool operator==(const AffKey& o) const { return cmpKey() == o.cmpKey(); }

    std::string str() const;
};

/// Sparse linear combination of basis keys with F coefficients; zero
/// coefficients are never stored.
template <typename Key>
struct Element {
    std::map<Key, Fq> terms;

    bool isZero() const { return terms.empty(); }

    void add(const Key& k, const Fq& c) {
        if (c.isZero()) return;
        auto it = terms.find(k);
        if (it == terms.end()) {
            terms.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.isZero()) terms.erase(it);
        }
    }

    Element& operator+=(const Element& o) {
        for (const auto& [k, c] : o.terms) add(k, c);
        return *this;
    }

    Element operator+(const Element& o) const {
        Element r = *this;
        r += o;
        return r;
    }

    Element operator-(const Element& o) const { return *this + o.scaled(Fq(-1)); }

    Element scaled(const Fq& c) const {
        Element r;
        if (c.isZero()) return r;
        for (const auto& [k, co] : terms) r.terms.emplace(k, co * c);
        return r;
    }

    Fq coeff(const Key& k) const {
        auto it = terms.find(k);
        return it == terms.end() ? Fq() : it->second;
    }

    static Element single(const Key& k, const Fq& c = Fq(1)) {
        Element r;
        r.add(k, c);
        return r;
    }

    bool operator==(const Element& o) const { return terms == o.terms; }

    std::string str() const;
};

using LElem = Element<LKey>;
using TauElem = Element<TauKey>;
using AffElem = Element<AffKey>;

/// Z-basis (m1, m2) of the torus exponent lattice with determinant +-1.
struct GradingBasis {
    IntPair m1{1, 0}, m2{0, 1};

    long alpha() const { return m1.first * m2.second - m1.second * m2.first; }
    bool valid() const { return alpha() == 1 || alpha() == -1; }
    bool m21Even() const { return ((m2.first % 2) + 2) % 2 == 0; }
    /// beta = m11 c1 + m12 c2
    LElem beta() const;
    /// the other central direction m21 c1 + m22 c2
    LElem centerM2() const;
    /// exponent vector j*m1 + k*m2
    IntPair lattice(long j, long k) const {
        return {j * m1.first + k * m2.first, j * m1.second + k * m2.second};
    }
    /// inverse lattice coordinates (j, k) of an exponent vector
    std::pair<long, long> coords(IntPair n) const {
        long a = alpha();
        return {(n.first * m2.second - n.second * m2.first) / a,
                (m1.first * n.second - m1.second * n.first) / a};
    }
    std::string str() const;
    static GradingBasis parse(const std::string& s);  // "(m11,m12);(m21,m22)"
};

LElem bracketL(const LElem& x, const LElem& y);
TauElem bracketTau(const TauElem& x, const TauElem& y);
AffElem bracketAff(const AffElem& x, const AffElem& y);

long gradeOf(const LKey& k, const GradingBasis& basis);

/// Truncated basis of the graded piece L_j: centrals (j = 0 only, first),
/// then torus keys for k = -K..K, each parity i = 0 then 1, skipping the
/// forbidden key.
std::vector<LKey> enumerateGraded(long j, long K, const GradingBasis& basis);

/// Text forms used by the CLI, e.g. "t0^1 t^(1,0) + 2*c1", "E12(t^(0,1))",
/// "H(x^3) - K".
LElem parseLElem(const std::string& s);
TauElem parseTauElem(const std::string& s);
AffElem parseAffElem(const std::string& s);

}  // namespace qtl

#endif
