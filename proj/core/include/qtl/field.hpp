#ifndef QTL_FIELD_HPP
#define QTL_FIELD_HPP

#include <stdexcept>
#include <string>

#include "qtl/laurent.hpp"

namespace qtl {

struct DivisionByZero : std::runtime_error {
    DivisionByZero() : std::runtime_error("division by zero in F") {}
};

/// Element of the fraction field F = Q(u) of Laurent polynomials in u, with
/// u^2 = q.  Always stored reduced (gcd of num and den is a unit) and
/// normalized (den has min exponent 0, unit content, positive lowest
/// coefficient), so structural equality is field equality.
class Fq {
public:
    Fq() : num_(), den_(mpq_class(1)) {}
    Fq(const mpq_class& c) : num_(c), den_(mpq_class(1)) {}
    Fq(long c) : num_(mpq_class(c)), den_(mpq_class(1)) {}
    Fq(LaurentPoly num, LaurentPoly den);
    explicit Fq(const LaurentPoly& p) : num_(p), den_(mpq_class(1)) {}

    /// u^n; upow(2k) is q^k.
    static Fq upow(long n) { return Fq(LaurentPoly::monomial(n)); }
    /// Wraps an already-coprime num/den pair, skipping the gcd; only the
    /// cheap canonical normalization runs.  The caller owns the coprimality.
    static Fq fromReduced(LaurentPoly num, LaurentPoly den);
    /// q^n = u^{2n}; n may be a half-integer times 2 at call sites.
    static Fq qpow(long n) { return upow(2 * n); }

    bool isZero() const { return num_.isZero(); }
    bool isOne() const { return num_.isOne() && den_.isOne(); }
    const LaurentPoly& num() const { return num_; }
    const LaurentPoly& den() const { return den_; }

    Fq operator-() const;
    Fq operator+(const Fq& o) const;
    Fq operator-(const Fq& o) const;
    Fq operator*(const Fq& o) const;
    Fq operator/(const Fq& o) const;
    Fq inv() const;
    Fq pow(long n) const;

    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator-=(const Fq& o) { return *this = *this - o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }
    Fq& operator/=(const Fq& o) { return *this = *this / o; }

    bool operator==(const Fq& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Fq& o) const { return !(*this == o); }
    bool operator<(const Fq& o) const;  // arbitrary total order for containers

    /// Canonical string, e.g. "(-3/2*u^-4 + 1)/(1 + u^2)"; bare numerator
    /// when the denominator is 1.
    std::string str() const;

    /// Parse the grammar produced by str(), plus the conveniences "q^k"
    /// (= u^{2k}) and arbitrary +,-,*,/,^ expressions with parentheses.
    static Fq parse(const std::string& s);

private:
    void reduce();
    LaurentPoly num_, den_;
};

inline Fq operator*(long c, const Fq& x) { return Fq(c) * x; }

}  // namespace qtl

#endif
