#ifndef QTL_LAURENT_HPP
#define QTL_LAURENT_HPP

#include <gmpxx.h>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qtl {

/// Sparse Laurent polynomial in one variable u with exact rational
/// coefficients.  Stored in canonical form: no zero coefficients, the zero
/// polynomial is the empty map.
class LaurentPoly {
public:
    using TermMap = std::map<long, mpq_class>;

    LaurentPoly() = default;
    explicit LaurentPoly(const mpq_class& c);
    static LaurentPoly monomial(long exp, const mpq_class& c = 1);

    /// Canonical sparse form of an arbitrary term list (duplicates summed,
    /// zeros dropped).  Idempotent.
    static LaurentPoly canonicalize(const std::vector<std::pair<long, mpq_class>>& terms);

    bool isZero() const { return terms_.empty(); }
    bool isOne() const;
    const TermMap& terms() const { return terms_; }

    long minExp() const;  // requires nonzero
    long maxExp() const;  // requires nonzero
    long degreeSpan() const { return isZero() ? 0 : maxExp() - minExp(); }

    mpq_class coeff(long exp) const;

    LaurentPoly operator-() const;
    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly shifted(long k) const;  // multiply by u^k
    LaurentPoly scaled(const mpq_class& c) const;

    bool operator==(const LaurentPoly& o) const { return terms_ == o.terms_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }

    /// Terms by ascending exponent, e.g. "-3/2*u^-4 + 1 + u^2"; "0" when zero.
    std::string str() const;

    /// gcd of two Laurent polynomials, up to units (monomials).  Result is
    /// normalized with min exponent 0, integer content 1 and positive lowest
    /// coefficient.
    static LaurentPoly gcd(const LaurentPoly& a, const LaurentPoly& b);

    /// Exact division; aborts if remainder is nonzero.
    static LaurentPoly divExact(const LaurentPoly& a, const LaurentPoly& b);

    /// Divide num and den exponents/content so that den has min exponent 0,
    /// integer content 1 and positive lowest coefficient.
    static void normalizePair(LaurentPoly& num, LaurentPoly& den);

private:
    void insertTerm(long exp, const mpq_class& c);
    TermMap terms_;
};

}  // namespace qtl

#endif
