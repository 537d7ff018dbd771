#ifndef QTL_SCALAR_HPP
#define QTL_SCALAR_HPP

#include "qtl/field.hpp"
#include "qtl/prime.hpp"

namespace qtl {

/// Field policy for the exact backend: scalars are elements of F itself.
struct ExactField {
    using Elem = Fq;

    Elem zero() const { return Fq(); }
    Elem one() const { return Fq(1); }
    Elem fromInt(long n) const { return Fq(n); }
    Elem upow(long n) const { return Fq::upow(n); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem div(const Elem& a, const Elem& b) const { return a / b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const { return a.inv(); }
    bool isZero(const Elem& a) const { return a.isZero(); }
    Elem embed(const Fq& x) const { return x; }
};

/// Field policy for the prime backend: scalars live in Z/p with u already
/// specialized to spec.uValue.
struct PrimeField {
    using Elem = std::uint64_t;

    PrimeSpec spec;

    explicit PrimeField(PrimeSpec s = PrimeSpec::fromSeed(0)) : spec(s) {}

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem fromInt(long n) const {
        long r = n % static_cast<long>(spec.modulus);
        if (r < 0) r += static_cast<long>(spec.modulus);
        return static_cast<Elem>(r);
    }
    Elem upow(long n) const {
        return n >= 0 ? powmod(spec.uValue, static_cast<std::uint64_t>(n), spec.modulus)
                      : invmod(powmod(spec.uValue, static_cast<std::uint64_t>(-n), spec.modulus),
                               spec.modulus);
    }
    Elem add(Elem a, Elem b) const { return (a + b) % spec.modulus; }
    Elem sub(Elem a, Elem b) const { return (a + spec.modulus - b) % spec.modulus; }
    Elem mul(Elem a, Elem b) const { return mulmod(a, b, spec.modulus); }
    Elem div(Elem a, Elem b) const { return mulmod(a, invmod(b, spec.modulus), spec.modulus); }
    Elem neg(Elem a) const { return a == 0 ? 0 : spec.modulus - a; }
    Elem inv(Elem a) const { return invmod(a, spec.modulus); }
    bool isZero(Elem a) const { return a == 0; }
    Elem embed(const Fq& x) const { return specialize(x, spec); }
};

}  // namespace qtl

#endif
