#ifndef QTL_PRIME_HPP
#define QTL_PRIME_HPP

#include <cstdint>
#include <stdexcept>

#include "qtl/field.hpp"

namespace qtl {

/// Thrown when a denominator vanishes at the chosen residue; callers retry
/// with a fresh uValue.
struct SpecializationVanish : std::runtime_error {
    SpecializationVanish() : std::runtime_error("denominator vanishes at specialized u") {}
};

/// Parameters of the prime-field backend: arithmetic mod `modulus` with u
/// mapped to `uValue`.  The genericity guard promises uValue^n != 1 for
/// 1 <= n <= guardBound, so the structural denominators of the theory
/// (differences of small u powers) cannot vanish accidentally.
struct PrimeSpec {
    std::uint64_t modulus = 2305843009213693951ULL;  // 2^61 - 1
    std::uint64_t uValue = 0;
    long guardBound = 10000;

    /// Deterministically draw a guarded uValue from a seed; skips candidates
    /// failing the guard.
    static PrimeSpec fromSeed(std::uint64_t seed);
    bool guardHolds() const;
};

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);
std::uint64_t invmod(std::uint64_t a, std::uint64_t m);

/// Image of x under u -> uValue in Z/modulus.  Throws SpecializationVanish
/// if the reduced denominator evaluates to zero.
std::uint64_t specialize(const Fq& x, const PrimeSpec& s);

}  // namespace qtl

#endif
