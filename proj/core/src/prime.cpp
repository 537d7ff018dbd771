#include "qtl/prime.hpp"

#include <random>

namespace qtl {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    // m is prime
    if (a % m == 0) throw SpecializationVanish();
    return powmod(a, m - 2, m);
}

bool PrimeSpec::guardHolds() const {
    if (uValue == 0) return false;
    std::uint64_t x = uValue % modulus;
    std::uint64_t p = 1;
    for (long n = 1; n <= guardBound; ++n) {
        p = mulmod(p, x, modulus);
        if (p == 1) return false;
    }
    return true;
}

PrimeSpec PrimeSpec::fromSeed(std::uint64_t seed) {
    PrimeSpec s;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(2, s.modulus - 2);
    do {
        s.uValue = dist(rng);
    } while (!s.guardHolds());
    return s;
}

namespace {

std::uint64_t evalRational(const mpq_class& c, std::uint64_t m) {
    mpz_class num = c.get_num() % mpz_class(static_cast<unsigned long>(m));
    mpz_class den = c.get_den() % mpz_class(static_cast<unsigned long>(m));
    if (num < 0) num += static_cast<unsigned long>(m);
    std::uint64_t n = num.get_ui();
    std::uint64_t d = den.get_ui();
    return mulmod(n, invmod(d, m), m);
}

std::uint64_t evalPoly(const LaurentPoly& p, const PrimeSpec& s) {
    std::uint64_t acc = 0;
    for (const auto& [e, c] : p.terms()) {
        std::uint64_t ue = e >= 0 ? powmod(s.uValue, static_cast<std::uint64_t>(e), s.modulus)
                                  : invmod(powmod(s.uValue, static_cast<std::uint64_t>(-e), s.modulus),
                                           s.modulus);
        acc = (acc + mulmod(evalRational(c, s.modulus), ue, s.modulus)) % s.modulus;
    }
    return acc;
}

}  // namespace

std::uint64_t specialize(const Fq& x, const PrimeSpec& s) {
    if (x.isZero()) return 0;
    std::uint64_t den = evalPoly(x.den(), s);
    if (den == 0) throw SpecializationVanish();
    return mulmod(evalPoly(x.num(), s), invmod(den, s.modulus), s.modulus);
}

}  // namespace qtl
