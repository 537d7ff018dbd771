#include "qtl/laurent.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace qtl {

LaurentPoly::LaurentPoly(const mpq_class& c) {
    if (c != 0) terms_[0] = c;
}

LaurentPoly LaurentPoly::monomial(long exp, const mpq_class& c) {
    LaurentPoly p;
    if (c != 0) p.terms_[exp] = c;
    return p;
}

LaurentPoly LaurentPoly::canonicalize(const std::vector<std::pair<long, mpq_class>>& terms) {
    LaurentPoly p;
    for (const auto& [e, c] : terms) p.insertTerm(e, c);
    return p;
}

void LaurentPoly::insertTerm(long exp, const mpq_class& c) {
    if (c == 0) return;
    auto it = terms_.find(exp);
    if (it == terms_.end()) {
        terms_.emplace(exp, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

bool LaurentPoly::isOne() const {
    return terms_.size() == 1 && terms_.begin()->first == 0 && terms_.begin()->second == 1;
}

long LaurentPoly::minExp() const {
    assert(!terms_.empty());
    return terms_.begin()->first;
}

long LaurentPoly::maxExp() const {
    assert(!terms_.empty());
    return terms_.rbegin()->first;
}

mpq_class LaurentPoly::coeff(long exp) const {
    auto it = terms_.find(exp);
    return it == terms_.end() ? mpq_class(0) : it->second;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly p;
    for (const auto& [e, c] : terms_) p.terms_[e] = -c;
    return p;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    LaurentPoly p = *this;
    for (const auto& [e, c] : o.terms_) p.insertTerm(e, c);
    return p;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
    LaurentPoly p = *this;
    for (const auto& [e, c] : o.terms_) p.insertTerm(e, -c);
    return p;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    LaurentPoly p;
    for (const auto& [e1, c1] : terms_)
        for (const auto& [e2, c2] : o.terms_) p.insertTerm(e1 + e2, c1 * c2);
    return p;
}

LaurentPoly LaurentPoly::shifted(long k) const {
    LaurentPoly p;
    for (const auto& [e, c] : terms_) p.terms_[e + k] = c;
    return p;
}

LaurentPoly LaurentPoly::scaled(const mpq_class& c) const {
    LaurentPoly p;
    if (c == 0) return p;
    for (const auto& [e, co] : terms_) p.terms_[e] = co * c;
    return p;
}

std::string LaurentPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        mpq_class a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        if (e == 0) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << "u^" << e;
        }
    }
    return os.str();
}

namespace {

// Ordinary polynomial view: coefficient vector indexed from 0 after shifting
// out the minimal exponent.
std::vector<mpq_class> toDense(const LaurentPoly& p) {
    std::vector<mpq_class> v(static_cast<size_t>(p.degreeSpan()) + 1, mpq_class(0));
    long lo = p.minExp();
    for (const auto& [e, c] : p.terms()) v[static_cast<size_t>(e - lo)] = c;
    return v;
}

LaurentPoly fromDense(const std::vector<mpq_class>& v) {
    std::vector<std::pair<long, mpq_class>> terms;
    for (size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0) terms.emplace_back(static_cast<long>(i), v[i]);
    return LaurentPoly::canonicalize(terms);
}

// Primitive integer coefficient vector: clear denominators and divide out
// the integer content, keeping the leading coefficient positive.
std::vector<mpz_class> toPrimitive(const std::vector<mpq_class>& v) {
    mpz_class l = 1;
    for (const auto& c : v) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> z(v.size());
    mpz_class g = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        z[i] = v[i].get_num() * (l / v[i].get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z[i].get_mpz_t());
    }
    if (g != 0)
        for (auto& c : z) c /= g;
    if (!z.empty() && z.back() < 0)
        for (auto& c : z) c = -c;
    return z;
}

void primitivize(std::vector<mpz_class>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
    if (v.empty()) return;
    mpz_class g = 0;
    for (const auto& c : v) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    for (auto& c : v) c /= g;
    if (v.back() < 0)
        for (auto& c : v) c = -c;
}

// Pseudo-remainder over Z: lead(b)^(deg a - deg b + 1) a mod b.
std::vector<mpz_class> pseudoRem(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    const mpz_class& lb = b.back();
    while (a.size() >= b.size() && !a.empty()) {
        mpz_class f = a.back();
        size_t off = a.size() - b.size();
        for (size_t i = 0; i + 1 < a.size(); ++i) a[i] *= lb;
        for (size_t i = 0; i + 1 < b.size(); ++i) a[off + i] -= f * b[i];
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

}  // namespace

LaurentPoly LaurentPoly::gcd(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.isZero() && b.isZero()) return LaurentPoly();
    std::vector<mpz_class> x, y;
    if (!a.isZero()) x = toPrimitive(toDense(a));
    if (!b.isZero()) y = toPrimitive(toDense(b));
    if (x.empty()) x.swap(y);
    // primitive PRS keeps the intermediate coefficients polynomial-sized
    while (!y.empty()) {
        auto r = pseudoRem(std::move(x), y);
        primitivize(r);
        x.swap(y);
        y.swap(r);
    }
    std::vector<std::pair<long, mpq_class>> terms;
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0) terms.emplace_back(static_cast<long>(i), mpq_class(x[i]));
    LaurentPoly g = LaurentPoly::canonicalize(terms);
    if (!g.isZero()) {
        LaurentPoly one(mpq_class(1));
        normalizePair(one, g);
    }
    return g;
}

LaurentPoly LaurentPoly::divExact(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.isZero()) return LaurentPoly();
    assert(!b.isZero());
    auto x = toDense(a);
    auto y = toDense(b);
    std::vector<mpq_class> q(x.size(), mpq_class(0));
    while (!x.empty() && x.size() >= y.size()) {
        mpq_class f = x.back() / y.back();
        size_t off = x.size() - y.size();
        q[off] = f;
        for (size_t i = 0; i < y.size(); ++i) x[off + i] -= f * y[i];
        while (!x.empty() && x.back() == 0) x.pop_back();
    }
    for (const auto& c : x)
        if (c != 0) throw std::logic_error("divExact: nonzero remainder");
    LaurentPoly r = fromDense(q);
    return r.shifted(a.minExp() - b.minExp());
}

void LaurentPoly::normalizePair(LaurentPoly& num, LaurentPoly& den) {
    assert(!den.isZero());
    long shift = -den.minExp();
    den = den.shifted(shift);
    num = num.shifted(shift);
    // unit content of den: gcd of numerators over lcm of denominators, signed
    // so the lowest-degree coefficient of den comes out positive
    mpz_class g = 0, l = 1;
    for (const auto& [e, c] : den.terms()) {
        (void)e;
        mpz_class n = c.get_num(), d = c.get_den();
        if (n < 0) n = -n;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
    }
    mpq_class content(g, l);
    content.canonicalize();
    if (den.terms().begin()->second < 0) content = -content;
    mpq_class inv = 1 / content;
    den = den.scaled(inv);
    num = num.scaled(inv);
}

}  // namespace qtl
