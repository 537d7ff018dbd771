#include "qtl/field.hpp"

#include <cctype>
#include <sstream>

namespace qtl {

Fq::Fq(LaurentPoly num, LaurentPoly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.isZero()) throw DivisionByZero();
    reduce();
}

void Fq::reduce() {
    if (num_.isZero()) {
        den_ = LaurentPoly(mpq_class(1));
        return;
    }
    // a one-term side makes the gcd a unit, so only normalization remains
    if (num_.terms().size() > 1 && den_.terms().size() > 1) {
        LaurentPoly g = LaurentPoly::gcd(num_, den_);
        if (!g.isOne()) {
            num_ = LaurentPoly::divExact(num_, g);
            den_ = LaurentPoly::divExact(den_, g);
        }
    }
    LaurentPoly::normalizePair(num_, den_);
}

Fq Fq::fromReduced(LaurentPoly num, LaurentPoly den) {
    if (den.isZero()) throw DivisionByZero();
    Fq r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    if (r.num_.isZero()) {
        r.den_ = LaurentPoly(mpq_class(1));
        return r;
    }
    LaurentPoly::normalizePair(r.num_, r.den_);
    return r;
}

Fq Fq::operator-() const {
    Fq r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Fq Fq::operator+(const Fq& o) const {
    if (isZero()) return o;
    if (o.isZero()) return *this;
    if (den_ == o.den_) return Fq(num_ + o.num_, den_);
    return Fq(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Fq Fq::operator-(const Fq& o) const { return *this + (-o); }

Fq Fq::operator*(const Fq& o) const {
    if (isZero() || o.isZero()) return Fq();
    return Fq(num_ * o.num_, den_ * o.den_);
}

Fq Fq::operator/(const Fq& o) const {
    if (o.isZero()) throw DivisionByZero();
    if (isZero()) return Fq();
    return Fq(num_ * o.den_, den_ * o.num_);
}

Fq Fq::inv() const {
    if (isZero()) throw DivisionByZero();
    return Fq(den_, num_);
}

Fq Fq::pow(long n) const {
    if (n < 0) return inv().pow(-n);
    Fq r(1), b = *this;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

bool Fq::operator<(const Fq& o) const {
    auto cmp = [](const LaurentPoly& a, const LaurentPoly& b) {
        auto ia = a.terms().begin(), ib = b.terms().begin();
        for (; ia != a.terms().end() && ib != b.terms().end(); ++ia, ++ib) {
            if (ia->first != ib->first) return ia->first < ib->first ? -1 : 1;
            if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
        }
        if (ia != a.terms().end()) return 1;
        if (ib != b.terms().end()) return -1;
        return 0;
    };
    int c = cmp(num_, o.num_);
    if (c != 0) return c < 0;
    return cmp(den_, o.den_) < 0;
}

std::string Fq::str() const {
    if (den_.isOne()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
}

namespace {

// Recursive-descent parser for +, -, *, /, ^ expressions over rationals and
// the symbols u and q (q = u^2).
struct Parser {
    const std::string& s;
    size_t i = 0;

    explicit Parser(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool eat(char c) {
        skip();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error("parse error in field element \"" + s + "\" at position " +
                                 std::to_string(i) + ": " + what);
    }

    long integer() {
        skip();
        size_t start = i;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
        size_t digits = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == digits) fail("expected integer");
        return std::stol(s.substr(start, i - start));
    }

    Fq atom() {
        skip();
        if (i >= s.size()) fail("unexpected end");
        if (s[i] == '(') {
            ++i;
            Fq v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (s[i] == 'u' || s[i] == 'q') {
            bool isQ = s[i] == 'q';
            ++i;
            long e = 1;
            if (eat('^')) e = integer();
            return Fq::upow(isQ ? 2 * e : e);
        }
        if (std::isdigit(static_cast<unsigned char>(s[i]))) {
            size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
            return Fq(mpq_class(mpz_class(s.substr(start, i - start))));
        }
        fail("expected number, u, q or '('");
    }

    Fq power() {
        Fq base = atom();
        if (eat('^')) return base.pow(integer());
        return base;
    }

    Fq unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    Fq term() {
        Fq v = unary();
        for (;;) {
            if (eat('*')) {
                v *= unary();
            } else if (eat('/')) {
                v /= unary();
            } else {
                return v;
            }
        }
    }

    Fq expr() {
        Fq v = term();
        for (;;) {
            skip();
            if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
                char op = s[i++];
                Fq t = term();
                v = op == '+' ? v + t : v - t;
            } else {
                return v;
            }
        }
    }
};

}  // namespace

Fq Fq::parse(const std::string& s) {
    Parser p(s);
    Fq v = p.expr();
    p.skip();
    if (p.i != s.size()) p.fail("trailing input");
    return v;
}

}  // namespace qtl
