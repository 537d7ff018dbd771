#include "qtl/algebra.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

namespace qtl {

namespace {

int sgnPow(long e) { return ((e % 2) + 2) % 2 ? -1 : 1; }

std::string pairStr(IntPair m) {
    return "(" + std::to_string(m.first) + "," + std::to_string(m.second) + ")";
}

}  // namespace

std::string LKey::str() const {
    switch (kind) {
        case C1: return "c1";
        case C2: return "c2";
        default: return "t0^" + std::to_string(i) + " t^" + pairStr(m);
    }
}

std::string TauKey::str() const {
    switch (kind) {
        case K1: return "K1";
        case K2: return "K2";
        default:
            return "E" + std::to_string(i) + std::to_string(j) + "(t^" + pairStr(m) + ")";
    }
}

std::string AffKey::str() const {
    switch (kind) {
        case K: return "K";
        case E12: return "E12(x^" + std::to_string(j) + ")";
        case E21: return "E21(x^" + std::to_string(j) + ")";
        default: return "H(x^" + std::to_string(j) + ")";
    }
}

template <typename Key>
std::string Element<Key>::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms) {
        if (!first) os << " + ";
        first = false;
        std::string cs = c.str();
        if (cs.find(' ') != std::string::npos) cs = "(" + cs + ")";
        os << cs << "*" << k.str();
    }
    return os.str();
}

template std::string Element<LKey>::str() const;
template std::string Element<TauKey>::str() const;
template std::string Element<AffKey>::str() const;

LElem GradingBasis::beta() const {
    LElem r;
    r.add(LKey::c1(), Fq(m1.first));
    r.add(LKey::c2(), Fq(m1.second));
    return r;
}

LElem GradingBasis::centerM2() const {
    LElem r;
    r.add(LKey::c1(), Fq(m2.first));
    r.add(LKey::c2(), Fq(m2.second));
    return r;
}

std::string GradingBasis::str() const { return pairStr(m1) + ";" + pairStr(m2); }

GradingBasis GradingBasis::parse(const std::string& s) {
    GradingBasis b;
    long v[4];
    if (std::sscanf(s.c_str(), " ( %ld , %ld ) ; ( %ld , %ld )", &v[0], &v[1], &v[2], &v[3]) != 4)
        throw std::runtime_error("bad basis syntax, expected \"(m11,m12);(m21,m22)\": " + s);
    b.m1 = {v[0], v[1]};
    b.m2 = {v[2], v[3]};
    if (!b.valid()) throw std::runtime_error("basis determinant must be +1 or -1: " + s);
    return b;
}

LElem bracketL(const LElem& x, const LElem& y) {
    LElem r;
    for (const auto& [kx, cx] : x.terms) {
        if (kx.isCentral()) continue;
        for (const auto& [ky, cy] : y.terms) {
            if (ky.isCentral()) continue;
            const long m1 = kx.m.first, m2 = kx.m.second;
            const long n1 = ky.m.first, n2 = ky.m.second;
            const int i = kx.i, j = ky.i;
            const Fq c = cx * cy;
            const Fq lead = Fq(sgnPow(m1 * j)) * Fq::qpow(m2 * n1);
            const Fq coef = (lead - Fq(sgnPow(i * n1)) * Fq::qpow(m1 * n2)) * c;
            if (!coef.isZero()) {
                LKey out = LKey::torus(i + j, kx.m + ky.m);
                if (out.isForbidden())
                    throw std::logic_error("bracketL produced the excluded torus key");
                r.add(out, coef);
            }
            if ((i + j) % 2 == 0 && kx.m + ky.m == IntPair{0, 0}) {
                const Fq cc = lead * c;
                r.add(LKey::c1(), cc * Fq(m1));
                r.add(LKey::c2(), cc * Fq(m2));
            }
        }
    }
    return r;
}

TauElem bracketTau(const TauElem& x, const TauElem& y) {
    TauElem r;
    for (const auto& [kx, cx] : x.terms) {
        if (kx.isCentral()) continue;
        for (const auto& [ky, cy] : y.terms) {
            if (ky.isCentral()) continue;
            const long m1 = kx.m.first, m2 = kx.m.second;
            const long n1 = ky.m.first, n2 = ky.m.second;
            const Fq c = cx * cy;
            const IntPair mn = kx.m + ky.m;
            if (kx.j == ky.i) r.add(TauKey::mat(kx.i, ky.j, mn), Fq::qpow(2 * m2 * n1) * c);
            if (ky.j == kx.i) r.add(TauKey::mat(ky.i, kx.j, mn), -(Fq::qpow(2 * n2 * m1) * c));
            if (mn == IntPair{0, 0} && kx.j == ky.i && ky.j == kx.i) {
                const Fq cc = Fq::qpow(2 * m2 * n1) * c;
                r.add(TauKey::k1(), cc * Fq(m1));
                r.add(TauKey::k2(), cc * Fq(m2));
            }
        }
    }
    return r;
}

namespace {

// sl2 structure constants: [a, b] as a list of (kind, coeff) with the loop
// degree added by the caller.
void sl2Bracket(AffKey::Kind a, AffKey::Kind b, long deg, AffElem& out, const Fq& c) {
    using K = AffKey;
    if (a == K::H && b == K::E12) out.add(K::e12(deg), Fq(2) * c);
    else if (a == K::E12 && b == K::H) out.add(K::e12(deg), Fq(-2) * c);
    else if (a == K::H && b == K::E21) out.add(K::e21(deg), Fq(-2) * c);
    else if (a == K::E21 && b == K::H) out.add(K::e21(deg), Fq(2) * c);
    else if (a == K::E12 && b == K::E21) out.add(K::h(deg), c);
    else if (a == K::E21 && b == K::E12) out.add(K::h(deg), -c);
}

// invariant form: (E12,E21) = 1, (H,H) = 2
long affForm(AffKey::Kind a, AffKey::Kind b) {
    using K = AffKey;
    if ((a == K::E12 && b == K::E21) || (a == K::E21 && b == K::E12)) return 1;
    if (a == K::H && b == K::H) return 2;
    return 0;
}

}  // namespace

AffElem bracketAff(const AffElem& x, const AffElem& y) {
    AffElem r;
    for (const auto& [kx, cx] : x.terms) {
        if (kx.isCentral()) continue;
        for (const auto& [ky, cy] : y.terms) {
            if (ky.isCentral()) continue;
            const Fq c = cx * cy;
            sl2Bracket(kx.kind, ky.kind, kx.j + ky.j, r, c);
            if (kx.j + ky.j == 0) {
                long f = affForm(kx.kind, ky.kind);
                if (f != 0) r.add(AffKey::k(), Fq(kx.j) * Fq(f) * c);
            }
        }
    }
    return r;
}

long gradeOf(const LKey& k, const GradingBasis& basis) {
    if (k.isCentral()) return 0;
    return basis.coords(k.m).first;
}

std::vector<LKey> enumerateGraded(long j, long K, const GradingBasis& basis) {
    std::vector<LKey> keys;
    if (j == 0) {
        keys.push_back(LKey::c1());
        keys.push_back(LKey::c2());
    }
    for (long k = -K; k <= K; ++k)
        for (int i = 0; i <= 1; ++i) {
            LKey key = LKey::torus(i, basis.lattice(j, k));
            if (!key.isForbidden()) keys.push_back(key);
        }
    return keys;
}

namespace {

// Shared element parser: sum of signed terms "coeff*key" or "key", with the
// coefficient any field expression.  Key syntax is tag-specific.
struct ElemParser {
    const std::string& s;
    size_t i = 0;

    explicit ElemParser(const std::string& str) : s(str) {}

    void skip() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error("parse error in element \"" + s + "\" at position " +
                                 std::to_string(i) + ": " + what);
    }

    // next term: [text up to a top-level +/- that is not inside parens]
    std::string nextChunk() {
        skip();
        size_t start = i;
        int depth = 0;
        while (i < s.size()) {
            char c = s[i];
            if (c == '(') ++depth;
            else if (c == ')') --depth;
            else if (depth == 0 && (c == '+' || c == '-') && i > start) {
                // '-' directly after '^', '*', '/' or '(' belongs to a number
                size_t p = i;
                while (p > start && std::isspace(static_cast<unsigned char>(s[p - 1]))) --p;
                char prev = p > start ? s[p - 1] : '\0';
                if (prev != '^' && prev != '*' && prev != '/' && prev != '(') break;
            }
            ++i;
        }
        return s.substr(start, i - start);
    }

    int nextSign() {
        skip();
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) return s[i++] == '-' ? -1 : 1;
        return 1;
    }

    bool done() {
        skip();
        return i >= s.size();
    }
};

IntPair parsePair(const std::string& t, size_t& p, const std::string& full) {
    long a, b;
    int consumed = 0;
    if (std::sscanf(t.c_str() + p, " ( %ld , %ld ) %n", &a, &b, &consumed) != 2)
        throw std::runtime_error("expected \"(a,b)\" in element \"" + full + "\"");
    p += static_cast<size_t>(consumed);
    return {a, b};
}

// Split "coeff*key" at the last top-level '*' whose suffix starts with a key
// letter; empty coeff means 1.
std::pair<std::string, std::string> splitCoeff(const std::string& term) {
    int depth = 0;
    size_t split = std::string::npos;
    for (size_t p = 0; p < term.size(); ++p) {
        char c = term[p];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (c == '*' && depth == 0) {
            size_t q = p + 1;
            while (q < term.size() && std::isspace(static_cast<unsigned char>(term[q]))) ++q;
            if (q < term.size() && (term[q] == 't' || term[q] == 'c' || term[q] == 'E' ||
                                    term[q] == 'H' || term[q] == 'K'))
                split = p;
        }
    }
    if (split == std::string::npos) return {"", term};
    return {term.substr(0, split), term.substr(split + 1)};
}

std::string trim(const std::string& t) {
    size_t a = 0, b = t.size();
    while (a < b && std::isspace(static_cast<unsigned char>(t[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(t[b - 1]))) --b;
    return t.substr(a, b - a);
}

LKey parseLKey(const std::string& raw, const std::string& full) {
    std::string t = trim(raw);
    if (t == "c1") return LKey::c1();
    if (t == "c2") return LKey::c2();
    long i;
    int consumed = 0;
    if (std::sscanf(t.c_str(), " t0 ^ %ld t ^ %n", &i, &consumed) == 1 && consumed > 0) {
        size_t p = static_cast<size_t>(consumed);
        IntPair m = parsePair(t, p, full);
        if (trim(t.substr(p)).empty()) {
            LKey k = LKey::torus(static_cast<int>(i), m);
            if (k.isForbidden())
                throw std::runtime_error("t0^0 t^(0,0) is not a basis element: " + full);
            return k;
        }
    }
    throw std::runtime_error("bad L basis key \"" + t + "\" in \"" + full + "\"");
}

TauKey parseTauKey(const std::string& raw, const std::string& full) {
    std::string t = trim(raw);
    if (t == "K1") return TauKey::k1();
    if (t == "K2") return TauKey::k2();
    int a, b;
    int consumed = 0;
    if (std::sscanf(t.c_str(), " E %1d %1d ( t ^ %n", &a, &b, &consumed) == 2 && consumed > 0 &&
        a >= 1 && a <= 2 && b >= 1 && b <= 2) {
        size_t p = static_cast<size_t>(consumed);
        IntPair m = parsePair(t, p, full);
        std::string rest = trim(t.substr(p));
        if (rest == ")") return TauKey::mat(a, b, m);
    }
    throw std::runtime_error("bad tau basis key \"" + t + "\" in \"" + full + "\"");
}

AffKey parseAffKey(const std::string& raw, const std::string& full) {
    std::string t = trim(raw);
    if (t == "K") return AffKey::k();
    char name[4] = {0};
    long j;
    if (std::sscanf(t.c_str(), " %3[EH12] ( x ^ %ld )", name, &j) == 2) {
        std::string n = name;
        if (n == "E12") return AffKey::e12(j);
        if (n == "E21") return AffKey::e21(j);
        if (n == "H") return AffKey::h(j);
    }
    throw std::runtime_error("bad affine basis key \"" + t + "\" in \"" + full + "\"");
}

template <typename Key, typename KeyParser>
Element<Key> parseElem(const std::string& s, KeyParser keyParser) {
    Element<Key> r;
    ElemParser p(s);
    if (trim(s) == "0") return r;
    while (!p.done()) {
        int sign = p.nextSign();
        std::string chunk = p.nextChunk();
        if (trim(chunk).empty()) p.fail("empty term");
        auto [cs, ks] = splitCoeff(chunk);
        Fq c = cs.empty() ? Fq(1) : Fq::parse(cs);
        if (sign < 0) c = -c;
        r.add(keyParser(ks, s), c);
    }
    return r;
}

}  // namespace

LElem parseLElem(const std::string& s) { return parseElem<LKey>(s, parseLKey); }
TauElem parseTauElem(const std::string& s) { return parseElem<TauKey>(s, parseTauKey); }
AffElem parseAffElem(const std::string& s) { return parseElem<AffKey>(s, parseAffKey); }

}  // namespace qtl
