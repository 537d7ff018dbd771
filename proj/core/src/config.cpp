#include "qtl/config.hpp"

#include <fstream>
#include <sstream>

namespace qtl {

namespace {

[[noreturn]] void fail(long line, const std::string& key, const std::string& what) {
    throw ConfigError("config line " + std::to_string(line) + ", key \"" + key + "\": " + what);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> splitList(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char ch : s) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
    return out;
}

long parseLong(const std::string& v, long line, const std::string& key) {
    try {
        size_t pos = 0;
        long r = std::stol(v, &pos);
        if (pos != v.size()) fail(line, key, "trailing characters in integer \"" + v + "\"");
        return r;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, key, "expected integer, got \"" + v + "\"");
    }
}

Fq parseFq(const std::string& v, long line, const std::string& key) {
    try {
        return Fq::parse(v);
    } catch (const std::exception& e) {
        fail(line, key, e.what());
    }
}

}  // namespace

void RunConfig::validate() const {
    if (!basis.valid()) throw ConfigError("basis determinant must be +1 or -1");
    if (odd == basis.m21Even())
        throw ConfigError("declared parity does not match the basis: m21 is " +
                          std::string(basis.m21Even() ? "even" : "odd"));
    if (depth < 0 || window < 1 || probe < 1 || l0window < 1)
        throw ConfigError("truncation parameters out of range");
    if (backend != "exact" && backend != "prime" && backend != "both")
        throw ConfigError("backend must be exact, prime or both");
    if (odd) {
        if (eval.mu.size() != eval.dims.size())
            throw ConfigError("mu and dim lists must have equal length");
    } else {
        if (!eval.mu.empty()) throw ConfigError("mu/dim slots require odd parity");
    }
}

L0Module RunConfig::buildTop() const {
    validate();
    if (!odd) return moduleFromCharacter(psiFromExpPolyEven(even, basis));
    EvalModuleSpec spec = eval;
    spec.psiA = psiFromExpPolyOdd(oddData, basis);
    return buildEvalModule(spec, basis, l0window);
}

RunConfig parseConfig(std::istream& in) {
    RunConfig cfg;
    bool sawParity = false;
    std::string raw;
    long line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s.resize(hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, s, "expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty()) fail(line, key, "empty key or value");

        if (key == "basis") {
            try {
                cfg.basis = GradingBasis::parse(val);
            } catch (const std::exception& e) {
                fail(line, key, e.what());
            }
        } else if (key == "parity") {
            if (val == "even")
                cfg.odd = false;
            else if (val == "odd")
                cfg.odd = true;
            else
                fail(line, key, "expected even or odd");
            sawParity = true;
        } else if (key == "root") {
            if (!sawParity) fail(line, key, "parity must precede root data");
            if (cfg.odd) {
                cfg.oddData.roots.push_back(parseFq(val, line, key));
                cfg.oddData.coeffs.emplace_back();
            } else {
                cfg.even.roots.push_back(parseFq(val, line, key));
                cfg.even.coeffs.emplace_back();
            }
        } else if (key == "coeff" || key == "coeff0" || key == "coeff1") {
            if (!sawParity) fail(line, key, "parity must precede coefficient data");
            std::vector<Fq> list;
            for (const auto& item : splitList(val)) list.push_back(parseFq(item, line, key));
            if (cfg.odd) {
                if (key != "coeff") fail(line, key, "odd parity uses the plain coeff key");
                if (cfg.oddData.coeffs.empty()) fail(line, key, "coeff before any root");
                cfg.oddData.coeffs.back() = std::move(list);
            } else {
                if (key == "coeff") fail(line, key, "even parity uses coeff0 and coeff1");
                if (cfg.even.coeffs.empty()) fail(line, key, "coeff before any root");
                cfg.even.coeffs.back()[key == "coeff1" ? 1 : 0] = std::move(list);
            }
        } else if (key == "mu") {
            cfg.eval.mu.push_back(parseFq(val, line, key));
        } else if (key == "dim") {
            cfg.eval.dims.push_back(parseLong(val, line, key));
        } else if (key == "depth") {
            cfg.depth = parseLong(val, line, key);
        } else if (key == "window") {
            cfg.window = parseLong(val, line, key);
        } else if (key == "probe") {
            cfg.probe = parseLong(val, line, key);
        } else if (key == "l0window") {
            cfg.l0window = parseLong(val, line, key);
        } else if (key == "backend") {
            cfg.backend = val;
        } else if (key == "wmodulus") {
            cfg.wmodulus = parseLong(val, line, key);
            if (cfg.wmodulus < 1) fail(line, key, "pattern modulus must be positive");
        } else if (key == "wresidues") {
            std::vector<long> list;
            for (const auto& item : splitList(val)) list.push_back(parseLong(item, line, key));
            cfg.wresidues.push_back(std::move(list));
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(parseLong(val, line, key));
        } else {
            fail(line, key, "unknown key");
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig parseConfigFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parseConfig(in);
}

}  // namespace qtl
