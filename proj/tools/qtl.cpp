#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtl/config.hpp"
#include "qtl/hwmod.hpp"
#include "qtl/isomap.hpp"
#include "qtl/quasifin.hpp"
#include "qtl/ztwo.hpp"

using json = nlohmann::ordered_json;
using namespace qtl;

namespace {

constexpr int kSchema = 1;

void emit(const json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open output file " + out);
        f << j.dump(2) << "\n";
    }
}

void emitText(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot open output file " + out);
        f << text;
    }
}

IntPair parsePair(const std::string& s) {
    long a = 0, b = 0;
    char l = 0, c = 0, r = 0;
    std::istringstream in(s);
    if (!(in >> l >> a >> c >> b >> r) || l != '(' || c != ',' || r != ')')
        throw std::runtime_error("expected a pair like (1,0), got " + s);
    return {a, b};
}

SubmoduleSpecW patternOf(const RunConfig& cfg, long topDim) {
    if (cfg.wmodulus == 0) return SubmoduleSpecW::full(topDim);
    SubmoduleSpecW w;
    w.modulus = cfg.wmodulus;
    w.residues = cfg.wresidues;
    w.validate(topDim);
    return w;
}

// ---- verify subchecks ----

json checkJacobi(long box, long randomCount, long range, std::uint64_t seed) {
    std::vector<LKey> keys = lKeyBox(box);
    long checked = 0, skewFail = 0, jacobiFail = 0;
    auto testTriple = [&](const LKey& a, const LKey& b, const LKey& c) {
        ++checked;
        LElem ea = LElem::single(a), eb = LElem::single(b), ec = LElem::single(c);
        if (!(bracketL(ea, eb) + bracketL(eb, ea)).isZero()) ++skewFail;
        LElem cyc = bracketL(bracketL(ea, eb), ec) + bracketL(bracketL(eb, ec), ea) +
                    bracketL(bracketL(ec, ea), eb);
        if (!cyc.isZero()) ++jacobiFail;
    };
    for (const LKey& a : keys)
        for (const LKey& b : keys)
            for (const LKey& c : keys) testTriple(a, b, c);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> dm(-range, range);
    std::uniform_int_distribution<int> di(0, 1);
    auto draw = [&] {
        for (;;) {
            LKey k = LKey::torus(di(rng), {dm(rng), dm(rng)});
            if (!k.isForbidden()) return k;
        }
    };
    for (long t = 0; t < randomCount; ++t) testTriple(draw(), draw(), draw());
    json j;
    j["check"] = "jacobi";
    j["box"] = box;
    j["randomTriples"] = randomCount;
    j["checkedTriples"] = checked;
    j["skewFailures"] = skewFail;
    j["jacobiFailures"] = jacobiFail;
    j["pass"] = skewFail == 0 && jacobiFail == 0;
    return j;
}

json homReportJson(const char* name, const HomReport& rep) {
    json j;
    j["check"] = name;
    j["checkedPairs"] = rep.checkedPairs;
    j["failures"] = json::array();
    for (const auto& [a, b] : rep.failures) j["failures"].push_back({{"x", a}, {"y", b}});
    j["injectivityRank"] = rep.injectivityRank;
    j["injectivityExpected"] = rep.injectivityExpected;
    j["pass"] = rep.pass();
    return j;
}

json checkHeisenberg(long box, const GradingBasis& basis) {
    if (!basis.m21Even()) throw std::runtime_error("heisenberg check needs even m21");
    std::vector<LKey> keys;
    for (int i = 0; i <= 1; ++i)
        for (long k = -box; k <= box; ++k) {
            LKey key = LKey::torus(i, basis.lattice(0, k));
            if (!key.isForbidden()) keys.push_back(key);
        }
    const LElem center = basis.centerM2();
    const Fq z1 = center.coeff(LKey::c1()), z2 = center.coeff(LKey::c2());
    long checked = 0, fails = 0;
    for (const LKey& a : keys)
        for (const LKey& b : keys) {
            ++checked;
            LElem br = bracketL(LElem::single(a), LElem::single(b));
            bool ok = true;
            for (const auto& [k, c] : br.terms)
                if (!k.isCentral()) ok = false;
            // proportional to m21 c1 + m22 c2
            if (ok && !(br.coeff(LKey::c1()) * z2 - br.coeff(LKey::c2()) * z1).isZero())
                ok = false;
            if (!ok) ++fails;
        }
    json j;
    j["check"] = "heisenberg";
    j["box"] = box;
    j["basis"] = basis.str();
    j["checkedPairs"] = checked;
    j["failures"] = fails;
    j["pass"] = fails == 0;
    return j;
}

// ---- module builds ----

struct DimsResult {
    std::vector<long> exact, prime;
};

DimsResult buildDims(const RunConfig& cfg) {
    DimsResult out;
    L0Module top = cfg.buildTop();
    TruncationParams trunc{cfg.window, cfg.probe, cfg.depth};
    if (cfg.backend == "exact" || cfg.backend == "both") {
        ExactField F;
        out.exact = buildHwModule(F, top, cfg.basis, trunc).dims();
    }
    if (cfg.backend == "prime" || cfg.backend == "both") {
        PrimeField Fp(PrimeSpec::fromSeed(cfg.seed));
        out.prime = buildHwModule(Fp, top, cfg.basis, trunc).dims();
    }
    return out;
}

json dimsJson(const RunConfig& cfg, const DimsResult& d) {
    json j;
    j["backend"] = cfg.backend;
    j["depth"] = cfg.depth;
    j["window"] = cfg.window;
    j["probe"] = cfg.probe;
    if (!d.exact.empty()) j["dimsExact"] = d.exact;
    if (!d.prime.empty()) j["dimsPrime"] = d.prime;
    if (cfg.backend == "both") j["backendsAgree"] = d.exact == d.prime;
    return j;
}

json verdictJson(const Verdict& v, const GradingBasis& basis) {
    json j;
    j["verdict"] = v.quasifinite ? "Quasifinite" : "UnknownWithinWindow";
    j["maxOrder"] = v.maxOrder;
    j["range"] = v.range;
    j["conditionHolds"] = v.conditionHolds;
    if (v.certificate) {
        json coeffs = json::array();
        for (const Fq& c : v.certificate->a) coeffs.push_back(c.str());
        j["certificate"] = {{"order", v.certificate->order()}, {"coeffs", coeffs}};
    }
    j["basis"] = basis.str();
    return j;
}

template <typename P>
std::string gridCsv(const Z2GradedModule<P>& z) {
    std::ostringstream os;
    os << "s";
    for (long r = -z.R; r <= z.R; ++r) os << ",r=" << r;
    os << "\n";
    auto grid = z2Dims(z);
    for (long s = 0; s <= z.depth(); ++s) {
        os << s;
        for (long d : grid[static_cast<std::size_t>(s)]) os << "," << d;
        os << "\n";
    }
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations in a quantum-torus Lie algebra and its graded modules"};
    app.require_subcommand(1);

    std::string configPath, out, basisStr = "(1,0);(0,1)";
    long box = 2, randomCount = 0, range = 5;
    std::uint64_t seed = 0;

    // verify
    auto* verify = app.add_subcommand("verify", "structural checks; exit 0 iff all pass");
    std::string what;
    verify->add_option("what", what, "jacobi | phitau | phiaff | heisenberg")->required();
    verify->add_option("--box", box, "index window half-width");
    verify->add_option("--random", randomCount, "extra random triples (jacobi)");
    verify->add_option("--range", range, "index range for random triples");
    verify->add_option("--seed", seed, "random seed");
    verify->add_option("--basis", basisStr, "grading basis, e.g. \"(1,0);(1,1)\"");
    verify->add_option("--out", out, "write the JSON report here instead of stdout");

    // bracket
    auto* bracket = app.add_subcommand("bracket", "print the bracket of two elements");
    std::string xs, ys;
    bracket->add_option("x", xs)->required();
    bracket->add_option("y", ys)->required();

    // build-hw / dims
    auto* buildhw = app.add_subcommand("build-hw", "build the graded module, report dims (JSON)");
    auto* dims = app.add_subcommand("dims", "build the graded module, emit a dims CSV");
    long depthOpt = -1, windowOpt = -1, probeOpt = -1;
    std::string backendOpt, csvOut;
    bool haveSeedOpt = false;
    for (CLI::App* c : {buildhw, dims}) {
        c->add_option("--config", configPath)->required();
        c->add_option("--depth", depthOpt);
        c->add_option("--window", windowOpt);
        c->add_option("--probe", probeOpt);
        c->add_option("--backend", backendOpt)->check(CLI::IsMember({"exact", "prime", "both"}));
        c->add_option("--seed", seed)->each([&](const std::string&) { haveSeedOpt = true; });
        c->add_option("--out", out);
    }

    // quasifinite
    auto* quasi = app.add_subcommand("quasifinite", "exp-polynomial recurrence verdict (JSON)");
    long maxOrder = 6, qrange = 12;
    quasi->add_option("--config", configPath)->required();
    quasi->add_option("--max-order", maxOrder);
    quasi->add_option("--range", qrange);
    quasi->add_option("--out", out);

    // z2-dims
    auto* z2 = app.add_subcommand("z2-dims", "loop-extension dimension grid (CSV)");
    long loopR = 3, wwindow = 0;
    z2->add_option("--config", configPath)->required();
    z2->add_option("--depth", depthOpt);
    z2->add_option("--loop", loopR, "loop window R");
    z2->add_option("--wwindow", wwindow, "verification window (default 3x pattern step)");
    z2->add_option("--backend", backendOpt)->check(CLI::IsMember({"exact", "prime"}));
    z2->add_option("--seed", seed)->each([&](const std::string&) { haveSeedOpt = true; });
    z2->add_option("--out", out);

    // probe
    auto* probe = app.add_subcommand("probe", "nilpotency probe on the top slice (JSON)");
    std::string mStr = "(-1,0)";
    long power = 3, vindex = 0;
    int psign = 1;
    probe->add_option("--config", configPath)->required();
    probe->add_option("--m", mStr, "torus exponent of the probe element");
    probe->add_option("--sign", psign)->check(CLI::IsMember({-1, 1}));
    probe->add_option("--power", power);
    probe->add_option("--vindex", vindex);
    probe->add_option("--depth", depthOpt);
    probe->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        auto loadConfig = [&] {
            RunConfig cfg = parseConfigFile(configPath);
            if (depthOpt >= 0) cfg.depth = depthOpt;
            if (windowOpt >= 0) cfg.window = windowOpt;
            if (probeOpt >= 0) cfg.probe = probeOpt;
            if (!backendOpt.empty()) cfg.backend = backendOpt;
            if (haveSeedOpt) cfg.seed = seed;
            cfg.validate();
            return cfg;
        };

        if (verify->parsed()) {
            GradingBasis basis = GradingBasis::parse(basisStr);
            json body;
            if (what == "jacobi")
                body = checkJacobi(box, randomCount, range, seed);
            else if (what == "phitau")
                body = homReportJson("phitau", verifyPhiTau(box));
            else if (what == "phiaff")
                body = homReportJson("phiaff", verifyPhiAff(box, basis));
            else if (what == "heisenberg")
                body = checkHeisenberg(box, basis);
            else
                throw std::runtime_error("unknown verification " + what);
            json j;
            j["schema"] = kSchema;
            j["command"] = "verify";
            j["report"] = body;
            emit(j, out);
            return body["pass"].get<bool>() ? 0 : 1;
        }

        if (bracket->parsed()) {
            std::cout << bracketL(parseLElem(xs), parseLElem(ys)).str() << "\n";
            return 0;
        }

        if (buildhw->parsed() || dims->parsed()) {
            RunConfig cfg = loadConfig();
            DimsResult d = buildDims(cfg);
            if (dims->parsed()) {
                std::ostringstream os;
                os << "s,dim\n";
                const auto& table = d.exact.empty() ? d.prime : d.exact;
                for (std::size_t s = 0; s < table.size(); ++s) os << s << "," << table[s] << "\n";
                emitText(os.str(), out);
                return 0;
            }
            json j;
            j["schema"] = kSchema;
            j["command"] = "build-hw";
            j["report"] = dimsJson(cfg, d);
            emit(j, out);
            return cfg.backend == "both" && d.exact != d.prime ? 1 : 0;
        }

        if (quasi->parsed()) {
            RunConfig cfg = loadConfig();
            Verdict v;
            if (cfg.odd) {
                EvalModuleSpec spec = cfg.eval;
                spec.psiA = psiFromExpPolyOdd(cfg.oddData, cfg.basis);
                v = verdictOdd(spec, cfg.basis, maxOrder, qrange);
            } else {
                v = verdictEven(psiFromExpPolyEven(cfg.even, cfg.basis), maxOrder, qrange);
            }
            json j;
            j["schema"] = kSchema;
            j["command"] = "quasifinite";
            j["report"] = verdictJson(v, cfg.basis);
            emit(j, out);
            return 0;
        }

        if (z2->parsed()) {
            RunConfig cfg = loadConfig();
            L0Module top = cfg.buildTop();
            SubmoduleSpecW w = patternOf(cfg, top.dim);
            const long gw = std::max<long>(2, w.modulus);
            WReport rep = verifyW(top, w, wwindow > 0 ? wwindow : 3 * gw);
            if (!rep.invariant) {
                std::cerr << "pattern is not invariant:\n";
                for (const auto& v : rep.violations) std::cerr << "  " << v << "\n";
                return 1;
            }
            TruncationParams trunc{cfg.window, cfg.probe, cfg.depth};
            std::string csv;
            if (cfg.backend == "prime") {
                PrimeField Fp(PrimeSpec::fromSeed(cfg.seed));
                csv = gridCsv(extendZ2(Fp, top, w, loopR, trunc));
            } else {
                ExactField F;
                csv = gridCsv(extendZ2(F, top, w, loopR, trunc));
            }
            emitText(csv, out);
            return 0;
        }

        if (probe->parsed()) {
            RunConfig cfg = loadConfig();
            L0Module top = cfg.buildTop();
            ExactField F;
            auto mod =
                buildHwModule(F, top, cfg.basis, TruncationParams{cfg.window, cfg.probe, cfg.depth});
            auto killed = integrabilityProbe(mod, parsePair(mStr), psign, vindex, power);
            json j;
            j["schema"] = kSchema;
            j["command"] = "probe";
            j["report"] = {{"m", mStr},
                           {"sign", psign},
                           {"vindex", vindex},
                           {"maxPower", power},
                           {"nilpotent", killed.has_value()}};
            if (killed) j["report"]["killedAtPower"] = *killed;
            emit(j, out);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
