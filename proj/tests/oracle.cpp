#include "oracle.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <stdexcept>

#include "qtl/algebra.hpp"

namespace oracle {

using qtl::Fq;
using qtl::GradingBasis;
using qtl::IntPair;
using qtl::L0Module;
using qtl::LElem;
using qtl::LKey;
using qtl::Matrix;

namespace {

using u64 = std::uint64_t;

constexpr u64 P = 2305843009213693951ULL;  // 2^61 - 1
constexpr u64 U0 = 741398862398261ULL;     // guarded below against small torsion

u64 mul(u64 a, u64 b) { return static_cast<u64>((unsigned __int128)a * b % P); }
u64 add(u64 a, u64 b) { return (a + b) % P; }
u64 sub(u64 a, u64 b) { return (a + P - b) % P; }

u64 pw(u64 a, u64 e) {
    u64 r = 1;
    for (; e; e >>= 1, a = mul(a, a))
        if (e & 1) r = mul(r, a);
    return r;
}

u64 inv(u64 a) {
    if (a == 0) throw std::runtime_error("reference field: division by zero");
    return pw(a, P - 2);
}

bool guardChecked = [] {
    u64 x = 1;
    for (long n = 1; n <= 4096; ++n) {
        x = mul(x, U0);
        if (x == 1) throw std::logic_error("reference residue has small torsion");
    }
    return true;
}();

u64 upow(long n) { return n >= 0 ? pw(U0, static_cast<u64>(n)) : inv(pw(U0, static_cast<u64>(-n))); }

u64 evalQ(const mpq_class& c) {
    const u64 n = mpz_fdiv_ui(c.get_num().get_mpz_t(), P);
    const u64 d = mpz_fdiv_ui(c.get_den().get_mpz_t(), P);
    return mul(n, inv(d));
}

u64 evalPoly(const qtl::LaurentPoly& p) {
    u64 r = 0;
    for (const auto& [e, c] : p.terms()) r = add(r, mul(evalQ(c), upow(e)));
    return r;
}

u64 eval(const Fq& x) {
    const u64 d = evalPoly(x.den());
    if (d == 0) throw std::runtime_error("reference residue hits a denominator root");
    return mul(evalPoly(x.num()), inv(d));
}

using Vec = std::vector<u64>;
using Word = std::vector<LKey>;

/// Linear combination of lowering words applied to a degree-0 vector.
struct State {
    std::map<Word, Vec> t;

    void add(const Word& w, const Vec& v, u64 c) {
        if (c == 0) return;
        auto& dst = t[w];
        if (dst.empty()) dst.assign(v.size(), 0);
        bool nz = false;
        for (std::size_t i = 0; i < v.size(); ++i) {
            dst[i] = ::oracle::add(dst[i], mul(c, v[i]));
            nz = nz || dst[i] != 0;
        }
        if (!nz) t.erase(w);
    }
};

/// Degree-0 module data specialized into Z/p.
struct Top {
    const L0Module* mod = nullptr;
    u64 cc1 = 0, cc2 = 0;
    std::map<std::pair<int, long>, Matrix<u64>> cache;

    const Matrix<u64>& act(int i, long loop) {
        auto it = cache.find({i, loop});
        if (it != cache.end()) return it->second;
        Matrix<Fq> m = mod->torusAct(i, loop);
        Matrix<u64> r(m.rows, m.cols, 0);
        for (std::size_t p = 0; p < m.a.size(); ++p) r.a[p] = eval(m.a[p]);
        return cache.emplace(std::pair<int, long>{i, loop}, std::move(r)).first->second;
    }
};

struct Evaluator {
    GradingBasis basis;
    Top top;

    long grade(const LKey& k) const { return qtl::gradeOf(k, basis); }

    /// k applied to the word w (x) v, rewritten into lowering words only.
    State apply(const LKey& k, const Word& w, const Vec& v) {
        State r;
        if (k.kind == LKey::C1) {
            r.add(w, v, top.cc1);
            return r;
        }
        if (k.kind == LKey::C2) {
            r.add(w, v, top.cc2);
            return r;
        }
        const long g = grade(k);
        if (g < 0) {
            Word nw;
            nw.reserve(w.size() + 1);
            nw.push_back(k);
            nw.insert(nw.end(), w.begin(), w.end());
            r.add(nw, v, 1);
            return r;
        }
        if (w.empty()) {
            if (g > 0) return r;  // raising kills the top layer
            const Matrix<u64>& m = top.act(k.i, basis.coords(k.m).second);
            Vec nv(m.rows, 0);
            for (std::size_t i = 0; i < m.rows; ++i)
                for (std::size_t j = 0; j < m.cols; ++j)
                    nv[i] = ::oracle::add(nv[i], mul(m.at(i, j), v[j]));
            r.add({}, nv, 1);
            return r;
        }
        const LKey a = w.front();
        const Word rest(w.begin() + 1, w.end());
        // k.(a (x) rest) = [k,a].rest + a.(k.rest)
        LElem br = qtl::bracketL(LElem::single(k), LElem::single(a));
        for (const auto& [b, c] : br.terms) {
            State s = apply(b, rest, v);
            const u64 ce = eval(c);
            for (const auto& [w2, v2] : s.t) r.add(w2, v2, ce);
        }
        State s = apply(k, rest, v);
        for (const auto& [w2, v2] : s.t) {
            Word nw;
            nw.reserve(w2.size() + 1);
            nw.push_back(a);
            nw.insert(nw.end(), w2.begin(), w2.end());
            r.add(nw, v2, 1);
        }
        return r;
    }

    /// value of R applied to G (x) e_b, read off in the degree-0 basis;
    /// letters of R act left to right
    Vec value(const Word& raising, const Word& lowering, std::size_t b) {
        const std::size_t d0 = static_cast<std::size_t>(top.mod->dim);
        State st;
        Vec e(d0, 0);
        e[b] = 1;
        st.add(lowering, e, 1);
        for (const LKey& k : raising) {
            State next;
            for (const auto& [w, v] : st.t) {
                State s = apply(k, w, v);
                for (const auto& [w2, v2] : s.t) next.add(w2, v2, 1);
            }
            st = std::move(next);
        }
        auto it = st.t.find({});
        Vec out(d0, 0);
        if (it != st.t.end()) out = it->second;
        for (const auto& [w, v] : st.t)
            if (!w.empty()) throw std::logic_error("reference rewrite left a graded residue");
        return out;
    }
};

std::vector<LKey> torusLayer(const GradingBasis& basis, long g, long window) {
    std::vector<LKey> keys;
    for (long k = -window; k <= window; ++k)
        for (int i = 0; i <= 1; ++i) {
            LKey key = LKey::torus(i, basis.lattice(g, k));
            if (!key.isForbidden()) keys.push_back(key);
        }
    return keys;
}

/// A column of the pairing: a lowering word applied to a top basis vector.
struct Col {
    Word w;
    std::size_t b = 0;
};

struct Row {
    Word w;        // raising letters, first applied first
    std::size_t b = 0;  // degree-0 coordinate read at the end
    long shift = 0;     // total loop shift of the letters
};

struct LevelData {
    long dim = 0;
    std::vector<Col> pivotCols;
    std::vector<Row> pivotRows;
};

/// Plain dense elimination; returns pivot row and column index sets.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> pivotSets(Matrix<u64> M) {
    std::vector<std::size_t> prows, pcols;
    std::vector<char> used(M.rows, 0);
    for (std::size_t c = 0; c < M.cols; ++c) {
        std::size_t pr = M.rows;
        for (std::size_t r = 0; r < M.rows; ++r)
            if (!used[r] && M.at(r, c) != 0) {
                pr = r;
                break;
            }
        if (pr == M.rows) continue;
        used[pr] = 1;
        prows.push_back(pr);
        pcols.push_back(c);
        const u64 pi = inv(M.at(pr, c));
        for (std::size_t r = 0; r < M.rows; ++r) {
            if (r == pr || M.at(r, c) == 0) continue;
            const u64 f = mul(M.at(r, c), pi);
            for (std::size_t j = c; j < M.cols; ++j)
                M.at(r, j) = sub(M.at(r, j), mul(f, M.at(pr, j)));
        }
    }
    return {prows, pcols};
}

std::vector<LevelData> buildLevels(Evaluator& ev, const Params& par) {
    const std::size_t d0 = static_cast<std::size_t>(ev.top.mod->dim);
    std::vector<LKey> gens = torusLayer(ev.basis, -1, par.K);
    std::vector<LKey> probes = torusLayer(ev.basis, 1, par.Kp);

    std::vector<LevelData> levels;
    LevelData l0;
    l0.dim = static_cast<long>(d0);
    for (std::size_t b = 0; b < d0; ++b) {
        l0.pivotCols.push_back({{}, b});
        l0.pivotRows.push_back({{}, b, 0});
    }
    levels.push_back(std::move(l0));

    for (long s = 1; s <= par.S; ++s) {
        const LevelData& prev = levels.back();
        std::vector<Col> cols;
        for (const LKey& g : gens)
            for (const Col& pc : prev.pivotCols) {
                Col c{Word{g}, pc.b};
                c.w.insert(c.w.end(), pc.w.begin(), pc.w.end());
                cols.push_back(std::move(c));
            }
        std::vector<Row> rows;
        for (const LKey& h : probes)
            for (const Row& pr : prev.pivotRows) {
                Row r{Word{h}, pr.b, pr.shift + qtl::loopIndex(h, ev.basis)};
                r.w.insert(r.w.end(), pr.w.begin(), pr.w.end());
                rows.push_back(std::move(r));
            }
        Matrix<u64> M(rows.size(), cols.size(), 0);
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < rows.size(); ++r)
                M.at(r, c) = ev.value(rows[r].w, cols[c].w, cols[c].b)[rows[r].b];
        auto [prows, pcols] = pivotSets(M);
        LevelData lv;
        lv.dim = static_cast<long>(pcols.size());
        for (std::size_t c : pcols) lv.pivotCols.push_back(cols[c]);
        for (std::size_t r : prows) lv.pivotRows.push_back(rows[r]);
        levels.push_back(std::move(lv));
    }
    return levels;
}

Evaluator makeEvaluator(const L0Module& top) {
    Evaluator ev;
    ev.basis = top.basis;
    ev.top.mod = &top;
    ev.top.cc1 = eval(top.cc1);
    ev.top.cc2 = eval(top.cc2);
    return ev;
}

}  // namespace

std::vector<long> hwDims(const L0Module& top, const Params& par) {
    Evaluator ev = makeEvaluator(top);
    std::vector<long> dims;
    for (const LevelData& l : buildLevels(ev, par)) dims.push_back(l.dim);
    return dims;
}

std::vector<std::vector<long>> z2Grid(const L0Module& top, const qtl::SubmoduleSpecW& w, long R,
                                      const Params& par) {
    Evaluator ev = makeEvaluator(top);
    const std::size_t d0 = static_cast<std::size_t>(top.dim);
    std::vector<LevelData> levels = buildLevels(ev, par);
    std::vector<LKey> probes = torusLayer(ev.basis, 1, par.Kp);

    // all raising words of each length, with loop shifts; these span the
    // separating functionals before the pattern projection
    std::vector<std::vector<Row>> allRows(static_cast<std::size_t>(par.S) + 1);
    for (std::size_t b = 0; b < d0; ++b) allRows[0].push_back({{}, b, 0});
    for (long s = 1; s <= par.S; ++s)
        for (const LKey& h : probes)
            for (const Row& pr : allRows[static_cast<std::size_t>(s - 1)]) {
                Row r{Word{h}, pr.b, pr.shift + qtl::loopIndex(h, ev.basis)};
                r.w.insert(r.w.end(), pr.w.begin(), pr.w.end());
                allRows[static_cast<std::size_t>(s)].push_back(std::move(r));
            }

    std::vector<std::vector<long>> grid;
    for (long s = 0; s <= par.S; ++s) {
        const auto& cols = levels[static_cast<std::size_t>(s)].pivotCols;
        const auto& rows = allRows[static_cast<std::size_t>(s)];
        // evaluate once per (row word, column); cells only re-filter rows
        Matrix<u64> Mall(rows.size(), cols.size(), 0);
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < rows.size(); ++r)
                Mall.at(r, c) = ev.value(rows[r].w, cols[c].w, cols[c].b)[rows[r].b];
        std::vector<long> line;
        for (long r = -R; r <= R; ++r) {
            std::vector<std::size_t> keep;
            for (std::size_t i = 0; i < rows.size(); ++i)
                if (w.allows(rows[i].b, r + rows[i].shift)) keep.push_back(i);
            Matrix<u64> M(keep.size(), cols.size(), 0);
            for (std::size_t i = 0; i < keep.size(); ++i)
                for (std::size_t c = 0; c < cols.size(); ++c) M.at(i, c) = Mall.at(keep[i], c);
            line.push_back(static_cast<long>(pivotSets(std::move(M)).second.size()));
        }
        grid.push_back(std::move(line));
    }
    return grid;
}

}  // namespace oracle
