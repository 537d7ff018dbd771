#ifndef QTL_HWMOD_HPP
#define QTL_HWMOD_HPP

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <type_traits>

#include "qtl/l0mod.hpp"
#include "qtl/matrix.hpp"
#include "qtl/ratsolve.hpp"
#include "qtl/scalar.hpp"

namespace qtl {

/// Thrown when a lazily requested action cannot be resolved inside the
/// truncation windows (the stability scan is the remedy, not larger math).
struct TruncationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TruncationParams {
    long K = 4;   // generator window: |k| <= K on the depth-changing side
    long Kp = 4;  // probe window
    long S = 3;   // maximum depth

    void validate() const {
        if (K < 1 || Kp < 1 || S < 0) throw std::invalid_argument("bad truncation parameters");
    }
};

enum class Direction { highest, lowest };

/// Truncated graded module built depth by depth from a degree-0 module.
/// Slice s sits at grade dir*s (dir = -1 for highest weight, +1 for lowest);
/// slice 0 is the input degree-0 module.  Structure constants are exact and
/// are embedded into the scalar backend on use, so the same engine serves
/// both backends.
template <typename P>
struct GradedModule {
    using Elem = typename P::Elem;
    using Mat = Matrix<Elem>;

    P F;
    GradingBasis basis;
    TruncationParams trunc;
    int dir = -1;
    L0Module top;
    Elem cc1, cc2;

    /// cached factorization of the stacked probe matrix of a slice: rowIdx
    /// picks an invertible square subsystem, Rinv solves it, and the full
    /// stack verifies consistency
    struct ProbeSolver {
        std::vector<std::size_t> rowIdx;
        Mat Rinv;
        Mat A;
    };

    struct Slice {
        long dim = 0;
        // label of basis vector b: generator key applied to a parent basis
        // vector of the previous slice (depth >= 1 only)
        std::vector<std::pair<LKey, std::size_t>> labels;
        std::map<LKey, Mat> lower;  // V_s -> V_{s+1}
        std::map<LKey, Mat> raise;  // V_s -> V_{s-1}
        std::map<LKey, Mat> zero;   // V_s -> V_s
        std::optional<ProbeSolver> solver;
    };
    std::vector<Slice> slices;

    long depth() const { return static_cast<long>(slices.size()) - 1; }
    std::vector<long> dims() const {
        std::vector<long> d;
        for (const auto& s : slices) d.push_back(s.dim);
        return d;
    }

    Mat embedMat(const Matrix<Fq>& m) const {
        Mat r(m.rows, m.cols, F.zero());
        for (std::size_t i = 0; i < m.a.size(); ++i) r.a[i] = F.embed(m.a[i]);
        return r;
    }

    long relGrade(const LKey& k) const {
        return k.isCentral() ? 0 : dir * gradeOf(k, basis);
    }

    /// action of any key on slice s (target slice s + relGrade); resolved
    /// through stored windows, cached lazy recursions, and bracket splits
    Mat actAny(const LKey& k, long s) {
        const long rel = relGrade(k);
        if (s < 0 || s > depth() || s + rel < 0 || s + rel > depth())
            throw TruncationError("action leaves the stored depth range: " + k.str());
        if (rel == 0) return act0(k, s);
        if (rel == 1) return actLower(k, s);
        if (rel == -1) return actRaise(k, s);
        // split off one depth-changing unit and recurse on the remainder
        auto [A, B, c] = splitKey(k, rel > 0 ? 1 : -1);
        Mat left = rel > 0 ? matMul(F, actLower(A, s + rel - 1), actAny(B, s))
                           : matMul(F, actRaise(A, s + rel + 1), actAny(B, s));
        Mat right = rel > 0 ? matMul(F, actAny(B, s + 1), actLower(A, s))
                            : matMul(F, actAny(B, s - 1), actRaise(A, s));
        Mat r(left.rows, left.cols, F.zero());
        const Elem ci = F.inv(F.embed(c));
        for (std::size_t i = 0; i < r.a.size(); ++i)
            r.a[i] = F.mul(ci, F.sub(left.a[i], right.a[i]));
        return r;
    }

    /// action of a homogeneous element; rel fixes the target slice so the
    /// shape is right even when the element is zero
    Mat actElemAny(const LElem& e, long s, long rel) {
        for (const auto& [k, c] : e.terms)
            if (!k.isCentral() && relGrade(k) != rel)
                throw std::invalid_argument("element grade disagrees with target slice");
        const long d = dimAt(s + rel);
        Mat r(static_cast<std::size_t>(d), static_cast<std::size_t>(dimAt(s)), F.zero());
        for (const auto& [k, c] : e.terms) {
            Mat m = actAny(k, s);
            const Elem ce = F.embed(c);
            for (std::size_t i = 0; i < r.a.size(); ++i)
                r.a[i] = F.add(r.a[i], F.mul(ce, m.a[i]));
        }
        return r;
    }

    long dimAt(long s) const {
        if (s < 0 || s > depth()) throw TruncationError("slice out of range");
        return slices[static_cast<std::size_t>(s)].dim;
    }

    Mat scalarMat(long s, const Elem& c) const {
        const std::size_t d = static_cast<std::size_t>(dimAt(s));
        Mat m(d, d, F.zero());
        for (std::size_t i = 0; i < d; ++i) m.at(i, i) = c;
        return m;
    }

    Mat act0(const LKey& k, long s) {
        if (k.kind == LKey::C1) return scalarMat(s, cc1);
        if (k.kind == LKey::C2) return scalarMat(s, cc2);
        if (s == 0) return embedMat(top.act(k));
        Slice& sl = slices[static_cast<std::size_t>(s)];
        auto it = sl.zero.find(k);
        if (it != sl.zero.end()) return it->second;
        // z.(g (x) v) = [z,g].v + g.(z.v), resolved through the quotient
        const std::size_t d = static_cast<std::size_t>(sl.dim);
        Mat below = act0(k, s - 1);
        Mat out(d, d, F.zero());
        for (std::size_t b = 0; b < d; ++b) {
            const auto& [g, parent] = sl.labels[b];
            std::vector<Elem> col(d, F.zero());
            LElem br = bracketL(LElem::single(k), LElem::single(g));
            for (const auto& [gp, c] : br.terms) {
                Mat gpAct = actLower(gp, s - 1);
                const Elem ce = F.embed(c);
                for (std::size_t i = 0; i < d; ++i)
                    col[i] = F.add(col[i], F.mul(ce, gpAct.at(i, parent)));
            }
            Mat gAct = actLower(g, s - 1);
            std::vector<Elem> zv = matVec(F, gAct, below.col(parent));
            for (std::size_t i = 0; i < d; ++i) col[i] = F.add(col[i], zv[i]);
            out.setCol(b, col);
        }
        sl.zero.emplace(k, out);
        return out;
    }

    Mat actLower(const LKey& k, long s) {
        if (relGrade(k) != 1) throw std::invalid_argument("actLower on wrong grade");
        if (s == depth()) throw TruncationError("lowering out of the stored depth");
        Slice& sl = slices[static_cast<std::size_t>(s)];
        auto it = sl.lower.find(k);
        if (it != sl.lower.end()) return it->second;
        // out-of-window generator: recover its action from the probe family,
        // which determines every vector of the quotient slice uniquely
        const std::size_t dUp = static_cast<std::size_t>(dimAt(s + 1));
        const std::size_t dHere = static_cast<std::size_t>(dimAt(s));
        std::vector<LKey> probes = enumerateGraded(-dir, trunc.Kp, basis);
        Mat B(probes.size() * dHere, dHere, F.zero());
        std::size_t r0 = 0;
        for (const auto& h : probes) {
            Mat rhs(dHere, dHere, F.zero());
            LElem br = bracketL(LElem::single(h), LElem::single(k));
            for (const auto& [z, c] : br.terms) {
                Mat za = act0(z, s);
                const Elem ce = F.embed(c);
                for (std::size_t i = 0; i < rhs.a.size(); ++i)
                    rhs.a[i] = F.add(rhs.a[i], F.mul(ce, za.a[i]));
            }
            if (s > 0) {
                Mat hv = actRaise(h, s);      // V_s -> V_{s-1}
                Mat kv = actLower(k, s - 1);  // V_{s-1} -> V_s
                Mat second = matMul(F, kv, hv);
                for (std::size_t i = 0; i < rhs.a.size(); ++i)
                    rhs.a[i] = F.add(rhs.a[i], second.a[i]);
            }
            for (std::size_t i = 0; i < dHere; ++i)
                for (std::size_t j = 0; j < dHere; ++j) B.at(r0 + i, j) = rhs.at(i, j);
            r0 += dHere;
        }
        const ProbeSolver& ps = probeSolver(s + 1, probes);
        if constexpr (std::is_same_v<P, ExactField>) {
            auto X = solveColumns(ps.A, B);
            if (!X)
                throw TruncationError("generator " + k.str() +
                                      " acts outside the truncated slice; widen the window");
            sl.lower.emplace(k, *X);
            return *X;
        } else {
            // x = Rinv * B[rowIdx]; then verify the full overdetermined system
            Mat Bsub(dUp, dHere, F.zero());
            for (std::size_t i = 0; i < ps.rowIdx.size(); ++i)
                for (std::size_t j = 0; j < dHere; ++j) Bsub.at(i, j) = B.at(ps.rowIdx[i], j);
            Mat X = matMul(F, ps.Rinv, Bsub);
            Mat check = matMul(F, ps.A, X);
            for (std::size_t i = 0; i < check.a.size(); ++i)
                if (!F.isZero(F.sub(check.a[i], B.a[i])))
                    throw TruncationError("generator " + k.str() +
                                          " acts outside the truncated slice; widen the window");
            sl.lower.emplace(k, X);
            return X;
        }
    }

    /// stacked probe matrix of slice s with a precomputed square subsystem
    const ProbeSolver& probeSolver(long s, const std::vector<LKey>& probes) {
        Slice& sl = slices[static_cast<std::size_t>(s)];
        if (sl.solver) return *sl.solver;
        const std::size_t d = static_cast<std::size_t>(sl.dim);
        const std::size_t below = static_cast<std::size_t>(dimAt(s - 1));
        ProbeSolver ps;
        ps.A = Mat(probes.size() * below, d, F.zero());
        std::size_t r0 = 0;
        for (const auto& h : probes) {
            Mat m = actRaise(h, s);
            for (std::size_t i = 0; i < below; ++i)
                for (std::size_t j = 0; j < d; ++j) ps.A.at(r0 + i, j) = m.at(i, j);
            r0 += below;
        }
        if constexpr (std::is_same_v<P, ExactField>) {
            // the exact path solves against A directly, so no inverse is kept
            sl.solver = std::move(ps);
            return *sl.solver;
        } else {
            // greedily pick d independent rows, then invert that square block
            std::vector<std::vector<Elem>> vecs;
            std::vector<std::size_t> prow;
            for (std::size_t r = 0; r < ps.A.rows && ps.rowIdx.size() < d; ++r) {
                std::vector<Elem> v(d);
                for (std::size_t j = 0; j < d; ++j) v[j] = ps.A.at(r, j);
                for (std::size_t e = 0; e < vecs.size(); ++e) {
                    const Elem f = v[prow[e]];
                    if (F.isZero(f)) continue;
                    for (std::size_t j = 0; j < d; ++j)
                        v[j] = F.sub(v[j], F.mul(f, vecs[e][j]));
                }
                std::size_t pr = d;
                for (std::size_t j = 0; j < d; ++j)
                    if (!F.isZero(v[j])) {
                        pr = j;
                        break;
                    }
                if (pr == d) continue;
                const Elem inv = F.inv(v[pr]);
                for (std::size_t j = 0; j < d; ++j) v[j] = F.mul(v[j], inv);
                vecs.push_back(std::move(v));
                prow.push_back(pr);
                ps.rowIdx.push_back(r);
            }
            if (ps.rowIdx.size() != d)
                throw std::logic_error("probe stack lost column rank on a built slice");
            Mat R(d, d, F.zero());
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) R.at(i, j) = ps.A.at(ps.rowIdx[i], j);
            Mat I(d, d, F.zero());
            for (std::size_t i = 0; i < d; ++i) I.at(i, i) = F.one();
            auto Rinv = solveMulti(F, R, I);
            if (!Rinv) throw std::logic_error("probe subsystem not invertible");
            ps.Rinv = *Rinv;
            sl.solver = std::move(ps);
            return *sl.solver;
        }
    }

    Mat actRaise(const LKey& k, long s) {
        if (relGrade(k) != -1) throw std::invalid_argument("actRaise on wrong grade");
        if (s == 0) return Mat(0, static_cast<std::size_t>(dimAt(0)), F.zero());
        Slice& sl = slices[static_cast<std::size_t>(s)];
        auto it = sl.raise.find(k);
        if (it != sl.raise.end()) return it->second;
        // out-of-window probe: peel a degree-0 factor off the torus index
        Mat out = raiseViaSplit(k, s);
        sl.raise.emplace(k, out);
        return out;
    }

    /// write k (of depth-changing sign `sign`) as [A, B]/c with A one unit in
    /// the same direction at small torus index and B the remainder
    std::tuple<LKey, LKey, Fq> splitKey(const LKey& k, int sign) {
        for (long ka : {0L, 1L, -1L, 2L, -2L, 3L, -3L}) {
            for (int a = 0; a <= 1; ++a) {
                IntPair ma = basis.lattice(dir * sign, ka);
                LKey A = LKey::torus(a, ma);
                LKey B = LKey::torus(k.i - a, {k.m.first - ma.first, k.m.second - ma.second});
                if (B.isForbidden()) continue;
                Fq c = bracketL(LElem::single(A), LElem::single(B)).coeff(k);
                if (!c.isZero()) return {A, B, c};
            }
        }
        throw std::logic_error("no bracket split found for " + k.str());
    }

    Mat raiseViaSplit(const LKey& k, long s) {
        // k = [A, B]/c with A of degree 0 at small index and B a stored probe
        for (long kb = trunc.Kp; kb >= -trunc.Kp; --kb) {
            for (int a = 0; a <= 1; ++a) {
                IntPair mb = basis.lattice(-dir, kb);
                LKey B = LKey::torus(k.i - a, mb);
                LKey A = LKey::torus(a, {k.m.first - mb.first, k.m.second - mb.second});
                if (A.isForbidden()) continue;
                Fq c = bracketL(LElem::single(A), LElem::single(B)).coeff(k);
                if (c.isZero()) continue;
                Mat left = matMul(F, act0(A, s - 1), actRaise(B, s));
                Mat right = matMul(F, actRaise(B, s), act0(A, s));
                Mat r(left.rows, left.cols, F.zero());
                const Elem ci = F.inv(F.embed(c));
                for (std::size_t i = 0; i < r.a.size(); ++i)
                    r.a[i] = F.mul(ci, F.sub(left.a[i], right.a[i]));
                return r;
            }
        }
        throw std::logic_error("no raise split found for " + k.str());
    }
};

namespace detail {

template <typename T>
std::string traceSize(const std::vector<T>& v) {
    if constexpr (std::is_same_v<T, Fq>) {
        long dn = 0, dd = 0, bits = 0;
        for (const auto& e : v) {
            if (e.isZero()) continue;
            dn = std::max(dn, e.num().degreeSpan());
            dd = std::max(dd, e.den().degreeSpan());
            for (const auto& [ex, c] : e.num().terms()) {
                (void)ex;
                bits = std::max<long>(bits, mpz_sizeinbase(c.get_num().get_mpz_t(), 2));
                bits = std::max<long>(bits, mpz_sizeinbase(c.get_den().get_mpz_t(), 2));
            }
        }
        return "degN " + std::to_string(dn) + " degD " + std::to_string(dd) + " bits " +
               std::to_string(bits);
    } else {
        return std::to_string(v.size());
    }
}

/// One depth-extension step: quotient the formal span of generator images by
/// the joint kernel of the probe maps.
///
/// The elimination walks columns left to right so the chosen basis is the
/// lexicographically earliest independent family, and activates probe blocks
/// lazily: most of the kernel is already cut out by a few probes, and the
/// remaining blocks only need to confirm the discovered column relations.
template <typename P>
void extendDegree(GradedModule<P>& mod) {
    const long s = mod.depth();
    if (s >= mod.trunc.S) throw std::invalid_argument("already at maximum depth");
    using Mat = typename GradedModule<P>::Mat;
    using Elem = typename P::Elem;
    const P& F = mod.F;
    auto& sl = mod.slices[static_cast<std::size_t>(s)];
    const std::size_t dimV = static_cast<std::size_t>(sl.dim);
    std::vector<LKey> gens = enumerateGraded(mod.dir, mod.trunc.K, mod.basis);
    std::vector<LKey> probes = enumerateGraded(-mod.dir, mod.trunc.Kp, mod.basis);
    const std::size_t cols = gens.size() * dimV;
    // block(h) holds Phi_h on all formal columns, materialized once
    std::vector<std::optional<Mat>> blocks(probes.size());
    auto block = [&](std::size_t hi) -> const Mat& {
        if (!blocks[hi]) {
            Mat bm(dimV, cols, F.zero());
            for (std::size_t gi = 0; gi < gens.size(); ++gi) {
                // Phi_h(g (x) v) = [h,g].v + g.(h.v)
                Mat bb(dimV, dimV, F.zero());
                LElem br = bracketL(LElem::single(probes[hi]), LElem::single(gens[gi]));
                for (const auto& [z, c] : br.terms) {
                    Mat za = mod.act0(z, s);
                    const Elem ce = F.embed(c);
                    for (std::size_t i = 0; i < bb.a.size(); ++i)
                        bb.a[i] = F.add(bb.a[i], F.mul(ce, za.a[i]));
                }
                if (s > 0) {
                    Mat second =
                        matMul(F, mod.actLower(gens[gi], s - 1), mod.actRaise(probes[hi], s));
                    for (std::size_t i = 0; i < bb.a.size(); ++i)
                        bb.a[i] = F.add(bb.a[i], second.a[i]);
                }
                for (std::size_t i = 0; i < dimV; ++i)
                    for (std::size_t j = 0; j < dimV; ++j)
                        bm.at(i, gi * dimV + j) = bb.at(i, j);
            }
            blocks[hi] = std::move(bm);
        }
        return *blocks[hi];
    };

    std::vector<std::size_t> pivots;
    // coords[c]: coordinates of formal column c in the pivot columns
    std::vector<std::vector<Elem>> coords;
    if constexpr (std::is_same_v<P, ExactField>) {
        // rational-function elimination swells badly here; the modular
        // analysis keeps the arithmetic in word-sized residues instead
        Mat big(probes.size() * dimV, cols, F.zero());
        for (std::size_t hi = 0; hi < probes.size(); ++hi) {
            const Mat& bm = block(hi);
            for (std::size_t i = 0; i < dimV; ++i)
                for (std::size_t c = 0; c < cols; ++c) big.at(hi * dimV + i, c) = bm.at(i, c);
        }
        ColumnAnalysis ca = analyzeColumns(big);
        pivots = std::move(ca.pivots);
        coords = std::move(ca.coords);
    } else {
        const bool trace = std::getenv("QTL_TRACE") != nullptr;
        std::vector<std::size_t> active;
        if (!probes.empty()) active.push_back(0);
        for (;;) {
            pivots.clear();
            coords.assign(cols, {});
            const std::size_t rows = active.size() * dimV;
            // incremental echelon basis of the active column space with the
            // expression of each echelon vector in pivot columns
            std::vector<std::vector<Elem>> vecs, expr;
            std::vector<std::size_t> prow;
            for (std::size_t c = 0; c < cols; ++c) {
                std::vector<Elem> v(rows);
                for (std::size_t ai = 0; ai < active.size(); ++ai) {
                    const Mat& bm = block(active[ai]);
                    for (std::size_t i = 0; i < dimV; ++i) v[ai * dimV + i] = bm.at(i, c);
                }
                std::vector<Elem> x(pivots.size(), F.zero());
                for (std::size_t e = 0; e < vecs.size(); ++e) {
                    const Elem f = v[prow[e]];
                    if (F.isZero(f)) continue;
                    for (std::size_t i = 0; i < rows; ++i)
                        v[i] = F.sub(v[i], F.mul(f, vecs[e][i]));
                    for (std::size_t b = 0; b < expr[e].size(); ++b)
                        x[b] = F.add(x[b], F.mul(f, expr[e][b]));
                }
                std::size_t pr = rows;
                for (std::size_t i = 0; i < rows; ++i)
                    if (!F.isZero(v[i])) {
                        pr = i;
                        break;
                    }
                if (pr == rows) {
                    coords[c] = std::move(x);
                    continue;
                }
                const Elem inv = F.inv(v[pr]);
                for (std::size_t i = 0; i < rows; ++i) v[i] = F.mul(v[i], inv);
                std::vector<Elem> ex(pivots.size() + 1, F.zero());
                for (std::size_t b = 0; b < x.size(); ++b) ex[b] = F.neg(F.mul(inv, x[b]));
                ex[pivots.size()] = inv;
                vecs.push_back(std::move(v));
                prow.push_back(pr);
                expr.push_back(std::move(ex));
                pivots.push_back(c);
                coords[c] = std::vector<Elem>(pivots.size(), F.zero());
                coords[c].back() = F.one();
                if (trace)
                    std::cerr << "col " << c << "/" << cols << " rank " << pivots.size()
                              << " sz " << traceSize(vecs.back()) << std::endl;
            }
            // verify the found relations against every inactive probe block;
            // a violated relation activates that block and restarts
            std::optional<std::size_t> bad;
            for (std::size_t hi = 0; hi < probes.size() && !bad; ++hi) {
                if (std::find(active.begin(), active.end(), hi) != active.end()) continue;
                const Mat& bm = block(hi);
                for (std::size_t c = 0; c < cols && !bad; ++c) {
                    if (!coords[c].empty() && coords[c].back() == F.one() &&
                        !pivots.empty() && pivots[coords[c].size() - 1] == c)
                        continue;  // pivot column, trivially consistent
                    for (std::size_t i = 0; i < dimV && !bad; ++i) {
                        Elem acc = bm.at(i, c);
                        for (std::size_t b = 0; b < coords[c].size(); ++b)
                            acc = F.sub(acc, F.mul(coords[c][b], bm.at(i, pivots[b])));
                        if (!F.isZero(acc)) bad = hi;
                    }
                }
            }
            if (!bad) break;
            active.push_back(*bad);
            std::sort(active.begin(), active.end());
        }
    }

    const std::size_t newDim = pivots.size();
    typename GradedModule<P>::Slice next;
    next.dim = static_cast<long>(newDim);
    for (std::size_t c : pivots) next.labels.emplace_back(gens[c / dimV], c % dimV);
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        Mat act(newDim, dimV, F.zero());
        for (std::size_t j = 0; j < dimV; ++j) {
            const std::size_t c = gi * dimV + j;
            for (std::size_t b = 0; b < coords[c].size(); ++b) act.at(b, j) = coords[c][b];
        }
        sl.lower.emplace(gens[gi], act);
    }
    for (std::size_t hi = 0; hi < probes.size(); ++hi) {
        const Mat& bm = block(hi);
        Mat act(dimV, newDim, F.zero());
        for (std::size_t b = 0; b < newDim; ++b)
            for (std::size_t i = 0; i < dimV; ++i) act.at(i, b) = bm.at(i, pivots[b]);
        next.raise.emplace(probes[hi], act);
    }
    mod.slices.push_back(std::move(next));
}

}  // namespace detail

template <typename P>
GradedModule<P> buildHwModule(const P& F, const L0Module& v0, const GradingBasis& basis,
                              const TruncationParams& trunc,
                              Direction direction = Direction::highest) {
    trunc.validate();
    if (!(v0.basis.m1 == basis.m1 && v0.basis.m2 == basis.m2))
        throw std::invalid_argument("degree-0 module and grading basis disagree");
    GradedModule<P> mod;
    mod.F = F;
    mod.basis = basis;
    mod.trunc = trunc;
    mod.dir = direction == Direction::highest ? -1 : 1;
    mod.top = v0;
    mod.cc1 = F.embed(v0.cc1);
    mod.cc2 = F.embed(v0.cc2);
    typename GradedModule<P>::Slice s0;
    s0.dim = v0.dim;
    mod.slices.push_back(std::move(s0));
    for (long s = 0; s < trunc.S; ++s) detail::extendDegree(mod);
    return mod;
}

struct StabilityReport {
    std::vector<std::vector<long>> dimTables;  // one row per truncation
    bool stable = false;
};

template <typename P>
StabilityReport stabilityScan(const P& F, const L0Module& v0, const GradingBasis& basis,
                              const std::vector<TruncationParams>& truncs,
                              Direction direction = Direction::highest) {
    StabilityReport rep;
    for (const auto& t : truncs)
        rep.dimTables.push_back(buildHwModule(F, v0, basis, t, direction).dims());
    const std::size_t n = rep.dimTables.size();
    rep.stable = n >= 2 && rep.dimTables[n - 1] == rep.dimTables[n - 2];
    return rep;
}

struct GrowthReport {
    bool pass = true;
    bool trivial = true;
    std::vector<long> witnessRank;  // entry n-1: rank of the witness set at depth n
};

/// dim V_{-n} >= n for every built depth of a nontrivial module, with the
/// explicit witness vectors (t0^0 t^{-m1})^j . t0^l t^{(-n+j)m1 + k m2} . v0
template <typename P>
GrowthReport growthCheck(GradedModule<P>& mod) {
    GrowthReport rep;
    const P& F = mod.F;
    const long S = mod.depth();
    for (long s = 1; s <= S; ++s)
        if (mod.dimAt(s) > 0) rep.trivial = false;
    if (rep.trivial) return rep;
    const LKey step = LKey::torus(0, mod.basis.lattice(mod.dir, 0));
    for (long n = 1; n <= S; ++n) {
        if (mod.dimAt(n) < n) rep.pass = false;
        // one witness per j, scanning small (l, k) for a nonzero vector
        const std::size_t dN = static_cast<std::size_t>(mod.dimAt(n));
        Matrix<typename P::Elem> wit(dN, static_cast<std::size_t>(n), F.zero());
        for (long j = 0; j < n; ++j) {
            std::vector<typename P::Elem> v;
            bool found = false;
            for (long l = 0; l <= 1 && !found; ++l)
                for (long k = -2; k <= 2 && !found; ++k) {
                    LKey seed = LKey::torus(static_cast<int>(l),
                                            mod.basis.lattice(mod.dir * (n - j), k));
                    if (seed.isForbidden()) continue;
                    std::vector<typename P::Elem> w(static_cast<std::size_t>(mod.dimAt(0)),
                                                    F.zero());
                    if (w.empty()) continue;
                    w[0] = F.one();
                    w = matVec(F, mod.actAny(seed, 0), w);
                    long at = n - j;
                    for (long p = 0; p < j; ++p, ++at) w = matVec(F, mod.actAny(step, at), w);
                    bool nz = false;
                    for (const auto& x : w)
                        if (!F.isZero(x)) nz = true;
                    if (nz) {
                        v = w;
                        found = true;
                    }
                }
            if (found) wit.setCol(static_cast<std::size_t>(j), v);
        }
        rep.witnessRank.push_back(static_cast<long>(rank(F, wit)));
    }
    return rep;
}

/// smallest power of t0^0 t^m + sign t0^1 t^m killing basis vector vIndex of
/// the top slice, or nullopt up to maxPower
template <typename P>
std::optional<long> integrabilityProbe(GradedModule<P>& mod, IntPair m, int sign, long vIndex,
                                       long maxPower) {
    const P& F = mod.F;
    if (((m.first % 2) + 2) % 2 != 1)
        throw std::invalid_argument("integrability probe needs odd first exponent");
    LKey k0 = LKey::torus(0, m), k1 = LKey::torus(1, m);
    const long rel = mod.relGrade(k0);
    if (rel < 1) throw std::invalid_argument("probe element must move away from the top");
    if (rel * maxPower > mod.depth())
        throw std::invalid_argument("probe power exceeds the built depth");
    std::vector<typename P::Elem> v(static_cast<std::size_t>(mod.dimAt(0)), F.zero());
    if (vIndex < 0 || vIndex >= mod.dimAt(0)) throw std::invalid_argument("bad vector index");
    v[static_cast<std::size_t>(vIndex)] = F.one();
    long at = 0;
    for (long p = 1; p <= maxPower; ++p) {
        auto w0 = matVec(F, mod.actAny(k0, at), v);
        auto w1 = matVec(F, mod.actAny(k1, at), v);
        v.assign(w0.size(), F.zero());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = sign >= 0 ? F.add(w0[i], w1[i]) : F.sub(w0[i], w1[i]);
        at += rel;
        bool nz = false;
        for (const auto& x : v)
            if (!F.isZero(x)) nz = true;
        if (!nz) return p;
    }
    return std::nullopt;
}

/// full commutation audit over the stored generator windows; returns one
/// message per failing pair
template <typename P>
std::vector<std::string> auditCommutation(GradedModule<P>& mod, long window, long probeWindow) {
    const P& F = mod.F;
    std::vector<std::string> failures;
    std::vector<LKey> keys;
    for (const auto& k : enumerateGraded(mod.dir, window, mod.basis)) keys.push_back(k);
    for (const auto& k : enumerateGraded(0, window, mod.basis)) keys.push_back(k);
    for (const auto& k : enumerateGraded(-mod.dir, probeWindow, mod.basis)) keys.push_back(k);
    const long S = mod.depth();
    for (const auto& a : keys)
        for (const auto& b : keys) {
            const long ra = mod.relGrade(a), rb = mod.relGrade(b);
            for (long s = 0; s <= S; ++s) {
                if (s + ra < 0 || s + ra > S || s + rb < 0 || s + rb > S) continue;
                if (s + ra + rb < 0 || s + ra + rb > S) continue;
                auto lhsElem = bracketL(LElem::single(a), LElem::single(b));
                typename GradedModule<P>::Mat lhs = mod.actElemAny(lhsElem, s, ra + rb);
                auto rhs1 = matMul(F, mod.actAny(a, s + rb), mod.actAny(b, s));
                auto rhs2 = matMul(F, mod.actAny(b, s + ra), mod.actAny(a, s));
                bool ok = true;
                for (std::size_t i = 0; i < lhs.a.size(); ++i)
                    if (!F.isZero(F.sub(lhs.a[i], F.sub(rhs1.a[i], rhs2.a[i])))) ok = false;
                if (!ok) {
                    std::ostringstream os;
                    os << "[" << a.str() << ", " << b.str() << "] at slice " << s;
                    failures.push_back(os.str());
                }
            }
        }
    return failures;
}

namespace detail {

/// rank dispatch: the exact backend goes through the modular kernel, the
/// generic elimination swells on deep slices
template <typename P>
std::size_t policyRank(const P& F, const Matrix<typename P::Elem>& M) {
    if constexpr (std::is_same_v<P, ExactField>)
        return rankModular(M);
    else
        return rank(F, M);
}

/// right null space basis as columns, through the modular kernel for the
/// exact backend
template <typename P>
Matrix<typename P::Elem> policyKernel(const P& F, const Matrix<typename P::Elem>& M) {
    std::vector<std::vector<typename P::Elem>> basis;
    if constexpr (std::is_same_v<P, ExactField>) {
        ColumnAnalysis ca = analyzeColumns(M);
        std::vector<char> isPivot(M.cols, 0);
        for (std::size_t c : ca.pivots) isPivot[c] = 1;
        for (std::size_t c = 0; c < M.cols; ++c) {
            if (isPivot[c]) continue;
            std::vector<Fq> v(M.cols, Fq());
            v[c] = Fq(1);
            for (std::size_t b = 0; b < ca.pivots.size(); ++b)
                v[ca.pivots[b]] = -ca.coords[c][b];
            basis.push_back(std::move(v));
        }
    } else {
        basis = kernel(F, M);
    }
    Matrix<typename P::Elem> K(M.cols, basis.size(), F.zero());
    for (std::size_t j = 0; j < basis.size(); ++j) K.setCol(j, basis[j]);
    return K;
}

}  // namespace detail

/// the installed depth-increasing maps jointly span each deeper slice
template <typename P>
bool surjectivityOk(GradedModule<P>& mod) {
    const P& F = mod.F;
    for (long s = 0; s < mod.depth(); ++s) {
        const std::size_t dUp = static_cast<std::size_t>(mod.dimAt(s + 1));
        if (dUp == 0) continue;
        std::vector<std::vector<typename P::Elem>> cols;
        for (const auto& [k, m] :
             mod.slices[static_cast<std::size_t>(s)].lower)
            for (std::size_t c = 0; c < m.cols; ++c) cols.push_back(m.col(c));
        Matrix<typename P::Elem> M(dUp, cols.size(), F.zero());
        for (std::size_t c = 0; c < cols.size(); ++c) M.setCol(c, cols[c]);
        if (detail::policyRank(F, M) != dUp) return false;
    }
    return true;
}

/// no nonzero stored vector is killed by every stored probe
template <typename P>
bool faithfulnessOk(GradedModule<P>& mod) {
    const P& F = mod.F;
    for (long s = 1; s <= mod.depth(); ++s) {
        const std::size_t d = static_cast<std::size_t>(mod.dimAt(s));
        if (d == 0) continue;
        std::size_t rows = 0;
        const auto& raise = mod.slices[static_cast<std::size_t>(s)].raise;
        for (const auto& [k, m] : raise) rows += m.rows;
        Matrix<typename P::Elem> M(rows, d, F.zero());
        std::size_t r0 = 0;
        for (const auto& [k, m] : raise) {
            for (std::size_t i = 0; i < m.rows; ++i)
                for (std::size_t j = 0; j < d; ++j) M.at(r0 + i, j) = m.at(i, j);
            r0 += m.rows;
        }
        if (detail::policyRank(F, M) != d) return false;
    }
    return true;
}

/// dim V_{s+1} <= 2 deg(P_{s+1}) dim V_s for a known recurrence order, with
/// P_{s+1}(x) = P_s(q^a x) P_s(x) P_s(q^-a x) so deg P_{s+1} = 3^s deg P
template <typename P>
bool dimensionBoundOk(const GradedModule<P>& mod, long degP) {
    long deg = degP;
    for (long s = 0; s < mod.depth(); ++s, deg *= 3)
        if (mod.dimAt(s + 1) > 2 * deg * mod.dimAt(s)) return false;
    return true;
}

}  // namespace qtl

#endif
