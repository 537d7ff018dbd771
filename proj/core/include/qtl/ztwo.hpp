#ifndef QTL_ZTWO_HPP
#define QTL_ZTWO_HPP

#include <cstdlib>
#include <map>

#include "qtl/hwmod.hpp"

namespace qtl {

/// A Z-graded subspace W of V_0 (x) C[x^{+-1}] given as a residue pattern:
/// slot b admits loop exponent r iff r mod modulus lies in residues[b].
struct SubmoduleSpecW {
    long modulus = 1;
    std::vector<std::vector<long>> residues;  // one list per top slot

    bool allows(std::size_t b, long r) const {
        const long m = ((r % modulus) + modulus) % modulus;
        for (long x : residues[b])
            if (((x % modulus) + modulus) % modulus == m) return true;
        return false;
    }

    void validate(long topDim) const {
        if (modulus < 1) throw std::invalid_argument("pattern modulus must be positive");
        if (residues.size() != static_cast<std::size_t>(topDim))
            throw std::invalid_argument("pattern size disagrees with the top dimension");
        bool any = false;
        for (const auto& rs : residues) any = any || !rs.empty();
        if (!any) throw std::invalid_argument("empty submodule pattern");
    }

    static SubmoduleSpecW full(long topDim) {
        SubmoduleSpecW w;
        w.residues.assign(static_cast<std::size_t>(topDim), {0});
        return w;
    }
};

struct WReport {
    bool invariant = true;
    bool irreducibleAtWindow = true;
    std::vector<std::string> violations;
};

/// Invariance of W under the windowed degree-0 generators, plus a window
/// irreducibility certificate by orbit-span saturation: the orbit of every
/// pattern basis vector must cover every pattern cell of the core region.
WReport verifyW(const L0Module& top, const SubmoduleSpecW& w, long window);

/// Loop exponent of a torus key in the grading basis.
inline long loopIndex(const LKey& k, const GradingBasis& basis) {
    return k.isCentral() ? 0 : basis.coords(k.m).second;
}

/// The loop extension V (x) C[x^{+-1}]: cell (-s, r) starts as V_{-s} (x) x^r
/// and t0^i t^{a m1 + b m2} shifts it to (-s+a, r+b).  The quotient by the
/// maximal graded submodule meeting W trivially is computed cell by cell: a
/// vector survives iff some raising chain lands nonzero inside a W-allowed
/// top cell, so the cell dimension is the rank of the stacked W-projected
/// chains and the cell kernel is their joint null space.
template <typename P>
struct Z2GradedModule {
    using Elem = typename P::Elem;

    GradedModule<P> base;
    SubmoduleSpecW w;
    long R = 0;
    // chains[s]: raising chains V_{-s} -> V_0 with their total loop shift
    std::vector<std::vector<std::pair<long, Matrix<Elem>>>> chains;

    long depth() const { return static_cast<long>(chains.size()) - 1; }

    /// stacked W-projected chain matrix of cell (-s, r)
    Matrix<Elem> cellProbe(long s, long r) const {
        const P& F = base.F;
        const auto& ch = chains[static_cast<std::size_t>(s)];
        const std::size_t cols = static_cast<std::size_t>(base.dimAt(s));
        const std::size_t d0 = static_cast<std::size_t>(base.dimAt(0));
        std::vector<std::pair<const Matrix<Elem>*, std::size_t>> rows;
        for (const auto& [shift, m] : ch)
            for (std::size_t b = 0; b < d0; ++b)
                if (w.allows(b, r + shift)) rows.emplace_back(&m, b);
        Matrix<Elem> M(rows.size(), cols, F.zero());
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t c = 0; c < cols; ++c) M.at(i, c) = rows[i].first->at(rows[i].second, c);
        return M;
    }

    long cellDim(long s, long r) const {
        if (base.dimAt(s) == 0) return 0;
        return static_cast<long>(detail::policyRank(base.F, cellProbe(s, r)));
    }

    /// basis of the killed subspace of cell (-s, r), as columns
    Matrix<Elem> cellKernel(long s, long r) const {
        return detail::policyKernel(base.F, cellProbe(s, r));
    }
};

template <typename P>
Z2GradedModule<P> extendZ2(const P& F, const L0Module& v0, const SubmoduleSpecW& w, long R,
                           const TruncationParams& trunc, Direction direction = Direction::highest) {
    w.validate(v0.dim);
    if (R < 1) throw std::invalid_argument("loop window must be positive");
    Z2GradedModule<P> z;
    z.w = w;
    z.R = R;
    z.base = buildHwModule(F, v0, v0.basis, trunc, direction);
    auto& mod = z.base;
    std::vector<LKey> probes = enumerateGraded(-mod.dir, mod.trunc.Kp, mod.basis);
    const std::size_t d0 = static_cast<std::size_t>(mod.dimAt(0));
    Matrix<typename P::Elem> id(d0, d0, F.zero());
    for (std::size_t i = 0; i < d0; ++i) id.at(i, i) = F.one();
    z.chains.push_back({{0, std::move(id)}});
    for (long s = 1; s <= mod.depth(); ++s) {
        std::vector<std::pair<long, Matrix<typename P::Elem>>> next;
        for (const auto& [shift, m] : z.chains[static_cast<std::size_t>(s - 1)])
            for (const LKey& k : probes) {
                auto comp = matMul(F, m, mod.actAny(k, s));
                bool nz = false;
                for (const auto& e : comp.a)
                    if (!F.isZero(e)) nz = true;
                if (nz) next.emplace_back(shift + loopIndex(k, mod.basis), std::move(comp));
            }
        z.chains.push_back(std::move(next));
    }
    return z;
}

/// Dimension grid of the quotient: rows s = 0..S, columns r = -R..R.
template <typename P>
std::vector<std::vector<long>> z2Dims(const Z2GradedModule<P>& z) {
    std::vector<std::vector<long>> grid;
    for (long s = 0; s <= z.depth(); ++s) {
        std::vector<long> row;
        for (long r = -z.R; r <= z.R; ++r) row.push_back(z.cellDim(s, r));
        grid.push_back(std::move(row));
    }
    return grid;
}

/// The actions descend to the cell quotients: every windowed generator maps
/// the killed subspace of a cell into the killed subspace of the target cell
/// given by the shift rule.
template <typename P>
bool shiftRuleAudit(Z2GradedModule<P>& z, long window) {
    auto& mod = z.base;
    const P& F = mod.F;
    std::vector<LKey> keys;
    for (int g : {-1, 0, 1})
        for (const LKey& k : enumerateGraded(g * mod.dir, window, mod.basis)) keys.push_back(k);
    for (long s = 0; s <= z.depth(); ++s)
        for (long r = -z.R; r <= z.R; ++r) {
            Matrix<typename P::Elem> ker = z.cellKernel(s, r);
            if (ker.cols == 0) continue;
            for (const LKey& k : keys) {
                const long st = s + mod.relGrade(k);
                if (st < 0 || st > z.depth()) continue;
                const long rt = r + loopIndex(k, mod.basis);
                auto img = matMul(F, mod.actAny(k, s), ker);
                bool nz = false;
                for (const auto& e : img.a)
                    if (!F.isZero(e)) nz = true;
                if (!nz) continue;
                // image columns must lie inside the target cell kernel
                Matrix<typename P::Elem> tk = z.cellKernel(st, rt);
                Matrix<typename P::Elem> join(tk.rows, tk.cols + img.cols, F.zero());
                for (std::size_t i = 0; i < tk.rows; ++i) {
                    for (std::size_t j = 0; j < tk.cols; ++j) join.at(i, j) = tk.at(i, j);
                    for (std::size_t j = 0; j < img.cols; ++j)
                        join.at(i, tk.cols + j) = img.at(i, j);
                }
                if (detail::policyRank(F, join) != detail::policyRank(F, tk)) return false;
            }
        }
    return true;
}

}  // namespace qtl

#endif
