#ifndef QTL_L0MOD_HPP
#define QTL_L0MOD_HPP

#include <array>
#include <functional>
#include <vector>

#include "qtl/algebra.hpp"
#include "qtl/matrix.hpp"

namespace qtl {

struct Sl2Triple {
    Matrix<Fq> e12, e21, h;
};

/// Standard d-dimensional irreducible: H diagonal d-1, d-3, ..., 1-d; E21
/// lowers with coefficient 1; E12 raises so that [E12,E21] = H.
Sl2Triple sl2Irrep(long d);

/// Exp-polynomial data for the even case: per root r and parity j, the
/// coefficient list of a polynomial in the loop index i.
struct ExpPolyDataEven {
    std::vector<Fq> roots;
    std::vector<std::array<std::vector<Fq>, 2>> coeffs;  // [root][parity]
};

struct ExpPolyDataOdd {
    std::vector<Fq> roots;
    std::vector<std::vector<Fq>> coeffs;  // [root]
};

/// One-dimensional module data for even m21: psi on the degree-0 torus keys
/// plus the central scalars.
struct Character {
    GradingBasis basis;
    std::function<Fq(int j, long k)> torus;  // psi(t0^j t^{k m2})
    Fq cc1, cc2;                             // scalar actions of c1, c2

    Fq beta() const { return cc1 * Fq(basis.m1.first) + cc2 * Fq(basis.m1.second); }
    Fq psiKey(const LKey& k) const;
    Fq psi(const LElem& e) const;
};

/// psi on the Heisenberg part for odd m21: values on t0^0 t^{2j m2} (j != 0)
/// plus psi(beta).
struct OddPsi {
    std::function<Fq(long j)> value;
    Fq beta;
};

struct EvalModuleSpec {
    std::vector<Fq> mu;      // distinct, nonzero
    std::vector<long> dims;  // same length, all >= 1
    OddPsi psiA;

    void validate() const;
};

/// Finite-dimensional L0-module with on-demand exact action matrices for
/// every degree-0 torus key; a window of matrices is precomputed.
struct L0Module {
    GradingBasis basis;
    long dim = 1;
    bool oddCase = false;
    Fq cc1, cc2;
    std::function<Matrix<Fq>(int i, long k)> torusAct;  // t0^i t^{k m2}

    Matrix<Fq> act(const LKey& k) const;
    /// action of a degree-0 element (throws on nonzero grade)
    Matrix<Fq> actElem(const LElem& e) const;
};

Character psiFromExpPolyEven(const ExpPolyDataEven& data, const GradingBasis& basis);
OddPsi psiFromExpPolyOdd(const ExpPolyDataOdd& data, const GradingBasis& basis);

/// Character from an explicit value window (j parity, loop index) -> value,
/// for exercising non-closed-form cases; missing keys throw.
Character characterFromWindow(const GradingBasis& basis,
                              const std::map<std::pair<int, long>, Fq>& values, const Fq& psiBeta);

L0Module buildEvalModule(const EvalModuleSpec& spec, const GradingBasis& basis, long window);
L0Module moduleFromCharacter(const Character& chi);

/// Both annihilation operators of the degree-0 module theory applied to the
/// module; b holds b_1..b_n.
bool remark26Check(const L0Module& mod, const std::vector<Fq>& b, int k);

/// The equivalent divisibility test: prod over slots of dimension >= 2 of
/// (x - mu_i) divides sum b_i x^i.
bool remark26Divisibility(const EvalModuleSpec& spec, const std::vector<Fq>& b);

}  // namespace qtl

#endif
