#ifndef QTL_QUASIFIN_HPP
#define QTL_QUASIFIN_HPP

#include <optional>

#include "qtl/l0mod.hpp"

namespace qtl {

/// Certificate polynomial P = sum a_i t^{i m2} (even case) or
/// sum a_i t^{2i m2} (odd case), a_0 and a_n nonzero.
struct RecurrencePoly {
    std::vector<Fq> a;
    long order() const { return static_cast<long>(a.size()) - 1; }
};

/// Derived scalar sequence f_{j,i} (even, both parities) or f_i (odd,
/// stored at parity slot 0), covering indices -range..range.
struct SequenceWindow {
    bool even = true;
    long range = 0;
    std::map<std::pair<int, long>, Fq> f;

    const Fq& at(int j, long i) const { return f.at({j, i}); }
};

SequenceWindow deriveSequence(const Character& psi, long range);
SequenceWindow deriveSequence(const OddPsi& psi, const GradingBasis& basis, long range);

/// Minimal-order recurrence b_0..b_n (b_0, b_n nonzero, b_n = 1) satisfied
/// by the whole window, found by exact kernel elimination in ascending
/// order; nullopt when nothing of order <= maxOrder works.
std::optional<std::vector<Fq>> recurrenceDetectRaw(const SequenceWindow& w, long maxOrder);

/// Raw recurrence rescaled to the certificate polynomial:
/// a_i = b_i q^{i^2 m21 m22 / 2} (even) or a_i = b_i q^{2 i^2 m21 m22} (odd).
std::optional<RecurrencePoly> recurrenceDetect(const SequenceWindow& w, long maxOrder,
                                               const GradingBasis& basis);

bool checkConditionEven(const Character& psi, const RecurrencePoly& P, long window);
bool checkConditionOdd(const EvalModuleSpec& spec, const RecurrencePoly& P,
                       const GradingBasis& basis, long window);

struct Verdict {
    bool quasifinite = false;  // false means unknown within the window, never "no"
    std::optional<RecurrencePoly> certificate;
    long maxOrder = 0;
    long range = 0;
    bool conditionHolds = false;
};

Verdict verdictEven(const Character& psi, long maxOrder, long range);
Verdict verdictOdd(const EvalModuleSpec& spec, const GradingBasis& basis, long maxOrder,
                   long range);

}  // namespace qtl

#endif
