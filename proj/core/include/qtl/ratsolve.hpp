#ifndef QTL_RATSOLVE_HPP
#define QTL_RATSOLVE_HPP

#include <optional>
#include <vector>

#include "qtl/field.hpp"
#include "qtl/matrix.hpp"

namespace qtl {

/// Column-space analysis of a matrix over the rational function field:
/// lexicographically earliest independent columns and the coordinates of
/// every column in those pivots.
struct ColumnAnalysis {
    std::vector<std::size_t> pivots;
    std::vector<std::vector<Fq>> coords;  // coords[c] has pivots.size() entries
};

/// Exact analysis via modular specialization: pivot independence is certified
/// by a single specialization; coordinates are recovered by rational-function
/// interpolation over many specializations and re-checked on the full system
/// at pseudo-random fresh points before being accepted.
ColumnAnalysis analyzeColumns(const Matrix<Fq>& M);

/// Exact solve A X = B; nullopt when some column of B is not in the column
/// space of A.
std::optional<Matrix<Fq>> solveColumns(const Matrix<Fq>& A, const Matrix<Fq>& B);

/// Rank via several modular specializations: each specialized rank is a
/// certified lower bound, and equality with the exact rank fails only when
/// every chosen point lies on the vanishing locus of all maximal minors.
std::size_t rankModular(const Matrix<Fq>& M);

}  // namespace qtl

#endif
