#ifndef QTL_MATRIX_HPP
#define QTL_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <vector>

namespace qtl {

/// Dense row-major matrix over an arbitrary scalar type.  All elimination
/// routines take the field policy explicitly and pivot on the first nonzero
/// entry of each column, so results are deterministic.
template <typename Elem>
struct Matrix {
    std::size_t rows = 0, cols = 0;
    std::vector<Elem> a;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, Elem fill = Elem{})
        : rows(r), cols(c), a(r * c, fill) {}

    Elem& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
    const Elem& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }

    std::vector<Elem> col(std::size_t c) const {
        std::vector<Elem> v(rows);
        for (std::size_t r = 0; r < rows; ++r) v[r] = at(r, c);
        return v;
    }

    void setCol(std::size_t c, const std::vector<Elem>& v) {
        for (std::size_t r = 0; r < rows; ++r) at(r, c) = v[r];
    }
};

template <typename P>
Matrix<typename P::Elem> matMul(const P& F, const Matrix<typename P::Elem>& A,
                                const Matrix<typename P::Elem>& B) {
    Matrix<typename P::Elem> C(A.rows, B.cols, F.zero());
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t k = 0; k < A.cols; ++k) {
            if (F.isZero(A.at(i, k))) continue;
            for (std::size_t j = 0; j < B.cols; ++j)
                C.at(i, j) = F.add(C.at(i, j), F.mul(A.at(i, k), B.at(k, j)));
        }
    return C;
}

template <typename P>
std::vector<typename P::Elem> matVec(const P& F, const Matrix<typename P::Elem>& A,
                                     const std::vector<typename P::Elem>& x) {
    std::vector<typename P::Elem> y(A.rows, F.zero());
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.cols; ++j)
            if (!F.isZero(A.at(i, j))) y[i] = F.add(y[i], F.mul(A.at(i, j), x[j]));
    return y;
}

/// In-place reduced row echelon form; returns the pivot column of each pivot
/// row in order.
template <typename P>
std::vector<std::size_t> rref(const P& F, Matrix<typename P::Elem>& M) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < M.cols && r < M.rows; ++c) {
        std::size_t pr = r;
        while (pr < M.rows && F.isZero(M.at(pr, c))) ++pr;
        if (pr == M.rows) continue;
        if (pr != r)
            for (std::size_t j = 0; j < M.cols; ++j) std::swap(M.at(pr, j), M.at(r, j));
        typename P::Elem pinv = F.inv(M.at(r, c));
        for (std::size_t j = c; j < M.cols; ++j) M.at(r, j) = F.mul(M.at(r, j), pinv);
        for (std::size_t i = 0; i < M.rows; ++i) {
            if (i == r || F.isZero(M.at(i, c))) continue;
            typename P::Elem f = M.at(i, c);
            for (std::size_t j = c; j < M.cols; ++j)
                M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

template <typename P>
std::size_t rank(const P& F, Matrix<typename P::Elem> M) {
    return rref(F, M).size();
}

/// Basis of the right null space, one column vector per free column, in
/// ascending free-column order with the free coordinate set to 1.
template <typename P>
std::vector<std::vector<typename P::Elem>> kernel(const P& F, Matrix<typename P::Elem> M) {
    auto pivots = rref(F, M);
    std::vector<bool> isPivot(M.cols, false);
    for (auto c : pivots) isPivot[c] = true;
    std::vector<std::vector<typename P::Elem>> basis;
    for (std::size_t fc = 0; fc < M.cols; ++fc) {
        if (isPivot[fc]) continue;
        std::vector<typename P::Elem> v(M.cols, F.zero());
        v[fc] = F.one();
        for (std::size_t pr = 0; pr < pivots.size(); ++pr)
            v[pivots[pr]] = F.neg(M.at(pr, fc));
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Solve A x = b; nullopt when inconsistent.  Free coordinates are set to 0,
/// so the answer is the unique solution whenever A has full column rank.
template <typename P>
std::optional<std::vector<typename P::Elem>> solve(const P& F,
                                                   const Matrix<typename P::Elem>& A,
                                                   const std::vector<typename P::Elem>& b) {
    Matrix<typename P::Elem> M(A.rows, A.cols + 1, F.zero());
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
        M.at(i, A.cols) = b[i];
    }
    auto pivots = rref(F, M);
    if (!pivots.empty() && pivots.back() == A.cols) return std::nullopt;
    std::vector<typename P::Elem> x(A.cols, F.zero());
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) x[pivots[pr]] = M.at(pr, A.cols);
    return x;
}

/// Solve A X = B column by column with a single elimination; nullopt when any
/// column is inconsistent.  Free coordinates are set to 0.
template <typename P>
std::optional<Matrix<typename P::Elem>> solveMulti(const P& F,
                                                   const Matrix<typename P::Elem>& A,
                                                   const Matrix<typename P::Elem>& B) {
    Matrix<typename P::Elem> M(A.rows, A.cols + B.cols, F.zero());
    for (std::size_t i = 0; i < A.rows; ++i) {
        for (std::size_t j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
        for (std::size_t j = 0; j < B.cols; ++j) M.at(i, A.cols + j) = B.at(i, j);
    }
    // eliminate with pivots restricted to the A block
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < A.cols && r < M.rows; ++c) {
        std::size_t pr = r;
        while (pr < M.rows && F.isZero(M.at(pr, c))) ++pr;
        if (pr == M.rows) continue;
        if (pr != r)
            for (std::size_t j = 0; j < M.cols; ++j) std::swap(M.at(pr, j), M.at(r, j));
        typename P::Elem pinv = F.inv(M.at(r, c));
        for (std::size_t j = c; j < M.cols; ++j) M.at(r, j) = F.mul(M.at(r, j), pinv);
        for (std::size_t i = 0; i < M.rows; ++i) {
            if (i == r || F.isZero(M.at(i, c))) continue;
            typename P::Elem f = M.at(i, c);
            for (std::size_t j = c; j < M.cols; ++j)
                M.at(i, j) = F.sub(M.at(i, j), F.mul(f, M.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    // rows below the last pivot must have vanished on the RHS too
    for (std::size_t i = r; i < M.rows; ++i)
        for (std::size_t j = A.cols; j < M.cols; ++j)
            if (!F.isZero(M.at(i, j))) return std::nullopt;
    Matrix<typename P::Elem> X(A.cols, B.cols, F.zero());
    for (std::size_t pr2 = 0; pr2 < pivots.size(); ++pr2)
        for (std::size_t j = 0; j < B.cols; ++j) X.at(pivots[pr2], j) = M.at(pr2, A.cols + j);
    return X;
}

}  // namespace qtl

#endif
