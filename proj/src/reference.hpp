#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"
#include "sparsemat.hpp"

// Small dense rational routines used as an independent check on the sparse
// pipeline. Textbook algorithms on purpose: full pivot search, no sparsity,
// no shared code with the elimination path they are checking.
namespace rowfall::reference {

using Dense = std::vector<std::vector<Rational>>;

inline constexpr std::int64_t kMaxOracleDim = 64;

inline void check_dims(std::int64_t r, std::int64_t c) {
    if (r > kMaxOracleDim || c > kMaxOracleDim)
        throw InvalidArgumentError("dense oracle is capped at 64x64");
}

inline Dense dense(std::int64_t rows, std::int64_t cols) {
    check_dims(rows, cols);
    return Dense(static_cast<std::size_t>(rows),
                 std::vector<Rational>(static_cast<std::size_t>(cols), Rational(0)));
}

template <typename T>
Dense to_dense(const SparseMatrix<T>& m) {
    Dense d = dense(m.rows(), m.cols());
    for (std::int64_t i = 0; i < m.rows(); ++i)
        for (const auto& e : m.row(i).entries())
            d[static_cast<std::size_t>(i)][static_cast<std::size_t>(e.col)] = Rational(e.val);
    return d;
}

// Gaussian elimination with full pivoting; returns the rank.
inline std::int64_t rank_dense(Dense a) {
    std::int64_t rows = static_cast<std::int64_t>(a.size());
    std::int64_t cols = rows ? static_cast<std::int64_t>(a[0].size()) : 0;
    check_dims(rows, cols);

    std::int64_t rank = 0;
    std::int64_t top = 0;
    while (top < rows) {
        // Find any non-zero in the remaining block.
        std::int64_t pi = -1, pj = -1;
        for (std::int64_t i = top; i < rows && pi < 0; ++i)
            for (std::int64_t j = 0; j < cols; ++j)
                if (sgn(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi < 0)
            break;
        std::swap(a[static_cast<std::size_t>(top)], a[static_cast<std::size_t>(pi)]);
        const Rational piv = a[static_cast<std::size_t>(top)][static_cast<std::size_t>(pj)];
        for (std::int64_t i = top + 1; i < rows; ++i) {
            Rational f = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(pj)] / piv;
            if (sgn(f) == 0)
                continue;
            for (std::int64_t j = 0; j < cols; ++j)
                a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
                    f * a[static_cast<std::size_t>(top)][static_cast<std::size_t>(j)];
        }
        ++rank;
        ++top;
    }
    return rank;
}

inline Dense matmul(const Dense& a, const Dense& b) {
    std::int64_t n = static_cast<std::int64_t>(a.size());
    std::int64_t k = n ? static_cast<std::int64_t>(a[0].size()) : 0;
    std::int64_t kb = static_cast<std::int64_t>(b.size());
    std::int64_t m = kb ? static_cast<std::int64_t>(b[0].size()) : 0;
    if (k != kb)
        throw InvalidArgumentError("matmul: inner dimensions differ");
    check_dims(n, m);
    Dense c = dense(n, m);
    for (std::int64_t i = 0; i < n; ++i)
        for (std::int64_t l = 0; l < k; ++l) {
            const Rational& ail = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
            if (sgn(ail) == 0)
                continue;
            for (std::int64_t j = 0; j < m; ++j)
                c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    ail * b[static_cast<std::size_t>(l)][static_cast<std::size_t>(j)];
        }
    return c;
}

// positions[i] is the destination row of source row i.
inline Dense permute_rows(const Dense& a, const std::vector<std::int64_t>& positions) {
    std::int64_t n = static_cast<std::int64_t>(a.size());
    if (static_cast<std::int64_t>(positions.size()) != n)
        throw InvalidArgumentError("permute_rows: permutation size mismatch");
    std::vector<bool> hit(static_cast<std::size_t>(n), false);
    Dense out(a.size());
    for (std::int64_t i = 0; i < n; ++i) {
        std::int64_t p = positions[static_cast<std::size_t>(i)];
        if (p < 0 || p >= n || hit[static_cast<std::size_t>(p)])
            throw InvalidArgumentError("permute_rows: not a permutation");
        hit[static_cast<std::size_t>(p)] = true;
        out[static_cast<std::size_t>(p)] = a[static_cast<std::size_t>(i)];
    }
    return out;
}

// Vertical stack for row-space checks.
inline Dense vstack(const Dense& a, const Dense& b) {
    if (!a.empty() && !b.empty() && a[0].size() != b[0].size())
        throw InvalidArgumentError("vstack: widths differ");
    Dense out = a;
    out.insert(out.end(), b.begin(), b.end());
    check_dims(static_cast<std::int64_t>(out.size()),
               out.empty() ? 0 : static_cast<std::int64_t>(out[0].size()));
    return out;
}

} // namespace rowfall::reference
