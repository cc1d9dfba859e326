#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "sched.hpp"
#include "sparsemat.hpp"

namespace rowfall {

// Unit-lower-triangular L, upper-triangular U, and the row placement map:
// positions[i] is the final position of original row i, i.e. row positions[i]
// of the permuted input equals original row i, and P*A == L*U.
template <typename D>
struct LupResult {
    SparseMatrix<typename D::value_type> l;
    SparseMatrix<typename D::value_type> u;
    std::vector<std::int64_t> positions;
};

// Builds the factorization out of a finished LU-variant run. Every column of
// a nonsingular square matrix holds exactly one pivot; the pivot's original
// row index fixes the permutation, its coefficient row becomes a row of L
// after remapping coefficient indices through that permutation.
template <typename D>
LupResult<D> assemble_lup(const RunOutput<D>& run, std::int64_t n) {
    using V = typename D::value_type;
    if (static_cast<std::int64_t>(run.pivots.size()) != n)
        throw InvalidArgumentError("run does not cover the expected number of columns");

    LupResult<D> res;
    res.l = SparseMatrix<V>(0, n);
    res.u = SparseMatrix<V>(0, n);
    res.positions.assign(static_cast<std::size_t>(n), -1);

    for (std::int64_t c = 0; c < n; ++c) {
        const auto& slot = run.pivots[static_cast<std::size_t>(c)];
        if (!slot.has_value())
            throw SingularError("matrix is singular: no pivot in column " +
                                std::to_string(c));
        const auto& piv = *slot;
        if (piv.h < 0 || !piv.s.has_value())
            throw IntegrityError("pivot lacks provenance; run was not an LU run");
        if (piv.h >= n)
            throw IntegrityError("pivot row index out of range");
        if (piv.row.start_column() != c)
            throw IntegrityError("pivot row does not start at its own column");
        auto& pos = res.positions[static_cast<std::size_t>(piv.h)];
        if (pos != -1)
            throw IntegrityError("original row seated as pivot twice");
        pos = c;
        res.u.append_row(piv.row);
    }

    for (std::int64_t c = 0; c < n; ++c) {
        const auto& piv = *run.pivots[static_cast<std::size_t>(c)];
        const auto& s = *piv.s;
        std::vector<typename SparseRow<V>::Entry> remapped;
        remapped.reserve(s.entries().size());
        bool unit_diag = false;
        for (const auto& e : s.entries()) {
            std::int64_t col = res.positions[static_cast<std::size_t>(e.col)];
            if (col > c)
                throw IntegrityError("coefficient above the diagonal in row " +
                                     std::to_string(c));
            if (col == c) {
                if (!(e.val == V(1)))
                    throw IntegrityError("diagonal coefficient is not one");
                unit_diag = true;
            }
            remapped.push_back({col, e.val});
        }
        if (!unit_diag)
            throw IntegrityError("missing unit diagonal in row " + std::to_string(c));
        std::sort(remapped.begin(), remapped.end(),
                  [](const auto& x, const auto& y) { return x.col < y.col; });
        res.l.append_row(SparseRow<V>::from_sorted(n, std::move(remapped)));
    }
    return res;
}

// Checks the factorization against the input by recomputing both sides of
// P*A == L*U row by row. Exact domains get a yes/no answer; floating point
// gets the largest entrywise deviation so callers can judge it against
// whatever tolerance suits the matrix.
template <typename D>
std::conditional_t<D::exact, bool, double>
verify_lup(const SparseMatrix<typename D::value_type>& a, const LupResult<D>& f) {
    using V = typename D::value_type;
    const std::int64_t n = a.rows();
    if (a.cols() != n || f.l.rows() != n || f.l.cols() != n ||
        f.u.rows() != n || f.u.cols() != n ||
        static_cast<std::int64_t>(f.positions.size()) != n)
        throw InvalidArgumentError("factor dimensions do not match the input");
    for (std::int64_t p : f.positions)
        if (p < 0 || p >= n)
            throw InvalidArgumentError("row placement index out of range");

    double residual = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        // Row positions[i] of the permuted input is original row i, so the
        // matching L*U row is rebuilt from the same position.
        const std::int64_t p = f.positions[static_cast<std::size_t>(i)];
        std::vector<V> acc(static_cast<std::size_t>(n), V(0));
        for (const auto& le : f.l.row(p).entries())
            for (const auto& ue : f.u.row(le.col).entries())
                acc[static_cast<std::size_t>(ue.col)] += le.val * ue.val;
        std::vector<V> want(static_cast<std::size_t>(n), V(0));
        for (const auto& e : a.row(i).entries())
            want[static_cast<std::size_t>(e.col)] = e.val;
        for (std::int64_t j = 0; j < n; ++j) {
            if constexpr (D::exact) {
                if (!(acc[static_cast<std::size_t>(j)] ==
                      want[static_cast<std::size_t>(j)]))
                    return false;
            } else {
                residual = std::max(residual,
                                    std::abs(acc[static_cast<std::size_t>(j)] -
                                             want[static_cast<std::size_t>(j)]));
            }
        }
    }
    if constexpr (D::exact)
        return true;
    else
        return residual;
}

} // namespace rowfall
