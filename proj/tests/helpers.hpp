#pragma once

#include <bit>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "reference.hpp"
#include "ring.hpp"
#include "sparsemat.hpp"
#include "sparserow.hpp"

namespace rowfall::testing {

using Rng = std::mt19937;

// Random sparse integer matrix with entries in [-mag, mag] \ {0}.
inline SparseMatrix<BigInt> random_int_matrix(Rng& rng, std::int64_t rows, std::int64_t cols,
                                              double density, int mag = 9) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> val(-mag, mag);
    SparseMatrix<BigInt> m(rows, cols);
    IntDomain dom;
    for (std::int64_t i = 0; i < rows; ++i) {
        std::vector<std::pair<std::int64_t, BigInt>> pairs;
        for (std::int64_t j = 0; j < cols; ++j) {
            if (coin(rng) >= density)
                continue;
            int v = val(rng);
            if (v == 0)
                v = 1;
            pairs.emplace_back(j, BigInt(v));
        }
        m.set_row(i, make_row(cols, std::move(pairs), dom));
    }
    return m;
}

// Random square integer matrix that the dense oracle confirms is full rank.
inline SparseMatrix<BigInt> random_full_rank_matrix(Rng& rng, std::int64_t n,
                                                    double density = 0.6, int mag = 9) {
    for (;;) {
        auto m = random_int_matrix(rng, n, n, density, mag);
        if (reference::rank_dense(reference::to_dense(m)) == n)
            return m;
    }
}

inline SparseMatrix<Rational> to_rational_matrix(const SparseMatrix<BigInt>& m) {
    SparseMatrix<Rational> out(m.rows(), m.cols());
    for (std::int64_t i = 0; i < m.rows(); ++i) {
        std::vector<typename SparseRow<Rational>::Entry> es;
        for (const auto& e : m.row(i).entries())
            es.push_back({e.col, Rational(e.val)});
        out.set_row(i, SparseRow<Rational>::from_sorted(m.cols(), std::move(es)));
    }
    return out;
}

inline SparseMatrix<double> to_double_matrix(const SparseMatrix<BigInt>& m) {
    SparseMatrix<double> out(m.rows(), m.cols());
    for (std::int64_t i = 0; i < m.rows(); ++i) {
        std::vector<typename SparseRow<double>::Entry> es;
        for (const auto& e : m.row(i).entries())
            es.push_back({e.col, e.val.get_d()});
        out.set_row(i, SparseRow<double>::from_sorted(m.cols(), std::move(es)));
    }
    return out;
}

// Shorthand row builders for frozen examples.
inline SparseRow<BigInt> irow(std::int64_t width,
                              std::vector<std::pair<std::int64_t, long>> pairs) {
    std::vector<std::pair<std::int64_t, BigInt>> conv;
    for (auto& [c, v] : pairs)
        conv.emplace_back(c, BigInt(v));
    return make_row(width, std::move(conv), IntDomain{});
}

inline SparseRow<Rational> qrow(std::int64_t width,
                                std::vector<std::pair<std::int64_t, Rational>> pairs) {
    return make_row(width, std::move(pairs), RatDomain{});
}

inline SparseRow<double> drow(std::int64_t width,
                              std::vector<std::pair<std::int64_t, double>> pairs,
                              double epsilon = 1e-10) {
    return make_row(width, std::move(pairs), F64Domain{epsilon});
}

inline std::uint64_t ulp_distance(double a, double b) {
    if (a == b)
        return 0;
    auto ordered = [](double x) {
        // Map to an unsigned line where adjacent doubles differ by 1.
        std::int64_t i = std::bit_cast<std::int64_t>(x);
        if (i < 0)
            i = std::numeric_limits<std::int64_t>::min() - i;
        return static_cast<std::uint64_t>(i) + 0x8000000000000000ull;
    };
    std::uint64_t x = ordered(a), y = ordered(b);
    return x > y ? x - y : y - x;
}

} // namespace rowfall::testing
