#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"
#include "sparserow.hpp"

namespace rowfall {

// Row-major sparse matrix: a list of sparse rows sharing one width.
template <typename T>
class SparseMatrix {
public:
    using value_type = T;

    SparseMatrix() : cols_(0) {}
    SparseMatrix(std::int64_t rows, std::int64_t cols) : cols_(cols) {
        if (rows < 0 || cols < 0)
            throw InvalidArgumentError("matrix dimensions must be non-negative");
        rows_.assign(static_cast<std::size_t>(rows), SparseRow<T>(cols));
    }

    std::int64_t rows() const { return static_cast<std::int64_t>(rows_.size()); }
    std::int64_t cols() const { return cols_; }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : rows_)
            n += r.nnz();
        return n;
    }

    const SparseRow<T>& row(std::int64_t i) const { return rows_.at(static_cast<std::size_t>(i)); }

    void set_row(std::int64_t i, SparseRow<T> r) {
        if (r.width() != cols_)
            throw InvalidArgumentError("row width does not match matrix");
        rows_.at(static_cast<std::size_t>(i)) = std::move(r);
    }

    void append_row(SparseRow<T> r) {
        if (r.width() != cols_)
            throw InvalidArgumentError("row width does not match matrix");
        rows_.push_back(std::move(r));
    }

    bool operator==(const SparseMatrix& o) const {
        return cols_ == o.cols_ && rows_ == o.rows_;
    }

private:
    std::int64_t cols_;
    std::vector<SparseRow<T>> rows_;
};

template <typename T>
std::vector<std::int64_t> start_columns(const SparseMatrix<T>& m) {
    std::vector<std::int64_t> z;
    z.reserve(static_cast<std::size_t>(m.rows()));
    for (std::int64_t i = 0; i < m.rows(); ++i)
        z.push_back(m.row(i).start_column());
    return z;
}

// Block echelon: start columns never decrease going down.
template <typename T>
bool is_block_echelon(const SparseMatrix<T>& m) {
    for (std::int64_t i = 1; i < m.rows(); ++i)
        if (m.row(i).start_column() < m.row(i - 1).start_column())
            return false;
    return true;
}

// Row echelon: start columns strictly increase, except that null rows
// (start column == width) may pile up at the bottom.
template <typename T>
bool is_row_echelon(const SparseMatrix<T>& m) {
    for (std::int64_t i = 1; i < m.rows(); ++i) {
        std::int64_t z = m.row(i).start_column();
        if (z > m.row(i - 1).start_column())
            continue;
        if (z == m.cols())
            continue;
        return false;
    }
    return true;
}

template <typename T>
SparseMatrix<T> transpose(const SparseMatrix<T>& m) {
    SparseMatrix<T> t(m.cols(), m.rows());
    // Collect per-column entry lists; row-major walk keeps them sorted.
    std::vector<std::vector<typename SparseRow<T>::Entry>> cols(
        static_cast<std::size_t>(m.cols()));
    for (std::int64_t i = 0; i < m.rows(); ++i)
        for (const auto& e : m.row(i).entries())
            cols[static_cast<std::size_t>(e.col)].push_back({i, e.val});
    for (std::int64_t j = 0; j < m.cols(); ++j)
        t.set_row(j, SparseRow<T>::from_sorted(m.rows(), std::move(cols[static_cast<std::size_t>(j)])));
    return t;
}

} // namespace rowfall
