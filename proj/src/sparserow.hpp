#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace rowfall {

// One sparse row: strictly ascending column indices, no stored zeros.
// The start column of an empty row is defined as the row width, which makes
// "row starts at or past column c" checks uniform for live and spent rows.
template <typename T>
class SparseRow {
public:
    struct Entry {
        std::int64_t col;
        T val;

        bool operator==(const Entry& o) const { return col == o.col && val == o.val; }
    };

    SparseRow() : width_(0) {}
    explicit SparseRow(std::int64_t width) : width_(width) {
        if (width < 0)
            throw InvalidArgumentError("row width must be non-negative");
    }

    // Takes entries already sorted by column, unique, zero-free.
    static SparseRow from_sorted(std::int64_t width, std::vector<Entry> entries) {
        SparseRow r(width);
        for (std::size_t k = 0; k < entries.size(); ++k) {
            const auto& e = entries[k];
            if (e.col < 0 || e.col >= width)
                throw InvalidArgumentError("entry column out of range");
            if (k > 0 && entries[k - 1].col >= e.col)
                throw InvalidArgumentError("entry columns must be strictly ascending");
        }
        r.entries_ = std::move(entries);
        return r;
    }

    std::int64_t width() const { return width_; }
    std::size_t nnz() const { return entries_.size(); }
    bool is_null() const { return entries_.empty(); }

    // First column holding a non-zero; width() for a null row.
    std::int64_t start_column() const {
        return entries_.empty() ? width_ : entries_.front().col;
    }

    const T& leading() const {
        if (entries_.empty())
            throw InvalidArgumentError("null row has no leading value");
        return entries_.front().val;
    }

    const std::vector<Entry>& entries() const { return entries_; }

    const T* find(std::int64_t col) const {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), col,
                                   [](const Entry& e, std::int64_t c) { return e.col < c; });
        if (it == entries_.end() || it->col != col)
            return nullptr;
        return &it->val;
    }

    bool operator==(const SparseRow& o) const {
        return width_ == o.width_ && entries_ == o.entries_;
    }

private:
    std::int64_t width_;
    std::vector<Entry> entries_;
};

// Builds a row from unsorted (col, value) pairs, dropping zeros per the domain
// and rejecting duplicate columns. The convenient constructor for tests and I/O.
template <typename D>
SparseRow<typename D::value_type>
make_row(std::int64_t width,
         std::vector<std::pair<std::int64_t, typename D::value_type>> pairs,
         const D& dom) {
    using V = typename D::value_type;
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<typename SparseRow<V>::Entry> entries;
    entries.reserve(pairs.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (k > 0 && pairs[k - 1].first == pairs[k].first)
            throw InvalidArgumentError("duplicate column in row");
        if (dom.is_zero(pairs[k].second))
            continue;
        entries.push_back({pairs[k].first, std::move(pairs[k].second)});
    }
    return SparseRow<V>::from_sorted(width, std::move(entries));
}

} // namespace rowfall
