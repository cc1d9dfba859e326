#pragma once

#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace rowfall {

// Round-robin distribution of column stripes over workers: columns are cut
// into stripes of `width` consecutive columns, and stripe k belongs to worker
// k mod nworkers. Wide stripes keep End hand-offs local; narrow stripes
// spread load.
class StripeMap {
public:
    StripeMap(std::int64_t ncols, std::int64_t width, std::int64_t nworkers)
        : ncols_(ncols), width_(width), nworkers_(nworkers) {
        if (ncols < 0 || width < 1 || nworkers < 1)
            throw InvalidArgumentError("stripe map needs ncols >= 0, width >= 1, workers >= 1");
    }

    std::int64_t ncols() const { return ncols_; }
    std::int64_t width() const { return width_; }
    std::int64_t nworkers() const { return nworkers_; }

    std::int64_t owner(std::int64_t col) const {
        check(col);
        return (col / width_) % nworkers_;
    }

    // Position of col within its owner's ascending column list.
    std::int64_t local_index(std::int64_t col) const {
        check(col);
        return width_ * ((col / width_) / nworkers_) + col % width_;
    }

    std::vector<std::int64_t> columns_of(std::int64_t worker) const {
        if (worker < 0 || worker >= nworkers_)
            throw InvalidArgumentError("worker index out of range");
        std::vector<std::int64_t> cols;
        for (std::int64_t stripe = worker; stripe * width_ < ncols_; stripe += nworkers_) {
            std::int64_t lo = stripe * width_;
            std::int64_t hi = lo + width_ < ncols_ ? lo + width_ : ncols_;
            for (std::int64_t c = lo; c < hi; ++c)
                cols.push_back(c);
        }
        return cols;
    }

private:
    void check(std::int64_t col) const {
        if (col < 0 || col >= ncols_)
            throw InvalidArgumentError("column out of range");
    }

    std::int64_t ncols_, width_, nworkers_;
};

} // namespace rowfall
