#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "ring.hpp"
#include "sparserow.hpp"

namespace rowfall {

// What a run computes. Echelon and Rank share the eager pipeline; the LU
// variant additionally tracks row provenance and multipliers.
enum class Variant { Echelon, Rank, Lup };

enum class PivotKind { FirstArrival, Sparsest, Threshold, Partial };

struct PivotStrategy {
    PivotKind kind = PivotKind::Sparsest;
    double gamma = 0.5; // Threshold only; Partial behaves as Threshold with gamma = 1
};

// A row in flight. h and s ride along only in the LU variant: h is the row's
// original index (never modified), s accumulates one multiplier per pivot that
// was used on the row, stored at the pivot's original index.
template <typename D>
struct RowMessage {
    SparseRow<typename D::value_type> row;
    std::int64_t h = -1;
    std::optional<SparseRow<typename D::value_type>> s;
};

struct EndMessage {};

template <typename D>
using Message = std::variant<RowMessage<D>, EndMessage>;

template <typename D>
struct Outgoing {
    std::int64_t dest; // destination column
    Message<D> msg;
};

template <typename D>
struct StepResult {
    std::vector<Outgoing<D>> out;
    std::uint64_t eliminations = 0;
    std::uint64_t discarded = 0; // rows that eliminated to null
    bool finalized = false;
    bool worked = false;
};

// Per-column state machine. Holds at most one pivot row; every other row that
// shows up gets eliminated against it and forwarded to the column where it
// now starts. End arrives strictly after all rows (the scheduler's job) and
// flushes the unit into its terminal state.
template <typename D>
class ColumnProcessor {
public:
    using V = typename D::value_type;

    ColumnProcessor(std::int64_t column, std::int64_t ncols, std::int64_t nrows,
                    Variant variant, PivotStrategy strat, const D& dom,
                    FfOptions ff = {})
        : column_(column), ncols_(ncols), nrows_(nrows), variant_(variant),
          strat_(strat), dom_(dom), ff_(ff) {
        if (column < 0 || column >= ncols)
            throw InvalidArgumentError("processor column out of range");
        if (variant == Variant::Lup && !D::has_division)
            throw InvalidArgumentError("LU runs need a division-capable domain");
    }

    std::int64_t column() const { return column_; }
    bool running() const { return phase_ == Phase::Running; }
    bool done() const { return phase_ == Phase::Done; }

    void receive_row(RowMessage<D> msg) {
        if (phase_ != Phase::Running)
            throw ProtocolError("row delivered to column " + std::to_string(column_) +
                                " after End");
        if (msg.row.width() != ncols_)
            throw ProtocolError("row width does not match the matrix");
        if (msg.row.start_column() != column_)
            throw ProtocolError("row starting at column " +
                                std::to_string(msg.row.start_column()) +
                                " delivered to column " + std::to_string(column_));
        if (variant_ == Variant::Lup && (!msg.s || msg.h < 0 || msg.h >= nrows_))
            throw ProtocolError("LU row arrived without provenance");
        inbox_.push_back(Held{std::move(msg), arrivals_++});
    }

    void receive_end() {
        if (phase_ != Phase::Running)
            throw ProtocolError("duplicate End at column " + std::to_string(column_));
        phase_ = Phase::Ending;
    }

    // One scheduling quantum. deliveries_confirmed reports whether every row
    // this unit has emitted so far is known to have reached its destination;
    // End is only forwarded once that holds, which is what makes End the last
    // message on every path.
    StepResult<D> step(bool deliveries_confirmed) {
        StepResult<D> res;
        if (phase_ == Phase::Done)
            return res;

        // The LU variant defers all elimination to the End step so that the
        // pivot it eliminates with is the column's final pivot: multipliers
        // recorded against a pivot that is later dethroned would poison the
        // factor rows. Eager variants pipeline freely.
        const bool may_eliminate = variant_ != Variant::Lup || phase_ == Phase::Ending;

        if (may_eliminate && !inbox_.empty()) {
            std::vector<Held> batch;
            batch.swap(inbox_); // freeze: rows arriving mid-step wait for the next one
            res.worked = true;

            std::size_t best = select_pivot(batch);
            if (best != batch.size()) {
                if (pivot_)
                    batch.push_back(std::move(*pivot_));
                pivot_ = std::move(batch[best]);
                batch.erase(batch.begin() + static_cast<std::ptrdiff_t>(best));
            }
            for (auto& held : batch) {
                auto reduced = eliminate(std::move(held.msg));
                ++res.eliminations;
                if (reduced.row.is_null())
                    ++res.discarded;
                else
                    res.out.push_back({reduced.row.start_column(),
                                       Message<D>(std::move(reduced))});
            }
        }

        if (phase_ == Phase::Ending && inbox_.empty() && res.out.empty() &&
            deliveries_confirmed) {
            phase_ = Phase::Done;
            res.finalized = true;
            res.worked = true;
            if (column_ + 1 < ncols_)
                res.out.push_back({column_ + 1, Message<D>(EndMessage{})});
        }
        return res;
    }

    // Terminal outputs, valid once done().
    std::int64_t rank_contribution() const { return pivot_ ? 1 : 0; }

    bool has_pivot() const { return pivot_.has_value(); }
    const RowMessage<D>& pivot_message() const {
        if (!pivot_)
            throw InvalidArgumentError("column holds no pivot");
        return pivot_->msg;
    }

private:
    enum class Phase { Running, Ending, Done };

    struct Held {
        RowMessage<D> msg;
        std::uint64_t arrival;
    };

    // Strict weak order: does a beat b as a pivot? Fewer entries first, then
    // smaller |leading| for exact domains (gentler growth) or larger |leading|
    // for floats (stability), then earliest arrival.
    bool better(const Held& a, const Held& b) const {
        if (a.msg.row.nnz() != b.msg.row.nnz())
            return a.msg.row.nnz() < b.msg.row.nnz();
        const V& la = a.msg.row.leading();
        const V& lb = b.msg.row.leading();
        if constexpr (D::exact) {
            if (dom_.abs_less(la, lb))
                return true;
            if (dom_.abs_less(lb, la))
                return false;
        } else {
            if (dom_.abs_less(lb, la))
                return true;
            if (dom_.abs_less(la, lb))
                return false;
        }
        return a.arrival < b.arrival;
    }

    // Picks the pivot among the frozen batch plus the current pivot, if any.
    // Returns an index into batch, or batch.size() to keep the current pivot.
    std::size_t select_pivot(const std::vector<Held>& batch) const {
        const std::size_t keep = batch.size();
        if (strat_.kind == PivotKind::FirstArrival) {
            if (pivot_)
                return keep;
            std::size_t best = 0;
            for (std::size_t k = 1; k < batch.size(); ++k)
                if (batch[k].arrival < batch[best].arrival)
                    best = k;
            return best;
        }

        double gamma = strat_.kind == PivotKind::Sparsest ? 0.0 : strat_.gamma;
        if (strat_.kind == PivotKind::Partial)
            gamma = 1.0;

        // Largest |leading| among all candidates sets the eligibility bar.
        const V* bar = pivot_ ? &pivot_->msg.row.leading() : nullptr;
        for (const auto& h : batch)
            if (!bar || dom_.abs_less(*bar, h.msg.row.leading()))
                bar = &h.msg.row.leading();

        auto eligible = [&](const Held& h) {
            if (strat_.kind == PivotKind::Sparsest)
                return true;
            return dom_.abs_ge_scaled(h.msg.row.leading(), gamma, *bar);
        };

        std::size_t best = keep;
        const Held* best_held = nullptr;
        auto consider = [&](const Held& h, std::size_t idx) {
            if (!eligible(h))
                return;
            if (!best_held || better(h, *best_held)) {
                best_held = &h;
                best = idx;
            }
        };
        if (pivot_)
            consider(*pivot_, keep);
        for (std::size_t k = 0; k < batch.size(); ++k)
            consider(batch[k], k);
        if (!best_held)
            throw IntegrityError("no eligible pivot candidate"); // the bar holder always is
        return best;
    }

    RowMessage<D> eliminate(RowMessage<D> victim) {
        const RowMessage<D>& p = pivot_->msg;
        RowMessage<D> out;
        out.h = victim.h;
        if constexpr (D::has_division) {
            if (variant_ == Variant::Lup) {
                V alpha = victim.row.leading() / p.row.leading();
                out.row = eliminate_field(victim.row, p.row, column_, dom_);
                out.s = add_multiplier(std::move(*victim.s), p.h, alpha);
            } else {
                out.row = eliminate_field(victim.row, p.row, column_, dom_);
            }
        } else {
            out.row = eliminate_fraction_free(victim.row, p.row, column_, ff_);
        }
        return out;
    }

    SparseRow<V> add_multiplier(SparseRow<V> s, std::int64_t at, const V& alpha) const {
        std::vector<typename SparseRow<V>::Entry> es(s.entries().begin(), s.entries().end());
        auto it = std::lower_bound(es.begin(), es.end(), at,
                                   [](const auto& e, std::int64_t c) { return e.col < c; });
        if (it != es.end() && it->col == at) {
            it->val = it->val + alpha;
            if (dom_.is_zero(it->val))
                es.erase(it);
        } else {
            es.insert(it, {at, alpha});
        }
        return SparseRow<V>::from_sorted(s.width(), std::move(es));
    }

    std::int64_t column_, ncols_, nrows_;
    Variant variant_;
    PivotStrategy strat_;
    D dom_;
    FfOptions ff_;
    Phase phase_ = Phase::Running;
    std::optional<Held> pivot_;
    std::vector<Held> inbox_;
    std::uint64_t arrivals_ = 0;
};

} // namespace rowfall
