#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "pu.hpp"
#include "sparsemat.hpp"
#include "stats.hpp"
#include "stripemap.hpp"

namespace rowfall {

struct RunConfig {
    std::int64_t workers = 1;
    std::int64_t stripe_width = 1;
    PivotStrategy strategy{};
    FfOptions ff{};
    // The watchdog trips only when both hold with no global progress:
    // generous on purpose, a loaded single-core box must never false-alarm.
    std::uint64_t watchdog_polls = 10000;
    double watchdog_seconds = 20.0;
};

template <typename D>
struct RunOutput {
    std::int64_t rank = 0;
    SparseMatrix<typename D::value_type> echelon;      // pivot rows by ascending column
    std::vector<std::optional<RowMessage<D>>> pivots;  // per column; LU reads h and s here
    RunStats stats;
};

namespace detail {

template <typename D>
void validate_run(const SparseMatrix<typename D::value_type>& a, Variant variant,
                  const RunConfig& cfg) {
    if (cfg.workers < 1 || cfg.stripe_width < 1)
        throw InvalidArgumentError("need at least one worker and stripe width >= 1");
    if (cfg.strategy.kind == PivotKind::Threshold &&
        (cfg.strategy.gamma < 0.0 || cfg.strategy.gamma > 1.0))
        throw InvalidArgumentError("threshold gamma must lie in [0, 1]");
    if (variant == Variant::Lup) {
        if (!D::has_division)
            throw InvalidArgumentError("LU runs need a division-capable domain");
        if (a.rows() != a.cols())
            throw InvalidArgumentError("LU factorization needs a square matrix");
    }
}

template <typename D>
std::vector<ColumnProcessor<D>> build_processors(const SparseMatrix<typename D::value_type>& a,
                                                 Variant variant, const RunConfig& cfg,
                                                 const D& dom) {
    std::vector<ColumnProcessor<D>> pus;
    pus.reserve(static_cast<std::size_t>(a.cols()));
    for (std::int64_t c = 0; c < a.cols(); ++c)
        pus.emplace_back(c, a.cols(), a.rows(), variant, cfg.strategy, dom, cfg.ff);
    return pus;
}

// Hands every non-null input row to the unit owning its start column. The LU
// variant tags each row with its original index and a unit coefficient row.
template <typename D>
void seed(const SparseMatrix<typename D::value_type>& a, Variant variant,
          std::vector<ColumnProcessor<D>>& pus,
          const StripeMap& map, std::vector<WorkerStats>& stats) {
    using V = typename D::value_type;
    for (std::int64_t i = 0; i < a.rows(); ++i) {
        const auto& row = a.row(i);
        if (row.is_null())
            continue;
        RowMessage<D> msg;
        msg.row = row;
        if (variant == Variant::Lup) {
            msg.h = i;
            msg.s = SparseRow<V>::from_sorted(a.rows(), {{i, V(1)}});
        }
        std::int64_t c = row.start_column();
        auto& ws = stats[static_cast<std::size_t>(map.owner(c))];
        pus[static_cast<std::size_t>(c)].receive_row(std::move(msg));
        ++ws.rows_sent;
        ++ws.rows_received;
    }
}

template <typename D>
void collect(std::vector<ColumnProcessor<D>>& pus, RunOutput<D>& out) {
    out.pivots.resize(pus.size());
    for (std::size_t c = 0; c < pus.size(); ++c) {
        if (!pus[c].has_pivot())
            continue;
        out.pivots[c] = pus[c].pivot_message();
        out.echelon.append_row(out.pivots[c]->row);
        ++out.rank;
    }
}

inline double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

} // namespace detail

// Single-threaded driver: seed everything, then sweep the columns in
// ascending order until all units are done. Every unit sees its complete
// input in one batch, which makes runs bit-deterministic.
template <typename D>
RunOutput<D> run_sequential(const SparseMatrix<typename D::value_type>& a, Variant variant,
                            const RunConfig& cfg, const D& dom) {
    detail::validate_run<D>(a, variant, cfg);
    auto t0 = std::chrono::steady_clock::now();

    const std::int64_t m = a.cols();
    RunOutput<D> out;
    out.echelon = SparseMatrix<typename D::value_type>(0, m);
    out.stats.workers.assign(1, WorkerStats{});
    auto& ws = out.stats.workers[0];
    if (m == 0) {
        out.stats.wall_ms = ws.wall_ms = detail::ms_since(t0);
        return out;
    }

    auto pus = detail::build_processors(a, variant, cfg, dom);
    StripeMap map(m, m, 1); // one worker owning everything
    detail::seed(a, variant, pus, map, out.stats.workers);
    pus[0].receive_end();

    std::int64_t first_active = 0;
    // The End hand-off advances at least one column per sweep; m+3 sweeps is
    // already generous for every variant.
    for (std::int64_t pass = 0; pass < m + 3 && first_active < m; ++pass) {
        bool any = false;
        for (std::int64_t c = first_active; c < m; ++c) {
            auto& pu = pus[static_cast<std::size_t>(c)];
            if (pu.done())
                continue;
            auto res = pu.step(true);
            ws.eliminations += res.eliminations;
            any = any || res.worked;
            for (auto& og : res.out) {
                if (std::holds_alternative<EndMessage>(og.msg)) {
                    pus[static_cast<std::size_t>(og.dest)].receive_end();
                } else {
                    pus[static_cast<std::size_t>(og.dest)].receive_row(
                        std::move(std::get<RowMessage<D>>(og.msg)));
                    ++ws.rows_sent;
                    ++ws.rows_received;
                }
            }
        }
        while (first_active < m && pus[static_cast<std::size_t>(first_active)].done())
            ++first_active;
        if (!any && first_active < m)
            throw DeadlockError("sequential sweep made no progress");
    }
    if (first_active < m)
        throw DeadlockError("columns still live after the sweep budget");

    detail::collect(pus, out);
    out.stats.wall_ms = ws.wall_ms = detail::ms_since(t0);
    return out;
}

namespace detail {

template <typename D>
struct AckMessage {
    std::int64_t col; // the column whose emission is being acknowledged
};

template <typename D>
struct Envelope {
    std::uint64_t seq;
    std::int64_t dest_col;
    std::int64_t src_col;
    std::variant<RowMessage<D>, EndMessage, AckMessage<D>> payload;
};

// One-direction mailbox between an ordered pair of workers. The sequence
// numbers exist to prove delivery order, not to create it: a violation means
// the transport itself is broken.
template <typename D>
struct Channel {
    std::mutex mu;
    std::deque<Envelope<D>> q;
    std::uint64_t send_seq = 0;
    std::uint64_t recv_seq = 0;

    void push(Envelope<D> env) {
        std::lock_guard<std::mutex> lock(mu);
        env.seq = send_seq++;
        q.push_back(std::move(env));
    }

    std::vector<Envelope<D>> drain() {
        std::lock_guard<std::mutex> lock(mu);
        std::vector<Envelope<D>> out(std::make_move_iterator(q.begin()),
                                     std::make_move_iterator(q.end()));
        q.clear();
        for (const auto& env : out) {
            if (env.seq != recv_seq)
                throw ProtocolError("channel delivered out of order: seq " +
                                    std::to_string(env.seq) + ", expected " +
                                    std::to_string(recv_seq));
            ++recv_seq;
        }
        return out;
    }

    bool empty() {
        std::lock_guard<std::mutex> lock(mu);
        return q.empty();
    }
};

} // namespace detail

// Threaded driver. Workers own disjoint column stripes, exchange rows over
// FIFO channels, and acknowledge every delivery; a unit forwards End only
// after all its emissions are acknowledged, so End is the last message any
// unit sees. Termination needs no barrier: each worker exits once its own
// columns are done.
template <typename D>
RunOutput<D> run_parallel(const SparseMatrix<typename D::value_type>& a, Variant variant,
                          const RunConfig& cfg, const D& dom) {
    using detail::Envelope;
    detail::validate_run<D>(a, variant, cfg);
    auto t0 = std::chrono::steady_clock::now();

    const std::int64_t m = a.cols();
    const std::int64_t p = cfg.workers;
    RunOutput<D> out;
    out.echelon = SparseMatrix<typename D::value_type>(0, m);
    out.stats.workers.assign(static_cast<std::size_t>(p), WorkerStats{});
    for (std::int64_t k = 0; k < p; ++k)
        out.stats.workers[static_cast<std::size_t>(k)].worker = k;
    if (m == 0) {
        out.stats.wall_ms = detail::ms_since(t0);
        return out;
    }

    StripeMap map(m, cfg.stripe_width, p);
    auto pus = detail::build_processors(a, variant, cfg, dom);
    detail::seed(a, variant, pus, map, out.stats.workers);
    pus[0].receive_end();

    // channel[src * p + dst] carries envelopes from worker src to worker dst.
    std::vector<std::unique_ptr<detail::Channel<D>>> channels(
        static_cast<std::size_t>(p * p));
    for (auto& ch : channels)
        ch = std::make_unique<detail::Channel<D>>();

    std::atomic<bool> abort{false};
    std::atomic<std::uint64_t> progress_counter{0};
    std::mutex err_mu;
    std::exception_ptr first_err;

    auto fail = [&](std::exception_ptr e) {
        {
            std::lock_guard<std::mutex> lock(err_mu);
            if (!first_err)
                first_err = e;
        }
        abort.store(true);
    };

    auto worker_body = [&](std::int64_t me) {
        auto w0 = std::chrono::steady_clock::now();
        auto& ws = out.stats.workers[static_cast<std::size_t>(me)];
        const auto cols = map.columns_of(me);
        std::vector<std::uint64_t> outstanding(cols.size(), 0);
        std::int64_t remaining = static_cast<std::int64_t>(cols.size());

        std::uint64_t idle_polls = 0;
        std::uint64_t seen_progress = progress_counter.load();
        auto last_change = std::chrono::steady_clock::now();

        try {
            while (remaining > 0 && !abort.load()) {
                bool progress = false;

                for (std::int64_t src = 0; src < p; ++src) {
                    if (src == me)
                        continue;
                    auto batch =
                        channels[static_cast<std::size_t>(src * p + me)]->drain();
                    for (auto& env : batch) {
                        progress = true;
                        if (std::holds_alternative<RowMessage<D>>(env.payload)) {
                            pus[static_cast<std::size_t>(env.dest_col)].receive_row(
                                std::move(std::get<RowMessage<D>>(env.payload)));
                            ++ws.rows_received;
                            Envelope<D> ack;
                            ack.dest_col = env.src_col;
                            ack.src_col = env.dest_col;
                            ack.payload = detail::AckMessage<D>{env.src_col};
                            channels[static_cast<std::size_t>(me * p + src)]->push(
                                std::move(ack));
                        } else if (std::holds_alternative<EndMessage>(env.payload)) {
                            pus[static_cast<std::size_t>(env.dest_col)].receive_end();
                        } else {
                            auto& ack = std::get<detail::AckMessage<D>>(env.payload);
                            auto li = static_cast<std::size_t>(map.local_index(ack.col));
                            if (outstanding[li] == 0)
                                throw ProtocolError("acknowledgement without a matching send");
                            --outstanding[li];
                        }
                    }
                }

                for (std::size_t li = 0; li < cols.size(); ++li) {
                    auto& pu = pus[static_cast<std::size_t>(cols[li])];
                    if (pu.done())
                        continue;
                    auto res = pu.step(outstanding[li] == 0);
                    ws.eliminations += res.eliminations;
                    progress = progress || res.worked;
                    if (res.finalized)
                        --remaining;
                    for (auto& og : res.out) {
                        std::int64_t dst_worker = map.owner(og.dest);
                        if (std::holds_alternative<EndMessage>(og.msg)) {
                            if (dst_worker == me) {
                                pus[static_cast<std::size_t>(og.dest)].receive_end();
                            } else {
                                ++ws.end_forwardings;
                                Envelope<D> env;
                                env.dest_col = og.dest;
                                env.src_col = cols[li];
                                env.payload = EndMessage{};
                                channels[static_cast<std::size_t>(me * p + dst_worker)]
                                    ->push(std::move(env));
                            }
                        } else {
                            ++ws.rows_sent;
                            if (dst_worker == me) {
                                pus[static_cast<std::size_t>(og.dest)].receive_row(
                                    std::move(std::get<RowMessage<D>>(og.msg)));
                                ++ws.rows_received;
                            } else {
                                ++outstanding[li];
                                Envelope<D> env;
                                env.dest_col = og.dest;
                                env.src_col = cols[li];
                                env.payload = std::move(std::get<RowMessage<D>>(og.msg));
                                channels[static_cast<std::size_t>(me * p + dst_worker)]
                                    ->push(std::move(env));
                            }
                        }
                    }
                }

                if (progress) {
                    progress_counter.fetch_add(1);
                    idle_polls = 0;
                } else {
                    ++ws.wait_polls;
                    ++idle_polls;
                    std::uint64_t cur = progress_counter.load();
                    if (cur != seen_progress) {
                        seen_progress = cur;
                        last_change = std::chrono::steady_clock::now();
                        idle_polls = 0;
                    } else if (idle_polls > cfg.watchdog_polls &&
                               std::chrono::duration<double>(
                                   std::chrono::steady_clock::now() - last_change)
                                       .count() > cfg.watchdog_seconds) {
                        throw DeadlockError(
                            "no progress across workers; " + std::to_string(remaining) +
                            " columns of worker " + std::to_string(me) + " still live");
                    }
                    std::this_thread::yield();
                }
            }
        } catch (...) {
            fail(std::current_exception());
        }
        ws.wall_ms = detail::ms_since(w0);
    };

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(p));
    for (std::int64_t k = 0; k < p; ++k)
        threads.emplace_back(worker_body, k);
    for (auto& t : threads)
        t.join();
    if (first_err)
        std::rethrow_exception(first_err);

    for (auto& ch : channels)
        if (!ch->empty())
            throw IntegrityError("undelivered messages after termination");
    std::uint64_t sent = 0, received = 0;
    for (const auto& w : out.stats.workers) {
        sent += w.rows_sent;
        received += w.rows_received;
    }
    if (sent != received)
        throw IntegrityError("row conservation violated: sent " + std::to_string(sent) +
                             ", received " + std::to_string(received));

    detail::collect(pus, out);
    out.stats.wall_ms = detail::ms_since(t0);
    return out;
}

} // namespace rowfall
