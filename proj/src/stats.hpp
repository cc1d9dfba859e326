#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace rowfall {

// Message-traffic counters, one set per worker. Seeded rows count as sent and
// received by the owning worker, so rows_sent and rows_received balance
// globally at termination.
struct WorkerStats {
    std::int64_t worker = 0;
    std::uint64_t rows_sent = 0;
    std::uint64_t rows_received = 0;
    std::uint64_t eliminations = 0;
    std::uint64_t wait_polls = 0;
    std::uint64_t end_forwardings = 0; // End hand-offs that crossed workers
    double wall_ms = 0;
};

struct RunStats {
    std::vector<WorkerStats> workers;
    double wall_ms = 0; // whole-run wall time, not a per-worker sum

    WorkerStats totals() const {
        WorkerStats t;
        t.worker = -1;
        for (const auto& w : workers) {
            t.rows_sent += w.rows_sent;
            t.rows_received += w.rows_received;
            t.eliminations += w.eliminations;
            t.wait_polls += w.wait_polls;
            t.end_forwardings += w.end_forwardings;
        }
        t.wall_ms = wall_ms;
        return t;
    }

    std::string to_json() const {
        nlohmann::json j;
        j["workers"] = nlohmann::json::array();
        for (const auto& w : workers) {
            j["workers"].push_back({{"worker", w.worker},
                                    {"rows_sent", w.rows_sent},
                                    {"rows_received", w.rows_received},
                                    {"eliminations", w.eliminations},
                                    {"wait_polls", w.wait_polls},
                                    {"end_forwardings", w.end_forwardings},
                                    {"wall_ms", w.wall_ms}});
        }
        WorkerStats t = totals();
        j["totals"] = {{"rows_sent", t.rows_sent},
                       {"rows_received", t.rows_received},
                       {"eliminations", t.eliminations},
                       {"wait_polls", t.wait_polls},
                       {"end_forwardings", t.end_forwardings},
                       {"wall_ms", t.wall_ms}};
        return j.dump(2);
    }
};

} // namespace rowfall
