#include "rowfall.h"

#include <cstring>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "lup.hpp"
#include "ring.hpp"
#include "sched.hpp"
#include "sms.hpp"
#include "sparsemat.hpp"

using namespace rowfall;

namespace {

thread_local std::string g_last_error;

using AnyMatrix = std::variant<SparseMatrix<BigInt>, SparseMatrix<Rational>,
                               SparseMatrix<double>>;

template <typename V>
struct domain_of;
template <>
struct domain_of<BigInt> {
    using type = IntDomain;
};
template <>
struct domain_of<Rational> {
    using type = RatDomain;
};
template <>
struct domain_of<double> {
    using type = F64Domain;
};

template <typename V>
typename domain_of<V>::type make_domain(double epsilon) {
    if constexpr (std::is_same_v<V, double>) {
        if (!(epsilon > 0))
            throw InvalidArgumentError("epsilon must be positive");
        return F64Domain{epsilon};
    } else {
        (void)epsilon;
        return typename domain_of<V>::type{};
    }
}

RunConfig config_from(const rf_options& o) {
    RunConfig cfg;
    cfg.workers = o.workers;
    cfg.stripe_width = o.stripe_width;
    switch (o.pivot) {
    case RF_PIVOT_FIRST:
        cfg.strategy.kind = PivotKind::FirstArrival;
        break;
    case RF_PIVOT_SPARSEST:
        cfg.strategy.kind = PivotKind::Sparsest;
        break;
    case RF_PIVOT_THRESHOLD:
        cfg.strategy.kind = PivotKind::Threshold;
        break;
    case RF_PIVOT_PARTIAL:
        cfg.strategy.kind = PivotKind::Partial;
        break;
    default:
        throw InvalidArgumentError("unknown pivot strategy");
    }
    cfg.strategy.gamma = o.gamma;
    cfg.ff.use_gcd = o.use_gcd != 0;
    cfg.ff.strip_content = o.strip_content != 0;
    return cfg;
}

template <typename D>
RunOutput<D> run_any(const SparseMatrix<typename D::value_type>& m, Variant variant,
                     const RunConfig& cfg, const D& dom) {
    return cfg.workers == 1 ? run_sequential(m, variant, cfg, dom)
                            : run_parallel(m, variant, cfg, dom);
}

template <typename F>
rf_status guarded(F&& body) {
    try {
        body();
        return RF_OK;
    } catch (const ParseError& e) {
        g_last_error = e.what();
        return RF_ERR_PARSE;
    } catch (const IoError& e) {
        g_last_error = e.what();
        return RF_ERR_IO;
    } catch (const SingularError& e) {
        g_last_error = e.what();
        return RF_ERR_SINGULAR;
    } catch (const DomainError& e) {
        g_last_error = e.what();
        return RF_ERR_DOMAIN;
    } catch (const ProtocolError& e) {
        g_last_error = e.what();
        return RF_ERR_PROTOCOL;
    } catch (const DeadlockError& e) {
        g_last_error = e.what();
        return RF_ERR_DEADLOCK;
    } catch (const InvalidArgumentError& e) {
        g_last_error = e.what();
        return RF_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return RF_ERR_INTERNAL;
    }
}

void require(bool ok, const char* what) {
    if (!ok)
        throw InvalidArgumentError(what);
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct rf_matrix {
    AnyMatrix m;
};

namespace {

rf_status parse_stream(std::istream& in, rf_domain domain, rf_matrix** out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        AnyMatrix m;
        switch (domain) {
        case RF_DOMAIN_INT:
            m = read_sms(in, IntDomain{});
            break;
        case RF_DOMAIN_RATIONAL:
            m = read_sms(in, RatDomain{});
            break;
        case RF_DOMAIN_F64:
            m = read_sms(in, F64Domain{});
            break;
        default:
            throw InvalidArgumentError("unknown domain");
        }
        *out = new rf_matrix{std::move(m)};
    });
}

} // namespace

struct rf_lu {
    rf_matrix l;
    rf_matrix u;
    std::vector<int64_t> positions;
};

struct rf_stats {
    RunStats s;
};

extern "C" {

void rf_options_init(rf_options* opts) {
    if (!opts)
        return;
    opts->workers = 1;
    opts->stripe_width = 1;
    opts->pivot = RF_PIVOT_SPARSEST;
    opts->gamma = 0.5;
    opts->epsilon = 1e-10;
    opts->use_gcd = 1;
    opts->strip_content = 0;
}

const char* rf_last_error(void) { return g_last_error.c_str(); }

rf_status rf_matrix_read(const char* path, rf_domain domain, rf_matrix** out) {
    if (!path) {
        g_last_error = "null path";
        return RF_ERR_INVALID_ARGUMENT;
    }
    std::ifstream in(path);
    if (!in) {
        g_last_error = std::string("cannot open ") + path;
        return RF_ERR_IO;
    }
    return parse_stream(in, domain, out);
}

rf_status rf_matrix_parse(const char* text, rf_domain domain, rf_matrix** out) {
    if (!text) {
        g_last_error = "null text";
        return RF_ERR_INVALID_ARGUMENT;
    }
    std::istringstream in{std::string(text)};
    return parse_stream(in, domain, out);
}

rf_status rf_matrix_write(const rf_matrix* m, const char* path) {
    return guarded([&] {
        require(m && path, "null argument");
        std::ofstream out(path);
        if (!out)
            throw IoError(std::string("cannot open ") + path + " for writing");
        std::visit(
            [&](const auto& mat) {
                using V = typename std::decay_t<decltype(mat)>::value_type;
                write_sms(out, mat, make_domain<V>(1e-10));
            },
            m->m);
        out.flush();
        if (!out)
            throw IoError(std::string("failed writing ") + path);
    });
}

rf_status rf_matrix_format(const rf_matrix* m, char** out) {
    return guarded([&] {
        require(m && out, "null argument");
        std::visit(
            [&](const auto& mat) {
                using V = typename std::decay_t<decltype(mat)>::value_type;
                *out = copy_string(write_sms_text(mat, make_domain<V>(1e-10)));
            },
            m->m);
    });
}

rf_status rf_matrix_transpose(const rf_matrix* m, rf_matrix** out) {
    return guarded([&] {
        require(m && out, "null argument");
        std::visit([&](const auto& mat) { *out = new rf_matrix{transpose(mat)}; },
                   m->m);
    });
}

int64_t rf_matrix_rows(const rf_matrix* m) {
    return m ? std::visit([](const auto& mat) { return mat.rows(); }, m->m) : -1;
}

int64_t rf_matrix_cols(const rf_matrix* m) {
    return m ? std::visit([](const auto& mat) { return mat.cols(); }, m->m) : -1;
}

int64_t rf_matrix_nnz(const rf_matrix* m) {
    return m ? std::visit(
                   [](const auto& mat) { return static_cast<int64_t>(mat.nnz()); },
                   m->m)
             : -1;
}

void rf_matrix_free(rf_matrix* m) { delete m; }

rf_status rf_rank(const rf_matrix* m, const rf_options* opts, int64_t* rank,
                  rf_stats** stats) {
    return guarded([&] {
        require(m && opts && rank, "null argument");
        RunConfig cfg = config_from(*opts);
        std::visit(
            [&](const auto& mat) {
                using V = typename std::decay_t<decltype(mat)>::value_type;
                auto out = run_any(mat, Variant::Rank, cfg, make_domain<V>(opts->epsilon));
                *rank = out.rank;
                if (stats)
                    *stats = new rf_stats{std::move(out.stats)};
            },
            m->m);
    });
}

rf_status rf_echelon(const rf_matrix* m, const rf_options* opts, rf_matrix** echelon,
                     rf_stats** stats) {
    return guarded([&] {
        require(m && opts && echelon, "null argument");
        RunConfig cfg = config_from(*opts);
        std::visit(
            [&](const auto& mat) {
                using V = typename std::decay_t<decltype(mat)>::value_type;
                auto out =
                    run_any(mat, Variant::Echelon, cfg, make_domain<V>(opts->epsilon));
                *echelon = new rf_matrix{std::move(out.echelon)};
                if (stats)
                    *stats = new rf_stats{std::move(out.stats)};
            },
            m->m);
    });
}

rf_status rf_lu_factor(const rf_matrix* m, const rf_options* opts, rf_lu** out,
                       rf_stats** stats) {
    return guarded([&] {
        require(m && opts && out, "null argument");
        RunConfig cfg = config_from(*opts);

        auto factor = [&](const auto& mat, const auto& dom) {
            using D = std::decay_t<decltype(dom)>;
            auto run = run_any(mat, Variant::Lup, cfg, dom);
            auto f = assemble_lup<D>(run, mat.cols());
            auto* lu = new rf_lu{rf_matrix{std::move(f.l)}, rf_matrix{std::move(f.u)},
                                 std::move(f.positions)};
            *out = lu;
            if (stats)
                *stats = new rf_stats{std::move(run.stats)};
        };

        std::visit(
            [&](const auto& mat) {
                using V = typename std::decay_t<decltype(mat)>::value_type;
                if constexpr (std::is_same_v<V, BigInt>) {
                    // Exact division needs a field; lift the entries to rationals.
                    SparseMatrix<Rational> lifted(mat.rows(), mat.cols());
                    for (int64_t i = 0; i < mat.rows(); ++i) {
                        std::vector<SparseRow<Rational>::Entry> es;
                        es.reserve(mat.row(i).entries().size());
                        for (const auto& e : mat.row(i).entries())
                            es.push_back({e.col, Rational(e.val)});
                        lifted.set_row(
                            i, SparseRow<Rational>::from_sorted(mat.cols(), std::move(es)));
                    }
                    factor(lifted, RatDomain{});
                } else {
                    factor(mat, make_domain<V>(opts->epsilon));
                }
            },
            m->m);
    });
}

const rf_matrix* rf_lu_l(const rf_lu* lu) { return lu ? &lu->l : nullptr; }

const rf_matrix* rf_lu_u(const rf_lu* lu) { return lu ? &lu->u : nullptr; }

const int64_t* rf_lu_positions(const rf_lu* lu, int64_t* count) {
    if (!lu)
        return nullptr;
    if (count)
        *count = static_cast<int64_t>(lu->positions.size());
    return lu->positions.data();
}

void rf_lu_free(rf_lu* lu) { delete lu; }

rf_status rf_stats_json(const rf_stats* stats, char** out) {
    return guarded([&] {
        require(stats && out, "null argument");
        *out = copy_string(stats->s.to_json());
    });
}

void rf_stats_free(rf_stats* stats) { delete stats; }

void rf_string_free(char* s) { delete[] s; }

} // extern "C"
