#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"

#include "errors.hpp"
#include "helpers.hpp"
#include "lup.hpp"
#include "reference.hpp"
#include "ring.hpp"
#include "sched.hpp"

using namespace rowfall;
using namespace rowfall::testing;

namespace {

RunConfig lup_cfg(PivotKind kind = PivotKind::Sparsest, double gamma = 0.5,
                  std::int64_t workers = 1, std::int64_t width = 1) {
    RunConfig cfg;
    cfg.workers = workers;
    cfg.stripe_width = width;
    cfg.strategy = PivotStrategy{kind, gamma};
    return cfg;
}

// P*A == L*U over exact rationals.
bool reconstructs(const SparseMatrix<Rational>& a, const LupResult<RatDomain>& f) {
    auto lhs = reference::permute_rows(reference::to_dense(a), f.positions);
    auto rhs = reference::matmul(reference::to_dense(f.l), reference::to_dense(f.u));
    return lhs == rhs;
}

LupResult<RatDomain> factor_seq(const SparseMatrix<Rational>& a,
                                PivotKind kind = PivotKind::Sparsest) {
    auto run = run_sequential(a, Variant::Lup, lup_cfg(kind), RatDomain{});
    return assemble_lup(run, a.cols());
}

} // namespace

TEST_SUITE("lu-factorization") {

TEST_CASE("a swap-only matrix factors with identity L") {
    SparseMatrix<Rational> a(2, 2);
    a.set_row(0, qrow(2, {{1, Rational(1)}}));
    a.set_row(1, qrow(2, {{0, Rational(2)}, {1, Rational(3)}}));

    auto f = factor_seq(a);
    CHECK(f.positions == std::vector<std::int64_t>{1, 0}); // row 0 sinks below row 1
    CHECK(f.u.row(0) == qrow(2, {{0, Rational(2)}, {1, Rational(3)}}));
    CHECK(f.u.row(1) == qrow(2, {{1, Rational(1)}}));
    CHECK(f.l.row(0) == qrow(2, {{0, Rational(1)}}));
    CHECK(f.l.row(1) == qrow(2, {{1, Rational(1)}}));
    CHECK(reconstructs(a, f));
}

TEST_CASE("a single elimination lands in L as its multiplier") {
    SparseMatrix<Rational> a(2, 2);
    a.set_row(0, qrow(2, {{0, Rational(2)}}));
    a.set_row(1, qrow(2, {{0, Rational(4)}, {1, Rational(1)}}));

    auto f = factor_seq(a);
    CHECK(f.positions == std::vector<std::int64_t>{0, 1});
    CHECK(f.u.row(0) == qrow(2, {{0, Rational(2)}}));
    CHECK(f.u.row(1) == qrow(2, {{1, Rational(1)}}));
    CHECK(f.l.row(1) == qrow(2, {{0, Rational(2)}, {1, Rational(1)}}));
    CHECK(reconstructs(a, f));
}

TEST_CASE("multipliers attach to a pivot's original row, not its history") {
    // Row q is reduced at column 0, travels to column 1, and seats there as
    // the pivot. Eliminating z against it must record z's multiplier against
    // q alone; folding in q's own elimination history would corrupt L.
    SparseMatrix<Rational> a(4, 4);
    a.set_row(0, qrow(4, {{0, Rational(1)}, {1, Rational(1)}}));
    a.set_row(1, qrow(4, {{0, Rational(1)}, {2, Rational(1)}}));
    a.set_row(2, qrow(4, {{2, Rational(1)}, {3, Rational(1)}}));
    a.set_row(3, qrow(4, {{1, Rational(2)}, {3, Rational(1)}}));

    auto f = factor_seq(a);
    CHECK(f.positions == std::vector<std::int64_t>{0, 1, 2, 3});
    CHECK(f.u.row(1) == qrow(4, {{1, Rational(-1)}, {2, Rational(1)}}));
    CHECK(f.l.row(3) ==
          qrow(4, {{1, Rational(-2)}, {2, Rational(2)}, {3, Rational(1)}}));
    CHECK(reconstructs(a, f));
}

TEST_CASE("random factorizations reconstruct the permuted input") {
    Rng rng(9001);
    for (int trial = 0; trial < 25; ++trial) {
        std::int64_t n = 2 + static_cast<std::int64_t>(rng() % 7);
        auto a = to_rational_matrix(random_full_rank_matrix(rng, n));
        for (auto kind : {PivotKind::Sparsest, PivotKind::Partial}) {
            auto f = factor_seq(a, kind);
            CHECK(reconstructs(a, f));
        }
    }
}

TEST_CASE("threaded factorizations reconstruct as well") {
    Rng rng(9002);
    for (int trial = 0; trial < 10; ++trial) {
        std::int64_t n = 4 + static_cast<std::int64_t>(rng() % 5);
        auto a = to_rational_matrix(random_full_rank_matrix(rng, n));
        for (std::int64_t workers : {2, 4}) {
            auto run = run_parallel(a, Variant::Lup, lup_cfg(PivotKind::Sparsest, 0.5,
                                                             workers, 2),
                                    RatDomain{});
            auto f = assemble_lup(run, n);
            CHECK(reconstructs(a, f));
        }
    }
}

TEST_CASE("threshold pivoting bounds the multipliers by one over gamma") {
    Rng rng(9003);
    for (double gamma : {0.1, 0.5, 1.0}) {
        int done = 0;
        for (int trial = 0; trial < 20 && done < 8; ++trial) {
            auto a = to_double_matrix(random_full_rank_matrix(rng, 8, 0.7));
            RunOutput<F64Domain> run;
            try {
                run = run_sequential(a, Variant::Lup,
                                     lup_cfg(PivotKind::Threshold, gamma), F64Domain{});
            } catch (const SingularError&) {
                continue; // rounding can demote a borderline pivot; try another
            }
            LupResult<F64Domain> f;
            try {
                f = assemble_lup(run, 8);
            } catch (const SingularError&) {
                continue;
            }
            ++done;
            for (std::int64_t i = 0; i < f.l.rows(); ++i)
                for (const auto& e : f.l.row(i).entries())
                    CHECK(std::fabs(e.val) <= 1.0 / gamma + 1e-12);
        }
        CHECK(done >= 8);
    }
}

TEST_CASE("verification recomputes both sides of the permutation identity") {
    SparseMatrix<Rational> ident(2, 2);
    ident.set_row(0, qrow(2, {{0, Rational(1)}}));
    ident.set_row(1, qrow(2, {{1, Rational(1)}}));
    auto fi = factor_seq(ident);
    CHECK(fi.positions == std::vector<std::int64_t>{0, 1});
    CHECK(verify_lup(ident, fi));

    SparseMatrix<Rational> a(2, 2);
    a.set_row(0, qrow(2, {{0, Rational(2)}}));
    a.set_row(1, qrow(2, {{0, Rational(4)}, {1, Rational(1)}}));
    auto f = factor_seq(a);
    CHECK(verify_lup(a, f));

    // Perturbing a single multiplier must be caught.
    auto broken = f;
    broken.l.set_row(1, qrow(2, {{0, Rational(3)}, {1, Rational(1)}}));
    CHECK_FALSE(verify_lup(a, broken));

    Rng rng(9004);
    for (int trial = 0; trial < 10; ++trial) {
        auto b = to_rational_matrix(random_full_rank_matrix(rng, 6));
        CHECK(verify_lup(b, factor_seq(b)));
    }

    SparseMatrix<Rational> wide(2, 3);
    CHECK_THROWS_AS(verify_lup(wide, f), InvalidArgumentError);
}

TEST_CASE("floating point verification reports the worst deviation") {
    Rng rng(9005);
    int done = 0;
    for (int trial = 0; trial < 20 && done < 6; ++trial) {
        auto a = to_double_matrix(random_full_rank_matrix(rng, 5, 0.7));
        LupResult<F64Domain> f;
        try {
            auto run = run_sequential(a, Variant::Lup,
                                      lup_cfg(PivotKind::Partial), F64Domain{});
            f = assemble_lup(run, 5);
        } catch (const SingularError&) {
            continue;
        }
        ++done;
        CHECK(verify_lup(a, f) <= 1e-9);
    }
    CHECK(done >= 6);
}

TEST_CASE("singular and ill-shaped inputs are refused") {
    SparseMatrix<Rational> sing(2, 2);
    sing.set_row(0, qrow(2, {{0, Rational(1)}, {1, Rational(2)}}));
    sing.set_row(1, qrow(2, {{0, Rational(2)}, {1, Rational(4)}}));
    auto run = run_sequential(sing, Variant::Lup, lup_cfg(), RatDomain{});
    CHECK(run.rank == 1);
    CHECK_THROWS_AS(assemble_lup(run, 2), SingularError);

    SparseMatrix<Rational> rect(3, 2);
    CHECK_THROWS_AS(run_sequential(rect, Variant::Lup, lup_cfg(), RatDomain{}),
                    InvalidArgumentError);

    // An echelon run carries no provenance, so it cannot be assembled.
    SparseMatrix<Rational> ok(2, 2);
    ok.set_row(0, qrow(2, {{0, Rational(1)}}));
    ok.set_row(1, qrow(2, {{1, Rational(1)}}));
    auto plain = run_sequential(ok, Variant::Echelon, lup_cfg(), RatDomain{});
    CHECK_THROWS_AS(assemble_lup(plain, 2), IntegrityError);
}

} // TEST_SUITE
