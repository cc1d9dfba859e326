#include "doctest.h"

#include "helpers.hpp"
#include "reference.hpp"

using namespace rowfall;
using namespace rowfall::testing;
namespace ref = rowfall::reference;

namespace {

ref::Dense make(std::vector<std::vector<long>> rows) {
    ref::Dense d;
    for (auto& r : rows) {
        std::vector<Rational> row;
        for (long v : r)
            row.emplace_back(v);
        d.push_back(std::move(row));
    }
    return d;
}

} // namespace

TEST_SUITE("reference") {

TEST_CASE("rank on fixed matrices") {
    CHECK(ref::rank_dense(make({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 3);
    CHECK(ref::rank_dense(make({{1, 2}, {2, 4}})) == 1);
    CHECK(ref::rank_dense(make({{0, 0}, {0, 0}})) == 0);
    CHECK(ref::rank_dense(make({{0, 1}, {2, 3}})) == 2);
    CHECK(ref::rank_dense(make({{1, 2, 3}, {4, 5, 6}})) == 2);
    CHECK(ref::rank_dense({}) == 0);
}

TEST_CASE("rank is invariant under transpose") {
    Rng rng(441);
    for (int t = 0; t < 40; ++t) {
        auto m = random_int_matrix(rng, 6, 9, 0.3);
        CHECK(ref::rank_dense(ref::to_dense(m)) ==
              ref::rank_dense(ref::to_dense(transpose(m))));
    }
}

TEST_CASE("rank of a stack of identical blocks") {
    Rng rng(442);
    auto m = random_int_matrix(rng, 5, 7, 0.5);
    auto d = ref::to_dense(m);
    CHECK(ref::rank_dense(ref::vstack(d, d)) == ref::rank_dense(d));
}

TEST_CASE("matmul") {
    auto c = ref::matmul(make({{1, 2}, {3, 4}}), make({{5}, {6}}));
    REQUIRE(c.size() == 2);
    CHECK(c[0][0] == 17);
    CHECK(c[1][0] == 39);
    CHECK_THROWS_AS(ref::matmul(make({{1, 2}}), make({{1, 2}})), InvalidArgumentError);
}

TEST_CASE("permute_rows sends row i to positions[i]") {
    auto p = ref::permute_rows(make({{1, 1}, {2, 2}}), {1, 0});
    CHECK(p[0][0] == 2);
    CHECK(p[1][0] == 1);
    CHECK_THROWS_AS(ref::permute_rows(make({{1}, {2}}), {0, 0}), InvalidArgumentError);
    CHECK_THROWS_AS(ref::permute_rows(make({{1}, {2}}), {0}), InvalidArgumentError);
}

TEST_CASE("oracle refuses oversized inputs") {
    CHECK_THROWS_AS(ref::dense(65, 3), InvalidArgumentError);
    CHECK_THROWS_AS(ref::dense(3, 65), InvalidArgumentError);
    CHECK_NOTHROW(ref::dense(64, 64));
}

} // TEST_SUITE
