#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dtlab;

TEST_CASE("count_realizable") {
    CHECK(count_realizable(dtest::t1(3)) == 4);
    CHECK(count_realizable(dtest::t3(2)) == 4);
    CHECK(count_realizable(dtest::t2(4)) == 5);
}

TEST_CASE("independence_dimension") {
    CHECK(independence_dimension(dtest::t1(3)) == 1);
    CHECK(independence_dimension(dtest::t3(3)) == 3);
    CHECK(independence_dimension(make_table(2, {{tuple_from_string("00"), 1}})) == 0);
    CHECK(independence_dimension(dtest::t2(5)) == 1);
}

TEST_CASE("independence dimension is monotone under adding rows") {
    std::mt19937 rng(43);
    for (int round = 0; round < 60; ++round) {
        auto big = dtest::random_table(rng, 4, 3);
        if (row_count(big) < 2) continue;
        // nested table: drop the last row
        auto rows = big.rows;
        rows.pop_back();
        auto small = make_table(big.n, rows);
        CHECK(independence_dimension(small) <= independence_dimension(big));
    }
}

TEST_CASE("reduction parameters of the three families") {
    for (int n = 2; n <= 6; ++n)
        CHECK(reduction_parameter(dtest::t1(n), reduction_scope::full_rows) == 2);
    for (int n = 2; n <= 5; ++n)
        CHECK(reduction_parameter(dtest::t2(n), reduction_scope::full_rows) == n);
    for (int n = 2; n <= 4; ++n)
        CHECK(reduction_parameter(dtest::t3(n), reduction_scope::full_rows) == n);
}

TEST_CASE("all-partial reduction scope") {
    auto t = dtest::t1(3);
    int rows_scope = reduction_parameter(t, reduction_scope::full_rows);
    int all_scope = reduction_parameter(t, reduction_scope::all_partial);
    CHECK(rows_scope <= all_scope);
    CHECK(all_scope == 2);  // every compatible threshold system reduces to two equations
}

TEST_CASE("check_prop6") {
    CHECK(check_prop6(dtest::t1(5)));  // N=6, idim=1, (4*5)^1 = 20 >= 6
    CHECK(check_prop6(dtest::t3(3)));  // full cube branch
    CHECK(check_prop6(dtest::t2(4)));  // N=5, idim=1, 16 >= 5
}

TEST_CASE("analysis report serialization") {
    auto rep = analyze(dtest::t1(2));
    CHECK(analysis_to_json(rep).dump() ==
          R"({"N":3,"idim":1,"reduction_full_rows":2,"reduction_all":null,"prop6_ok":true})");
    auto full = analyze(dtest::t1(2), true);
    CHECK(analysis_to_json(full).dump() ==
          R"({"N":3,"idim":1,"reduction_full_rows":2,"reduction_all":2,"prop6_ok":true})");
}
