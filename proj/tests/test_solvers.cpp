#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dtlab;

TEST_CASE("min_depth_det") {
    CHECK(*min_depth_det(dtest::t1(3)).objective == 2);
    CHECK(*min_depth_det(dtest::t2(3)).objective == 3);
    auto constant = min_depth_det(dtest::constant_table(3, 5));
    CHECK(*constant.objective == 0);
    CHECK(structurally_equal(*constant.tree, constant_tree(1)));
}

TEST_CASE("min_nodes_det") {
    CHECK(*min_nodes_det(dtest::t1(2)).objective == 6);
    CHECK(*min_nodes_det(dtest::t3(2)).objective == 8);

    std::mt19937 rng(47);
    for (int round = 0; round < 40; ++round) {
        auto t = dtest::random_table(rng, 3, 0);  // injective
        CHECK(*min_nodes_det(t).objective == 2 * row_count(t));
    }
}

TEST_CASE("min_nodes_det_budgeted") {
    auto t = dtest::t1(3);
    auto full = min_nodes_det_budgeted(t, 2);
    CHECK(full.grade == optimality::exact);
    CHECK(*full.objective == 8);
    CHECK(metrics(*full.tree).depth <= 2);

    auto tight = min_nodes_det_budgeted(t, 1);
    CHECK(tight.grade == optimality::infeasible);
    CHECK_FALSE(tight.objective.has_value());

    auto loose = min_nodes_det_budgeted(t, 3);
    CHECK(*loose.objective == 8);

    SECTION("budgeted objective is non-increasing in the budget") {
        std::mt19937 rng(53);
        for (int round = 0; round < 30; ++round) {
            auto rt = dtest::random_table(rng, 3, 4);
            std::optional<int> prev;
            for (int budget = 0; budget <= 4; ++budget) {
                auto res = min_nodes_det_budgeted(rt, budget);
                if (res.grade == optimality::infeasible) {
                    CHECK_FALSE(prev.has_value());
                    continue;
                }
                if (prev) CHECK(*res.objective <= *prev);
                prev = res.objective;
            }
            CHECK(*prev == *min_nodes_det(rt).objective);  // large budget meets the unbudgeted DP
        }
    }
}

TEST_CASE("min_depth_nondet") {
    CHECK(*min_depth_nondet(dtest::t1(4)).objective == 2);
    CHECK(*min_depth_nondet(dtest::t1(1)).objective == 1);
    CHECK(*min_depth_nondet(dtest::t2(3)).objective == 3);

    SECTION("the witness validates nondeterministically at its depth") {
        auto res = min_depth_nondet(dtest::t1(5));
        CHECK(validate(*res.tree, dtest::t1(5), solve_mode::nondet).ok);
        CHECK(metrics(*res.tree).depth == *res.objective);
    }
}

TEST_CASE("build_reduction_tree") {
    SECTION("T1(2): the hand-traced three-path tree") {
        auto t = dtest::t1(2);
        auto res = build_reduction_tree(t);
        auto m = metrics(*res.tree);
        CHECK(m.total == 8);
        CHECK(m.depth == 2);
        CHECK(validate(*res.tree, t, solve_mode::nondet).ok);

        tree_builder b;
        node_id p1 = b.work(0);
        b.edge(p1, 0, b.term(1));
        node_id p2a = b.work(0);
        node_id p2b = b.work(1);
        b.edge(p2a, 1, p2b);
        b.edge(p2b, 0, b.term(2));
        node_id p3 = b.work(1);
        b.edge(p3, 1, b.term(3));
        b.root_edge(p1);
        b.root_edge(p2a);
        b.root_edge(p3);
        CHECK(structurally_equal(*res.tree, b.finish()));
    }
    SECTION("a one-row table reduces to the empty rule and a bare path") {
        auto t = make_table(2, {{tuple_from_string("01"), 7}});
        auto res = build_reduction_tree(t);
        CHECK(structurally_equal(*res.tree, constant_tree(7)));
        CHECK(metrics(*res.tree).total == 2);
        CHECK(metrics(*res.tree).depth == 0);
    }
    SECTION("constant decisions do not shrink same-solution subsystems") {
        // each row's subsystem must still pin down its exact matched set,
        // so the paths stay nonempty even though any tree trivially solves
        auto t = dtest::constant_table(2, 4, 7);
        auto res = build_reduction_tree(t);
        auto m = metrics(*res.tree);
        CHECK(validate(*res.tree, t, solve_mode::nondet).ok);
        int m_hat = reduction_parameter(t, reduction_scope::full_rows);
        CHECK(m.depth <= m_hat);
        CHECK(m.total <= (m_hat + 1) * count_realizable(t) + 1);
    }
    SECTION("T3(2): no row reduces") {
        auto t = dtest::t3(2);
        auto res = build_reduction_tree(t);
        auto m = metrics(*res.tree);
        CHECK(m.depth == 2);
        CHECK(m.total == 13);  // root + 4 paths of 2 working + 1 terminal
        CHECK(validate(*res.tree, t, solve_mode::nondet).ok);
    }
    SECTION("bounds h <= m and L <= (m+1)N + 1 hold on random tables") {
        std::mt19937 rng(59);
        for (int round = 0; round < 60; ++round) {
            auto t = dtest::random_table(rng, 3, 4);
            int m_hat = reduction_parameter(t, reduction_scope::full_rows);
            auto res = build_reduction_tree(t);
            auto m = metrics(*res.tree);
            CHECK(validate(*res.tree, t, solve_mode::nondet).ok);
            CHECK(m.depth <= m_hat);
            CHECK(m.total <= (m_hat + 1) * count_realizable(t) + 1);
        }
    }
}

TEST_CASE("min_nodes_nondet") {
    SECTION("injective tables: exactly 2N") {
        auto res = min_nodes_nondet(dtest::t1(3));
        CHECK(*res.objective == 8);
        CHECK(res.grade == optimality::exact);
        CHECK(*min_nodes_nondet(dtest::t3(2)).objective == 8);
    }
    SECTION("constant tables: root plus terminal") {
        CHECK(*min_nodes_nondet(dtest::constant_table(2, 3)).objective == 2);
    }
    SECTION("small general tables are solved exactly") {
        std::mt19937 rng(61);
        for (int round = 0; round < 25; ++round) {
            auto t = dtest::random_table(rng, 3, 3);
            auto res = min_nodes_nondet(t);
            CHECK(res.grade == optimality::exact);
            CHECK(validate(*res.tree, t, solve_mode::nondet).ok);
            CHECK(*res.objective <= *min_nodes_det(t).objective);
        }
    }
    SECTION("beyond the exact regime an upper bound is reported") {
        // n=4, non-injective: falls back to the deterministic witness
        std::vector<table_row> rows;
        for (int i = 0; i < 16; ++i) {
            tuple_t tup(4);
            for (int c = 0; c < 4; ++c) tup[static_cast<std::size_t>(c)] = (i >> c) & 1;
            rows.push_back({tup, 1 + (i % 3)});
        }
        auto t = make_table(4, rows);
        auto res = min_nodes_nondet(t);
        CHECK(res.grade == optimality::upper_bound);
        REQUIRE(res.lower_bound.has_value());
        CHECK(*res.lower_bound == 6);
        CHECK(*res.objective >= *res.lower_bound);
        CHECK(validate(*res.tree, t, solve_mode::nondet).ok);
    }
}

TEST_CASE("nondeterminism never hurts") {
    std::mt19937 rng(67);
    for (int round = 0; round < 80; ++round) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto t = dtest::random_table(rng, n, 1 + static_cast<int>(rng() % 5));
        CHECK(*min_depth_nondet(t).objective <= *min_depth_det(t).objective);
        CHECK(*min_nodes_nondet(t).objective <= *min_nodes_det(t).objective);
    }
}

TEST_CASE("witnesses validate in their mode") {
    std::mt19937 rng(71);
    for (int round = 0; round < 50; ++round) {
        int n = 1 + static_cast<int>(rng() % 3);
        auto t = dtest::random_table(rng, n, 1 + static_cast<int>(rng() % 4));
        CHECK(validate(*min_depth_det(t).tree, t, solve_mode::det).ok);
        CHECK(validate(*min_nodes_det(t).tree, t, solve_mode::det).ok);
        CHECK(validate(*min_depth_nondet(t).tree, t, solve_mode::nondet).ok);
        CHECK(validate(*min_nodes_nondet(t).tree, t, solve_mode::nondet).ok);
        auto m = metrics(*min_depth_det(t).tree);
        CHECK(m.depth == *min_depth_det(t).objective);
        CHECK(metrics(*min_nodes_det(t).tree).total == *min_nodes_det(t).objective);
    }
}

TEST_CASE("solver outputs are byte-stable across runs") {
    auto t = dtest::t1(4);
    auto strip = [](solve_result r) {
        njson j = solve_result_to_json(r);
        j["stats"] = nullptr;
        return j.dump();
    };
    CHECK(strip(min_depth_det(t)) == strip(min_depth_det(t)));
    CHECK(strip(min_nodes_det(t)) == strip(min_nodes_det(t)));
    CHECK(strip(min_depth_nondet(t)) == strip(min_depth_nondet(t)));
    CHECK(strip(build_reduction_tree(t)) == strip(build_reduction_tree(t)));

    // the exhaustive-search route of min_nodes_nondet is deterministic too
    std::mt19937 rng(83);
    auto small = dtest::random_table(rng, 3, 2);
    CHECK(strip(min_nodes_nondet(small)) == strip(min_nodes_nondet(small)));
}

TEST_CASE("memo cap raises ResourceLimit") {
    solver_limits tiny;
    tiny.memo_cap = 2;
    CHECK_THROWS_MATCHES(min_nodes_det(dtest::t3(3), tiny), error,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::StartsWith("ResourceLimit")));
}
