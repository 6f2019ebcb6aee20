#include <catch2/catch_amalgamated.hpp>

#include "test_support.hpp"

using namespace dtlab;

TEST_CASE("worst-case profiles of the three families") {
    SECTION("u1") {
        auto p = profile_family(attribute_family::u1(), 6);
        int expect_h_ld[] = {1, 2, 2, 3, 3, 3};
        int expect_h_la[] = {1, 2, 2, 2, 2, 2};
        for (int i = 0; i < 6; ++i) {
            const auto& e = p.entries[static_cast<std::size_t>(i)];
            CHECK(e.h_ld == expect_h_ld[i]);
            CHECK(e.h_la == expect_h_la[i]);
            CHECK(e.L_ld == 2 * (e.n + 1));
            CHECK(e.L_la == 2 * (e.n + 1));
        }
    }
    SECTION("u2") {
        auto p = profile_family(attribute_family::u2(), 5);
        for (const auto& e : p.entries) {
            CHECK(e.h_ld == e.n);
            CHECK(e.h_la == e.n);
            CHECK(e.L_ld == 2 * (e.n + 1));
            CHECK(e.L_la == 2 * (e.n + 1));
        }
    }
    SECTION("u3") {
        auto p = profile_family(attribute_family::u3(), 4);
        for (const auto& e : p.entries) {
            CHECK(e.h_ld == e.n);
            CHECK(e.h_la == e.n);
            CHECK(e.L_ld == (1 << (e.n + 1)));
            CHECK(e.L_la == (1 << (e.n + 1)));
        }
    }
}

TEST_CASE("profiles satisfy the node-count identity L = 2N") {
    for (auto fam : {attribute_family::u1(), attribute_family::u2()}) {
        auto p = profile_family(fam, 5);
        for (const auto& e : p.entries) {
            CHECK(e.L_ld == 2 * e.realizable);
            CHECK(e.L_la == 2 * e.realizable);
        }
    }
    auto p3 = profile_family(attribute_family::u3(), 3);
    for (const auto& e : p3.entries) CHECK(e.L_ld == 2 * e.realizable);
}

TEST_CASE("local types fit the three rows of the class table") {
    auto t1 = local_type(profile_family(attribute_family::u1(), 6));
    CHECK(t1.h_ld_type == growth_h_ld::LOG);
    CHECK(t1.h_la_type == growth_h_la::CON);
    CHECK(t1.L_type == growth_L::POL);
    CHECK(t1.cls == w_class::W1);

    auto t2 = local_type(profile_family(attribute_family::u2(), 5));
    CHECK(t2.cls == w_class::W2);
    CHECK(t2.h_ld_type == growth_h_ld::LIN);
    CHECK(t2.L_type == growth_L::POL);

    auto t3 = local_type(profile_family(attribute_family::u3(), 4));
    CHECK(t3.cls == w_class::W3);
    CHECK(t3.L_type == growth_L::EXP);

    CHECK(local_type_to_json(t1).dump() ==
          R"({"h_ld_type":"LOG","h_la_type":"CON","L_type":"POL","w_class":"W1","scale":6})");

    SECTION("profiles that are too short are rejected") {
        CHECK_THROWS_AS(local_type(profile_family(attribute_family::u1(), 3)), error);
    }
}

TEST_CASE("profile CSV format") {
    auto p = profile_family(attribute_family::u1(), 2);
    CHECK(profile_to_csv(p) ==
          "n,h_ld,h_la,L_ld,L_la,N,idim,m_hat\n"
          "1,1,1,4,4,2,1,1\n"
          "2,2,2,6,6,3,1,2\n");
}

TEST_CASE("ld-reachability holds for every family at small scales") {
    for (int n = 1; n <= 6; ++n) {
        auto rep = verify_reachability(attribute_family::u1(), n, reach_kind::ld);
        CHECK(rep.reachable == reach_answer::yes);
        REQUIRE(rep.witness.has_value());
        auto table = generate(attribute_family::u1(),
                              canonical_worst_selection(attribute_family::u1(), n));
        CHECK(validate(*rep.witness, table, solve_mode::det).ok);
        CHECK(metrics(*rep.witness).depth <= rep.h_star);
        CHECK(metrics(*rep.witness).total <= rep.L_star);
    }
    for (int n = 1; n <= 4; ++n) {
        CHECK(verify_reachability(attribute_family::u2(), n, reach_kind::ld).reachable ==
              reach_answer::yes);
        CHECK(verify_reachability(attribute_family::u3(), n, reach_kind::ld).reachable ==
              reach_answer::yes);
    }
}

TEST_CASE("la-reachability") {
    SECTION("u1 at n=7: the binary-search pair (3,16)") {
        auto rep = verify_reachability(attribute_family::u1(), 7, reach_kind::ld);
        CHECK(rep.h_star == 3);
        CHECK(rep.L_star == 16);
        CHECK(rep.reachable == reach_answer::yes);
    }
    SECTION("u1 is la-reachable at tiny scales, unreachable from n=4 on") {
        for (int n = 1; n <= 3; ++n)
            CHECK(verify_reachability(attribute_family::u1(), n, reach_kind::la).reachable ==
                  reach_answer::yes);
        for (int n = 4; n <= 5; ++n) {
            auto rep = verify_reachability(attribute_family::u1(), n, reach_kind::la);
            CHECK(rep.reachable == reach_answer::no);
            CHECK(rep.analytic.has_value());
            CHECK(rep.exhaustion.has_value());
        }
    }
    SECTION("u2 attains the la pair via the deterministic chain tree") {
        auto rep = verify_reachability(attribute_family::u2(), 3, reach_kind::la);
        CHECK(rep.reachable == reach_answer::yes);
        CHECK(rep.h_star == 3);
        CHECK(rep.L_star == 8);
        REQUIRE(rep.witness.has_value());
        auto table = generate(attribute_family::u2(),
                              canonical_worst_selection(attribute_family::u2(), 3));
        CHECK(validate(*rep.witness, table, solve_mode::nondet).ok);
    }
    SECTION("u3 is la-reachable") {
        for (int n = 1; n <= 3; ++n)
            CHECK(verify_reachability(attribute_family::u3(), n, reach_kind::la).reachable ==
                  reach_answer::yes);
    }
}

TEST_CASE("boundary la-pair verification") {
    SECTION("u1 at n=5: (2, 19)") {
        auto rep = verify_boundary_la_pair(attribute_family::u1(), 5);
        CHECK(rep.ok);
        CHECK(rep.m_hat == 2);
        CHECK(rep.tree_depth <= 2);
        CHECK(rep.node_bound == 19);
        CHECK(rep.tree_nodes <= 19);
    }
    SECTION("u1 at n=2: the hand-traced (2, 8) within (2, 10)") {
        auto rep = verify_boundary_la_pair(attribute_family::u1(), 2);
        CHECK(rep.ok);
        CHECK(rep.tree_depth == 2);
        CHECK(rep.tree_nodes == 8);
        CHECK(rep.node_bound == 10);
    }
    SECTION("u2 and u3 satisfy the bound with m = n") {
        for (int n = 2; n <= 4; ++n) {
            CHECK(verify_boundary_la_pair(attribute_family::u2(), n).ok);
            CHECK(verify_boundary_la_pair(attribute_family::u3(), n).ok);
        }
    }
}

TEST_CASE("reachability report serialization has fixed keys") {
    auto rep = verify_reachability(attribute_family::u1(), 4, reach_kind::la);
    njson j = reachability_to_json(rep);
    auto it = j.begin();
    CHECK(it.key() == "kind");
    CHECK(j["reachable"] == "no");
    CHECK(j["certificate"]["witness"].is_null());
    CHECK(j["certificate"]["analytic"].is_string());
}
