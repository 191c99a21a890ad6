#include <map>
#include <set>

#include "doctest.h"
#include "owast/mst.hpp"
#include "owast/oracle.hpp"
#include "support.hpp"

using namespace owast;
using namespace owast::testing;

TEST_CASE("scalarize dots lambda with the cost vectors") {
    MultiGraphInstance inst = example_instance();
    auto sw = scalarize(inst, {Rational(1), Rational(0), Rational(0)});
    CHECK(sw[E14] == Rational(1));
    CHECK(sw[E13] == Rational(4));
    auto zero = scalarize(inst, {Rational(0), Rational(0), Rational(0)});
    for (const auto& v : zero) CHECK(v.is_zero());
    auto mix = scalarize(inst, {dec("0.3"), dec("0.5"), dec("0.2")});
    CHECK(mix[E12] == dec("2.5"));
    CHECK_THROWS_AS(scalarize(inst, {Rational(1)}), InputError);
}

TEST_CASE("colored mst on the running example") {
    MultiGraphInstance inst = example_instance();
    auto first = mst(inst, scalarize(inst, {Rational(1), Rational(0), Rational(0)}));
    REQUIRE(first.has_value());
    CHECK(first->total == Rational(4));
    CHECK(first->edge_ids == std::vector<EdgeId>{E14, E23, E34});

    EdgeColoring c = empty_coloring(inst);
    c[E12] = EdgeColor::Red;
    auto shaved = mst(inst, scalarize(inst, {dec("0.3"), dec("0.5"), dec("0.2")}), c);
    REQUIRE(shaved.has_value());
    CHECK(shaved->edge_ids == std::vector<EdgeId>{E13, E14, E23});
    CHECK(tree_image(inst, shaved->edge_ids) == ImageVector{7, 9, 4});
}

TEST_CASE("mst on a two-vertex graph returns the single edge") {
    MultiGraphInstance inst;
    inst.n = 2;
    inst.p = 2;
    inst.edges.push_back({0, 1, {5, 7}});
    auto r = mst(inst, scalarize(inst, {Rational(1), Rational(1)}));
    REQUIRE(r.has_value());
    CHECK(r->edge_ids == std::vector<EdgeId>{0});
    CHECK(r->total == Rational(12));
}

TEST_CASE("infeasible colorings are signalled, not thrown") {
    MultiGraphInstance inst = example_instance();
    EdgeColoring all_red(inst.m(), EdgeColor::Red);
    CHECK_FALSE(mst(inst, scalarize(inst, {Rational(1), Rational(1), Rational(1)}),
                    all_red)
                    .has_value());

    EdgeColoring blue_cycle = empty_coloring(inst);
    blue_cycle[E12] = blue_cycle[E13] = blue_cycle[E23] = EdgeColor::Blue;
    CHECK_FALSE(mst(inst, scalarize(inst, {Rational(1), Rational(1), Rational(1)}),
                    blue_cycle)
                    .has_value());
}

TEST_CASE("validate_coloring reports both failure modes") {
    MultiGraphInstance inst = example_instance();
    CHECK(validate_coloring(inst, empty_coloring(inst)).ok);

    EdgeColoring all_red(inst.m(), EdgeColor::Red);
    auto s1 = validate_coloring(inst, all_red);
    CHECK_FALSE(s1.ok);
    CHECK(s1.reason.find("disconnect") != std::string::npos);

    EdgeColoring blue_cycle = empty_coloring(inst);
    blue_cycle[E12] = blue_cycle[E13] = blue_cycle[E23] = EdgeColor::Blue;
    auto s2 = validate_coloring(inst, blue_cycle);
    CHECK_FALSE(s2.ok);
    CHECK(s2.reason.find("cycle") != std::string::npos);
}

TEST_CASE("mst is deterministic and respects constraints monotonically") {
    SplitMix64 rng(21);
    for (int it = 0; it < 30; ++it) {
        MultiGraphInstance inst = generate_instance(6, 3, rng.next());
        auto sw = scalarize(inst, {Rational(1), Rational(1), Rational(1)});
        auto base = mst(inst, sw);
        REQUIRE(base.has_value());
        CHECK(mst(inst, sw)->edge_ids == base->edge_ids);

        EdgeColoring c = empty_coloring(inst);
        for (int step = 0; step < 4; ++step) {
            EdgeId e = (EdgeId)(rng.next() % inst.m());
            EdgeColoring trial = c;
            trial[e] = rng.next() % 2 ? EdgeColor::Blue : EdgeColor::Red;
            auto constrained = mst(inst, sw, trial);
            if (!constrained) continue;
            CHECK(constrained->total >= base->total);
            c = trial;
            auto again = mst(inst, sw, c);
            REQUIRE(again.has_value());
            CHECK(again->total >= base->total);
        }
    }
}

TEST_CASE("incremental reorder equals a fresh sort for drifting weights") {
    SplitMix64 rng(23);
    MultiGraphInstance inst = generate_instance(9, 3, rng.next());
    std::vector<Rational> lambda{Rational(1, 3), Rational(1, 3), Rational(1, 3)};
    ScalarWeights sw = scalarize(inst, lambda);
    std::vector<EdgeId> carried = detail::weight_order(inst, sw);
    for (int step = 0; step < 25; ++step) {
        int i = (int)(rng.next() % 3);
        lambda[i] = lambda[i] + Rational(rng.range(-2, 3), 100);
        if (lambda[i].sign() < 0) lambda[i] = Rational(0);
        sw = scalarize(inst, lambda);
        detail::resort_weight_order(sw, carried);
        CHECK(carried == detail::weight_order(inst, sw));
    }
}

TEST_CASE("k_best ranks the K4 trees like the enumeration oracle") {
    MultiGraphInstance inst = example_instance();
    auto sw = scalarize(inst, {Rational(1), Rational(1), Rational(1)});

    auto top1 = k_best(inst, sw, 1);
    REQUIRE(top1.size() == 1);
    CHECK(top1[0].total == Rational(19));
    CHECK(top1[0].edge_ids == std::vector<EdgeId>{E14, E23, E34});

    auto all16 = k_best(inst, sw, 16);
    REQUIRE(all16.size() == 16);
    for (std::size_t i = 1; i < all16.size(); ++i)
        CHECK(all16[i - 1].total <= all16[i].total);

    std::multiset<std::vector<EdgeId>> from_kbest, from_oracle;
    for (const auto& r : all16) from_kbest.insert(r.edge_ids);
    enumerate_trees(inst, [&](const std::vector<EdgeId>& t) { from_oracle.insert(t); });
    CHECK(from_kbest == from_oracle);

    CHECK(k_best(inst, sw, 100).size() == 16);  // only 16 trees exist
}

TEST_CASE("k_best equals the oracle's k smallest on random instances") {
    SplitMix64 rng(22);
    for (int it = 0; it < 10; ++it) {
        MultiGraphInstance inst = generate_instance(6, 3, rng.next());
        auto sw = scalarize(inst, {Rational(1), Rational(1), Rational(1)});
        std::vector<Rational> oracle_totals;
        enumerate_trees(inst, [&](const std::vector<EdgeId>& t) {
            Rational total;
            for (EdgeId e : t) total += sw[e];
            oracle_totals.push_back(total);
        });
        std::sort(oracle_totals.begin(), oracle_totals.end());
        int k = 1 + (int)(rng.next() % 40);
        auto ranked = k_best(inst, sw, k);
        REQUIRE(ranked.size() == std::min<std::size_t>(k, oracle_totals.size()));
        for (std::size_t i = 0; i < ranked.size(); ++i)
            CHECK(ranked[i].total == oracle_totals[i]);
        CHECK(ranked[0].edge_ids == mst(inst, sw)->edge_ids);
    }
}
