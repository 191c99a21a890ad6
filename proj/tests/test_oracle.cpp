#include <set>

#include "doctest.h"
#include "owast/oracle.hpp"
#include "support.hpp"

using namespace owast;
using namespace owast::testing;

TEST_CASE("enumeration matches Cayley counts on cliques") {
    SplitMix64 rng(31);
    for (int n : {4, 5, 6}) {
        MultiGraphInstance inst = generate_instance(n, 2, rng.next());
        std::int64_t count = 0;
        std::set<std::vector<EdgeId>> distinct;
        enumerate_trees(inst, [&](const std::vector<EdgeId>& t) {
            ++count;
            CHECK((int)t.size() == n - 1);
            distinct.insert(t);
        });
        std::int64_t cayley = 1;
        for (int i = 0; i < n - 2; ++i) cayley *= n;
        CHECK(count == cayley);
        CHECK((std::int64_t)distinct.size() == count);  // duplicate-free
        CHECK(spanning_tree_count(inst) == count);
    }
}

TEST_CASE("a tree input has exactly one spanning tree") {
    MultiGraphInstance inst;
    inst.n = 5;
    inst.p = 2;
    inst.edges.push_back({0, 1, {1, 1}});
    inst.edges.push_back({1, 2, {1, 1}});
    inst.edges.push_back({1, 3, {1, 1}});
    inst.edges.push_back({3, 4, {1, 1}});
    int count = 0;
    enumerate_trees(inst, [&](const std::vector<EdgeId>& t) {
        ++count;
        CHECK(t == std::vector<EdgeId>{0, 1, 2, 3});
    });
    CHECK(count == 1);
    CHECK(spanning_tree_count(inst) == 1);
}

TEST_CASE("enumeration count equals the matrix-tree determinant on random graphs") {
    SplitMix64 rng(32);
    for (int it = 0; it < 10; ++it) {
        // random connected subgraph of a clique
        MultiGraphInstance clique = generate_instance(6, 2, rng.next());
        MultiGraphInstance inst;
        inst.n = clique.n;
        inst.p = clique.p;
        for (const Edge& e : clique.edges)
            if (rng.next() % 100 < 70) inst.edges.push_back(e);
        if (!validate_coloring(inst, EdgeColoring(inst.m(), EdgeColor::Uncolored)).ok)
            continue;  // disconnected draw; not a valid instance
        std::int64_t count = 0;
        enumerate_trees(inst, [&](const std::vector<EdgeId>&) { ++count; });
        CHECK(count == spanning_tree_count(inst));
    }
}

TEST_CASE("colored enumeration respects blue and red constraints") {
    MultiGraphInstance inst = example_instance();
    EdgeColoring c = empty_coloring(inst);
    c[E14] = EdgeColor::Blue;
    c[E24] = EdgeColor::Red;
    int count = 0;
    enumerate_trees(inst, c, [&](const std::vector<EdgeId>& t) {
        ++count;
        CHECK(std::find(t.begin(), t.end(), E14) != t.end());
        CHECK(std::find(t.begin(), t.end(), E24) == t.end());
    });
    CHECK(count == 5);  // by hand: K4 trees containing [1,4] avoiding [2,4]
}

TEST_CASE("brute force optimum on the running example") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    auto best = brute_force_optimum(inst, w);
    REQUIRE(best.has_value());
    CHECK(best->owa_value == Rational(7));
    CHECK(best->edge_ids == std::vector<EdgeId>{E12, E14, E23});

    EdgeColoring c = empty_coloring(inst);
    c[E12] = EdgeColor::Red;
    auto constrained = brute_force_optimum(inst, w, c);
    REQUIRE(constrained.has_value());
    CHECK(constrained->owa_value == dec("7.4"));

    EdgeColoring all_red(inst.m(), EdgeColor::Red);
    CHECK_FALSE(brute_force_optimum(inst, w, all_red).has_value());
}

TEST_CASE("verify_run flags inflated bounds and wrong values") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    Solution opt = *brute_force_optimum(inst, w);

    std::vector<BoundTrace> traces;
    traces.push_back({empty_coloring(inst), Rational(5)});
    CHECK(verify_run(inst, w, opt, traces).ok());

    traces.push_back({empty_coloring(inst), dec("7.01")});  // above the optimum
    auto rep = verify_run(inst, w, opt, traces);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].find("exceeds") != std::string::npos);

    std::vector<BoundTrace> lying;
    lying.push_back({empty_coloring(inst), std::nullopt});  // claims infeasible
    CHECK_FALSE(verify_run(inst, w, opt, lying).ok());

    Solution wrong = opt;
    wrong.owa_value = dec("6.9");
    CHECK_FALSE(verify_run(inst, w, wrong, {}).ok());
}

TEST_CASE("coloring_preserves_optimum distinguishes sound and unsound colorings") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    EdgeColoring fine = empty_coloring(inst);
    fine[E24] = EdgeColor::Red;
    CHECK(coloring_preserves_optimum(inst, w, fine));
    EdgeColoring bad = empty_coloring(inst);
    bad[E12] = EdgeColor::Red;  // removes every optimal tree
    CHECK_FALSE(coloring_preserves_optimum(inst, w, bad));
}
