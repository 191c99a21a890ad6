#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "owast/bounds.hpp"
#include "owast/oracle.hpp"
#include "support.hpp"

using namespace owast;
using namespace owast::testing;

TEST_CASE("ideal point of the running example") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    auto ip = ideal_point(inst, empty_coloring(inst), w);
    REQUIRE(ip.has_value());
    CHECK(ip->point.b == std::vector<std::int64_t>{4, 7, 3});
    CHECK(ip->point.b0 == 19);
    CHECK(ip->witnesses.size() == 4);
    for (const Solution& s : ip->witnesses) CHECK((int)s.edge_ids.size() == inst.n - 1);

    // [2,4] sits in none of the per-objective optima
    EdgeColoring c = empty_coloring(inst);
    c[E24] = EdgeColor::Red;
    auto ip2 = ideal_point(inst, c, w);
    REQUIRE(ip2.has_value());
    CHECK(ip2->point.b == std::vector<std::int64_t>{4, 7, 3});
    CHECK(ip2->point.b0 == 19);

    EdgeColoring all_red(inst.m(), EdgeColor::Red);
    CHECK_FALSE(ideal_point(inst, all_red, w).has_value());
}

TEST_CASE("ideal point of a single-edge graph") {
    MultiGraphInstance inst;
    inst.n = 2;
    inst.p = 3;
    inst.edges.push_back({0, 1, {4, 9, 2}});
    OwaWeights w = example_weights();
    auto ip = ideal_point(inst, empty_coloring(inst), w);
    REQUIRE(ip.has_value());
    CHECK(ip->point.b == std::vector<std::int64_t>{4, 9, 2});
    CHECK(ip->point.b0 == 15);
}

TEST_CASE("image relaxation bound is 6.5 on the running example") {
    IdealPoint b{{4, 7, 3}, 19};
    CHECK(bound_image_relaxation(b, example_weights()) == dec("6.5"));
}

TEST_CASE("slack sum constraint makes the bound OWA(b)") {
    SplitMix64 rng(51);
    for (int it = 0; it < 50; ++it) {
        int p = 2 + (int)(rng.next() % 4);
        OwaWeights w = random_weights(p, rng);
        IdealPoint b;
        b.b.resize(p);
        std::int64_t sum = 0;
        for (auto& v : b.b) {
            v = rng.range(0, 40);
            sum += v;
        }
        b.b0 = sum - rng.range(0, 10);  // b0 <= sum(b): constraint is slack
        ImageVector as_image(b.b.begin(), b.b.end());
        CHECK(bound_image_relaxation(b, w) == owa(w, as_image));
    }
}

TEST_CASE("pi* attains the minimum over all permutation LPs") {
    SplitMix64 rng(52);
    for (int p : {3, 4}) {
        for (int it = 0; it < 60; ++it) {
            OwaWeights w = random_weights(p, rng);
            IdealPoint b;
            b.b.resize(p);
            for (auto& v : b.b) v = rng.range(0, 15);  // small range forces ties
            std::int64_t sum = std::accumulate(b.b.begin(), b.b.end(), (std::int64_t)0);
            b.b0 = sum + rng.range(-5, 25);
            std::vector<int> perm(p);
            std::iota(perm.begin(), perm.end(), 0);
            bool first = true;
            Rational best;
            do {
                Rational v = permutation_lp_value(b, w, perm);
                if (first || v < best) best = v;
                first = false;
            } while (std::next_permutation(perm.begin(), perm.end()));
            CHECK(bound_image_relaxation(b, w) == best);
        }
    }
}

TEST_CASE("lambda feasibility examples") {
    OwaWeights w = example_weights();
    CHECK(lambda_feasible({dec("0.28"), dec("0.5"), dec("0.22")}, w));
    CHECK(lambda_feasible({dec("0.3"), dec("0.5"), dec("0.2")}, w));
    CHECK(lambda_feasible({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, w));
    CHECK_FALSE(lambda_feasible({dec("0.51"), dec("0.3"), dec("0.19")}, w));
    CHECK_FALSE(lambda_feasible({dec("0.3"), dec("-0.1"), dec("0.8")}, w));

    OwaWeights hw = hurwicz_weights(dec("0.4"), 3);
    CHECK_FALSE(lambda_feasible({Rational(1, 3), Rational(1, 3), Rational(1, 3)}, hw));
    CHECK(lambda_feasible({dec("0.2"), dec("0.2"), dec("0.2")}, hw));
}

TEST_CASE("sorted prefix test agrees with exhaustive subset checking") {
    SplitMix64 rng(53);
    for (int it = 0; it < 200; ++it) {
        int p = 2 + (int)(rng.next() % 7);  // up to 8
        OwaWeights w = random_weights(p, rng);
        std::vector<Rational> lambda(p);
        for (auto& l : lambda) l = Rational(rng.range(0, 12), 20);
        std::vector<Rational> caps(p);
        Rational acc;
        for (int k = 0; k < p; ++k) {
            acc += w.w[k];
            caps[k] = acc;
        }
        bool exhaustive = true;
        for (unsigned mask = 1; mask < (1u << p) && exhaustive; ++mask) {
            Rational s;
            int size = 0;
            for (int i = 0; i < p; ++i)
                if (mask & (1u << i)) {
                    s += lambda[i];
                    ++size;
                }
            if (s > caps[size - 1]) exhaustive = false;
        }
        CHECK(lambda_feasible(lambda, w) == exhaustive);
    }
}

TEST_CASE("weak duality: lambda . f(T) never exceeds OWA(f(T))") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    SplitMix64 rng(54);
    for (int it = 0; it < 30; ++it) {
        std::vector<Rational> lambda(3);
        for (auto& l : lambda) l = Rational(rng.range(0, 10), 20);
        if (!lambda_feasible(lambda, w)) continue;
        enumerate_trees(inst, [&](const std::vector<EdgeId>& t) {
            ImageVector y = tree_image(inst, t);
            Rational dot;
            for (int i = 0; i < 3; ++i) dot += lambda[i] * Rational(y[i]);
            CHECK(dot <= owa(w, y));
        });
    }
}

TEST_CASE("objective relaxation reaches 7 on the running example") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    auto r = bound_objective_relaxation(inst, empty_coloring(inst), w);
    REQUIRE(r.has_value());
    CHECK(r->value >= dec("6.5"));
    CHECK(r->value <= Rational(7));
    CHECK(r->value == Rational(7));  // the comonotone vertex of T4 certifies it
    CHECK(lambda_feasible(r->lambda, w));
    // the certificate actually evaluates to the reported bound
    auto recheck = mst(inst, scalarize(inst, r->lambda), empty_coloring(inst));
    REQUIRE(recheck.has_value());
    CHECK(recheck->total == r->value);
    bool has_t4_image = false;
    for (const Solution& s : r->witnesses)
        if (s.image == ImageVector{6, 8, 6}) has_t4_image = true;
    CHECK(has_t4_image);
}

TEST_CASE("objective relaxation with [1,2] forbidden reaches 7.4") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    EdgeColoring c = empty_coloring(inst);
    c[E12] = EdgeColor::Red;
    auto r = bound_objective_relaxation(inst, c, w);
    REQUIRE(r.has_value());
    CHECK(r->value == dec("7.4"));
    bool witness_794 = false;
    for (const Solution& s : r->witnesses)
        if (s.image == ImageVector{7, 9, 4}) witness_794 = true;
    CHECK(witness_794);
    for (const Solution& s : r->witnesses)
        CHECK(std::find(s.edge_ids.begin(), s.edge_ids.end(), E12) == s.edge_ids.end());
}

TEST_CASE("degenerate lambda polytope yields the vacuous bound 0") {
    MultiGraphInstance inst = example_instance();
    OwaWeights mincrit = classify_weights({dec("0"), dec("0"), dec("1")});
    auto r = bound_objective_relaxation(inst, empty_coloring(inst), mincrit);
    REQUIRE(r.has_value());
    CHECK(r->value == Rational(0));
    CHECK_FALSE(r->witnesses.empty());
}

TEST_CASE("both bounds are sound against enumeration on random instances") {
    SplitMix64 rng(55);
    for (int it = 0; it < 12; ++it) {
        MultiGraphInstance inst = generate_instance(6, 3, rng.next());
        for (int cls = 0; cls < 3; ++cls) {
            OwaWeights w = cls == 0   ? random_decreasing_weights(3, rng)
                           : cls == 1 ? uniform_weights(3)
                                      : hurwicz_weights(dec("0.4"), 3);
            auto truth = brute_force_optimum(inst, w);
            REQUIRE(truth.has_value());
            for (BoundMethod method : {BoundMethod::Image, BoundMethod::Objective}) {
                auto r = compute_bound(inst, empty_coloring(inst), w, method);
                REQUIRE(r.has_value());
                CHECK(r->value <= truth->owa_value);
                for (const Solution& s : r->witnesses) {
                    CHECK((int)s.edge_ids.size() == inst.n - 1);
                    CHECK(s.owa_value >= truth->owa_value);
                }
            }
        }
    }
}

TEST_CASE("ideal point cache returns identical results") {
    MultiGraphInstance inst = example_instance();
    OwaWeights w = example_weights();
    BoundWorkspace cache;
    auto a = ideal_point(inst, empty_coloring(inst), w, &cache);
    auto b = ideal_point(inst, empty_coloring(inst), w, &cache);
    REQUIRE(a.has_value());
    REQUIRE(b.has_value());
    CHECK(cache.ideal_points.size() == 1);
    CHECK(a->point.b == b->point.b);
    CHECK(a->point.b0 == b->point.b0);
}
