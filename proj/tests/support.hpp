#ifndef OWAST_TESTS_SUPPORT_HPP
#define OWAST_TESTS_SUPPORT_HPP

#include <vector>

#include "owast/core.hpp"
#include "owast/io.hpp"

namespace owast::testing {

// The running K4 instance used across the suite. Edge ids:
//   0:[1,2]=(3,2,3)  1:[1,3]=(4,3,1)  2:[1,4]=(1,2,2)
//   3:[2,3]=(2,4,1)  4:[2,4]=(2,6,1)  5:[3,4]=(1,5,1)
inline MultiGraphInstance example_instance() {
    MultiGraphInstance inst;
    inst.n = 4;
    inst.p = 3;
    auto add = [&](int u, int v, std::int64_t a, std::int64_t b, std::int64_t c) {
        inst.edges.push_back({u - 1, v - 1, {a, b, c}});
    };
    add(1, 2, 3, 2, 3);
    add(1, 3, 4, 3, 1);
    add(1, 4, 1, 2, 2);
    add(2, 3, 2, 4, 1);
    add(2, 4, 2, 6, 1);
    add(3, 4, 1, 5, 1);
    return inst;
}

constexpr EdgeId E12 = 0, E13 = 1, E14 = 2, E23 = 3, E24 = 4, E34 = 5;

inline Rational dec(const char* s) { return Rational::from_decimal(s); }

inline OwaWeights example_weights() {
    return classify_weights({dec("0.5"), dec("0.3"), dec("0.2")});
}

// Distinct positive integers scaled to sum 1: strictly decreasing by design.
inline OwaWeights random_decreasing_weights(int p, SplitMix64& rng) {
    std::vector<std::int64_t> raw;
    std::int64_t cur = 1 + (std::int64_t)(rng.next() % 5);
    for (int i = 0; i < p; ++i) {
        raw.push_back(cur);
        cur += 1 + (std::int64_t)(rng.next() % 7);
    }
    std::int64_t total = 0;
    for (auto v : raw) total += v;
    std::vector<Rational> w;
    for (int i = p - 1; i >= 0; --i) w.push_back(Rational(raw[i], total));
    return classify_weights(std::move(w));
}

// Nonnegative integers scaled to sum 1; may come out in any class.
inline OwaWeights random_weights(int p, SplitMix64& rng) {
    std::vector<std::int64_t> raw(p);
    std::int64_t total = 0;
    for (auto& v : raw) {
        v = (std::int64_t)(rng.next() % 9);
        total += v;
    }
    if (total == 0) {
        raw[0] = 1;
        total = 1;
    }
    std::vector<Rational> w;
    for (auto v : raw) w.push_back(Rational(v, total));
    return classify_weights(std::move(w));
}

inline ImageVector random_image(int p, SplitMix64& rng, std::int64_t lo = -50,
                                std::int64_t hi = 50) {
    ImageVector y(p);
    for (auto& v : y) v = rng.range(lo, hi);
    return y;
}

} // namespace owast::testing

#endif // OWAST_TESTS_SUPPORT_HPP
