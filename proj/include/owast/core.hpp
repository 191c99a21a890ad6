#ifndef OWAST_CORE_HPP
#define OWAST_CORE_HPP

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "owast/rational.hpp"

namespace owast {

using Vertex = int;  // 0-based internally, 1-based in all text formats
using EdgeId = int;  // position of the edge in the instance's edge list

/// Raised when input data (files, CLI arguments) is malformed or inconsistent.
struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an operation is called outside its validity scope,
/// e.g. preprocessing with a non-monotone weight vector.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

struct Edge {
    Vertex u = 0;
    Vertex v = 0;
    std::vector<std::int64_t> cost;  // p components
};

/// A connected simple graph with a p-dimensional integer cost vector per edge.
struct MultiGraphInstance {
    int n = 0;  // vertex count
    int p = 0;  // objective count
    std::vector<Edge> edges;

    int m() const { return (int)edges.size(); }

    const Edge& edge(EdgeId e) const {
        if (e < 0 || e >= (int)edges.size())
            throw InputError("unknown edge id " + std::to_string(e));
        return edges[e];
    }

    /// Sum of all cost components of one edge; the branching heuristic key.
    std::int64_t cost_sum(EdgeId e) const {
        std::int64_t s = 0;
        for (std::int64_t c : edge(e).cost) s += c;
        return s;
    }
};

using ImageVector = std::vector<std::int64_t>;  // per-objective tree totals
using CostVector = std::vector<std::int64_t>;

enum class WeightClass { StrictlyDecreasing, NonIncreasing, Arbitrary };

inline const char* to_string(WeightClass c) {
    switch (c) {
        case WeightClass::StrictlyDecreasing: return "strictly-decreasing";
        case WeightClass::NonIncreasing: return "non-increasing";
        default: return "arbitrary";
    }
}

/// Rank weights of the ordered weighted average, stored exactly.
/// w attaches to sorted positions, not to objectives; sum(w) == 1.
struct OwaWeights {
    std::vector<Rational> w;
    WeightClass cls = WeightClass::Arbitrary;

    int p() const { return (int)w.size(); }
    bool monotone() const { return cls != WeightClass::Arbitrary; }
};

/// A spanning tree together with its image vector and exact OWA value.
struct Solution {
    std::vector<EdgeId> edge_ids;  // sorted ascending
    ImageVector image;
    Rational owa_value;
};

/// Validates sum == 1 and nonnegativity, then assigns the strongest
/// applicable class (strictly decreasing beats non-increasing beats arbitrary).
inline OwaWeights classify_weights(std::vector<Rational> w) {
    if (w.size() < 2) throw InputError("weight vector needs p >= 2 components");
    Rational sum;
    for (const Rational& wi : w) {
        if (wi.sign() < 0) throw InputError("negative OWA weight");
        sum += wi;
    }
    if (sum != Rational(1)) throw InputError("OWA weights must sum to exactly 1");
    bool strict = true, nonincr = true;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        if (!(w[i] > w[i + 1])) strict = false;
        if (w[i] < w[i + 1]) nonincr = false;
    }
    if (w.back().sign() <= 0) strict = false;
    OwaWeights out;
    out.w = std::move(w);
    out.cls = strict ? WeightClass::StrictlyDecreasing
                     : (nonincr ? WeightClass::NonIncreasing : WeightClass::Arbitrary);
    return out;
}

/// Hurwicz criterion as an OWA instance: alpha on the largest component,
/// 1-alpha on the smallest.
inline OwaWeights hurwicz_weights(const Rational& alpha, int p) {
    if (alpha < Rational(0) || alpha > Rational(1))
        throw InputError("hurwicz alpha must lie in [0,1]");
    if (p < 2) throw InputError("hurwicz needs p >= 2");
    std::vector<Rational> w(p, Rational(0));
    w.front() = alpha;
    w.back() += Rational(1) - alpha;
    return classify_weights(std::move(w));
}

/// OWA(y) = sum_i w_i * y_(i) with components sorted non-increasingly. Exact.
inline Rational owa(const OwaWeights& w, const ImageVector& y) {
    if ((int)y.size() != w.p())
        throw InputError("owa: weight/vector length mismatch");
    ImageVector s = y;
    std::sort(s.begin(), s.end(), std::greater<>());
    Rational acc;
    for (std::size_t i = 0; i < s.size(); ++i) acc += w.w[i] * Rational(s[i]);
    return acc;
}

/// Lorenz vector: L_i = sum of the i largest components of y.
inline std::vector<std::int64_t> lorenz(const ImageVector& y) {
    ImageVector s = y;
    std::sort(s.begin(), s.end(), std::greater<>());
    std::vector<std::int64_t> L(s.size());
    std::int64_t acc = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        acc += s[i];
        L[i] = acc;
    }
    return L;
}

/// Componentwise sum of the cost vectors of an edge set.
inline ImageVector tree_image(const MultiGraphInstance& inst,
                              const std::vector<EdgeId>& edge_ids) {
    ImageVector y(inst.p, 0);
    for (EdgeId e : edge_ids) {
        const Edge& ed = inst.edge(e);
        for (int i = 0; i < inst.p; ++i) y[i] += ed.cost[i];
    }
    return y;
}

inline Solution make_solution(const MultiGraphInstance& inst,
                              std::vector<EdgeId> edge_ids, const OwaWeights& w) {
    std::sort(edge_ids.begin(), edge_ids.end());
    Solution s;
    s.image = tree_image(inst, edge_ids);
    s.owa_value = owa(w, s.image);
    s.edge_ids = std::move(edge_ids);
    return s;
}

/// Componentwise difference v^a - v^b of two edge cost vectors.
inline ImageVector cost_difference(const MultiGraphInstance& inst, EdgeId a, EdgeId b) {
    ImageVector d(inst.p);
    for (int i = 0; i < inst.p; ++i) d[i] = inst.edges[a].cost[i] - inst.edges[b].cost[i];
    return d;
}

} // namespace owast

#endif // OWAST_CORE_HPP
