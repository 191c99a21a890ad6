#ifndef OWAST_PREPROCESS_HPP
#define OWAST_PREPROCESS_HPP

#include <algorithm>
#include <array>
#include <vector>

#include "owast/core.hpp"
#include "owast/mst.hpp"

namespace owast {

/// Outcome of one optimality-condition test, with the certifying structure:
/// the crossing edges of the isolating cut, or the edges of the cycle.
struct ConditionWitness {
    bool holds = false;
    std::vector<EdgeId> witness;
};

namespace detail {

inline void require_monotone(const OwaWeights& w) {
    if (!w.monotone())
        throw UsageError(
            "cut/cycle optimality conditions require non-increasing OWA weights");
}

/// Shared buffers for the O(m^2) preprocessing sweep: the pairwise OWA sign
/// tests and the DFS reachability probes run without heap allocation.
class ConditionTester {
public:
    ConditionTester(const MultiGraphInstance& inst, const OwaWeights& w)
        : inst_(inst), w_(w), in_graph_(inst.m(), 0), visited_(inst.n, 0),
          parent_edge_(inst.n, -1), stack_(inst.n) {
        adj_.resize(inst.n);
        for (auto& a : adj_) a.reserve(inst.n);
        // scale the weights onto one denominator so the m^2 sign tests run
        // on plain integers, gcd-free; exotic weights fall back to rationals
        __int128 lcm = 1;
        for (const Rational& wi : w.w) {
            __int128 g = std::gcd((std::int64_t)(lcm % wi.den()), wi.den());
            lcm = lcm / g * wi.den();
            if (lcm > ((__int128)1 << 40)) return;
        }
        std::int64_t big = 0;
        for (const Edge& e : inst.edges)
            for (std::int64_t c : e.cost) big = std::max(big, c < 0 ? -c : c);
        if ((__int128)big * 2 > ((__int128)1 << 41)) return;
        scaled_.resize(w.p());
        for (int i = 0; i < w.p(); ++i)
            scaled_[i] = (std::int64_t)((__int128)w.w[i].num() *
                                        ((std::int64_t)lcm / w.w[i].den()));
        fast_sign_ = true;
    }

    /// sign of OWA(v^a - v^b), evaluated on a stack buffer
    int owa_diff_sign(EdgeId a, EdgeId b) const {
        const int p = inst_.p;
        std::array<std::int64_t, 32> diff;
        std::vector<std::int64_t> spill;
        std::int64_t* d = diff.data();
        if (p > 32) {
            spill.resize(p);
            d = spill.data();
        }
        for (int i = 0; i < p; ++i)
            d[i] = inst_.edges[a].cost[i] - inst_.edges[b].cost[i];
        std::sort(d, d + p, std::greater<>());
        if (fast_sign_) {
            __int128 acc = 0;
            for (int i = 0; i < p; ++i) acc += (__int128)scaled_[i] * d[i];
            return acc > 0 ? 1 : (acc < 0 ? -1 : 0);
        }
        Rational acc;
        for (int i = 0; i < p; ++i) acc += w_.w[i] * Rational(d[i]);
        return acc.sign();
    }

    /// Cut test for an uncolored e = [i,j]: j unreachable from i in
    ///   { uncolored e' : OWA(v^e - v^e') > 0 } + blue edges.
    /// Red edges never take part in a tree and are left out of the graph.
    ConditionWitness cut(const EdgeColoring& coloring, EdgeId e) {
        for (EdgeId o = 0; o < inst_.m(); ++o) {
            if (o == e) {
                in_graph_[o] = 0;
            } else if (coloring[o] == EdgeColor::Blue) {
                in_graph_[o] = 1;
            } else {
                in_graph_[o] = coloring[o] == EdgeColor::Uncolored &&
                               owa_diff_sign(e, o) > 0;
            }
        }
        dfs(inst_.edges[e].u);
        ConditionWitness out;
        if (visited_[inst_.edges[e].v]) return out;
        out.holds = true;
        for (EdgeId o = 0; o < inst_.m(); ++o)
            if (visited_[inst_.edges[o].u] != visited_[inst_.edges[o].v])
                out.witness.push_back(o);
        return out;
    }

    /// Cycle test for an uncolored e = [i,j]: j reachable from i in
    ///   { uncolored e' != e : OWA(v^e' - v^e) <= 0 } + blue edges;
    /// the found chain plus e is the certifying red-free cycle.
    ConditionWitness cycle(const EdgeColoring& coloring, EdgeId e) {
        for (EdgeId o = 0; o < inst_.m(); ++o) {
            if (o == e) {
                in_graph_[o] = 0;
            } else if (coloring[o] == EdgeColor::Blue) {
                in_graph_[o] = 1;
            } else {
                in_graph_[o] = coloring[o] == EdgeColor::Uncolored &&
                               owa_diff_sign(o, e) <= 0;
            }
        }
        dfs(inst_.edges[e].u);
        ConditionWitness out;
        if (!visited_[inst_.edges[e].v]) return out;
        out.holds = true;
        Vertex at = inst_.edges[e].v;
        while (at != inst_.edges[e].u) {
            EdgeId pe = parent_edge_[at];
            out.witness.push_back(pe);
            at = inst_.edges[pe].u == at ? inst_.edges[pe].v : inst_.edges[pe].u;
        }
        out.witness.push_back(e);
        return out;
    }

private:
    void dfs(Vertex from) {
        for (auto& a : adj_) a.clear();
        for (EdgeId o = 0; o < inst_.m(); ++o)
            if (in_graph_[o]) {
                adj_[inst_.edges[o].u].push_back({inst_.edges[o].v, o});
                adj_[inst_.edges[o].v].push_back({inst_.edges[o].u, o});
            }
        std::fill(visited_.begin(), visited_.end(), 0);
        int top = 0;
        stack_[top++] = from;
        visited_[from] = 1;
        while (top > 0) {
            Vertex v = stack_[--top];
            for (auto [nb, o] : adj_[v])
                if (!visited_[nb]) {
                    visited_[nb] = 1;
                    parent_edge_[nb] = o;
                    stack_[top++] = nb;
                }
        }
    }

    const MultiGraphInstance& inst_;
    const OwaWeights& w_;
    std::vector<char> in_graph_;
    std::vector<char> visited_;
    std::vector<EdgeId> parent_edge_;
    std::vector<Vertex> stack_;
    std::vector<std::vector<std::pair<Vertex, EdgeId>>> adj_;
    std::vector<std::int64_t> scaled_;
    bool fast_sign_ = false;
};

} // namespace detail

/// Cut optimality condition: when it holds, e crosses a blue-free cut where
/// it is OWA-best among the uncolored crossing edges, so e may be colored
/// blue without changing the optimal value over T(c).
inline ConditionWitness cut_condition_holds(const MultiGraphInstance& inst,
                                            const EdgeColoring& coloring, EdgeId e,
                                            const OwaWeights& w) {
    detail::require_monotone(w);
    detail::ConditionTester tester(inst, w);
    return tester.cut(coloring, e);
}

/// Cycle optimality condition: when it holds, e lies on a red-free cycle
/// where it is OWA-worst among the uncolored edges, so e may be colored red
/// without changing the optimal value over T(c).
inline ConditionWitness cycle_condition_holds(const MultiGraphInstance& inst,
                                              const EdgeColoring& coloring, EdgeId e,
                                              const OwaWeights& w) {
    detail::require_monotone(w);
    detail::ConditionTester tester(inst, w);
    return tester.cycle(coloring, e);
}

/// Single sweep in ascending edge id: try the cut condition (color blue),
/// else the cycle condition (color red). O(m^2) overall. The resulting
/// coloring preserves min over T(c) of OWA(f(T)).
inline EdgeColoring preprocess(const MultiGraphInstance& inst, const OwaWeights& w,
                               EdgeColoring coloring) {
    detail::require_monotone(w);
    if ((int)coloring.size() != inst.m())
        throw InputError("preprocess: coloring length mismatch");
    detail::ConditionTester tester(inst, w);
    for (EdgeId e = 0; e < inst.m(); ++e) {
        if (coloring[e] != EdgeColor::Uncolored) continue;
        if (tester.cut(coloring, e).holds)
            coloring[e] = EdgeColor::Blue;
        else if (tester.cycle(coloring, e).holds)
            coloring[e] = EdgeColor::Red;
    }
    return coloring;
}

inline EdgeColoring preprocess(const MultiGraphInstance& inst, const OwaWeights& w) {
    return preprocess(inst, w, empty_coloring(inst));
}

} // namespace owast

#endif // OWAST_PREPROCESS_HPP
