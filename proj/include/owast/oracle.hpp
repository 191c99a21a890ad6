#ifndef OWAST_ORACLE_HPP
#define OWAST_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "owast/bounds.hpp"
#include "owast/core.hpp"
#include "owast/mst.hpp"

namespace owast {

namespace detail {

/// Deletion/contraction recursion. Edges are considered in id order; each is
/// either taken (contract) or, when the remainder still connects everything,
/// skipped (delete). Every spanning tree of the colored subproblem is
/// produced exactly once. Intended for small instances (n <= 10).
class TreeEnumerator {
public:
    TreeEnumerator(const MultiGraphInstance& inst, const EdgeColoring& coloring,
                   const std::function<void(const std::vector<EdgeId>&)>& emit)
        : inst_(inst), emit_(emit) {
        if (!validate_coloring(inst, coloring).ok) return;
        UnionFind uf(inst.n);
        int components = inst.n;
        for (EdgeId e = 0; e < inst.m(); ++e) {
            if (coloring[e] == EdgeColor::Blue) {
                uf.unite(inst.edges[e].u, inst.edges[e].v);
                chosen_.push_back(e);
                --components;
            } else if (coloring[e] == EdgeColor::Uncolored) {
                avail_.push_back(e);
            }
        }
        recurse(uf, 0, components);
    }

private:
    void recurse(UnionFind uf, std::size_t pos, int components) {
        if (components == 1) {
            std::vector<EdgeId> tree = chosen_;
            std::sort(tree.begin(), tree.end());
            emit_(tree);
            return;
        }
        while (pos < avail_.size()) {
            EdgeId e = avail_[pos];
            if (uf.find(inst_.edges[e].u) != uf.find(inst_.edges[e].v)) break;
            ++pos;  // both endpoints merged already; useless from here on
        }
        if (pos == avail_.size()) return;
        EdgeId e = avail_[pos];

        UnionFind with = uf;
        with.unite(inst_.edges[e].u, inst_.edges[e].v);
        chosen_.push_back(e);
        recurse(std::move(with), pos + 1, components - 1);
        chosen_.pop_back();

        // delete branch only if the remaining edges can still connect
        UnionFind probe = uf;
        int parts = components;
        for (std::size_t q = pos + 1; q < avail_.size() && parts > 1; ++q)
            if (probe.unite(inst_.edges[avail_[q]].u, inst_.edges[avail_[q]].v)) --parts;
        if (parts == 1) recurse(std::move(uf), pos + 1, components);
    }

    const MultiGraphInstance& inst_;
    const std::function<void(const std::vector<EdgeId>&)>& emit_;
    std::vector<EdgeId> avail_;
    std::vector<EdgeId> chosen_;
};

} // namespace detail

/// Streams every spanning tree of the colored subproblem exactly once.
inline void enumerate_trees(const MultiGraphInstance& inst, const EdgeColoring& coloring,
                            const std::function<void(const std::vector<EdgeId>&)>& emit) {
    detail::TreeEnumerator{inst, coloring, emit};
}

inline void enumerate_trees(const MultiGraphInstance& inst,
                            const std::function<void(const std::vector<EdgeId>&)>& emit) {
    enumerate_trees(inst, empty_coloring(inst), emit);
}

/// Kirchhoff matrix-tree count via fraction-free (Bareiss) elimination;
/// exact as long as the count fits 64 bits.
inline std::int64_t spanning_tree_count(const MultiGraphInstance& inst) {
    const int d = inst.n - 1;
    if (d <= 0) return inst.n == 1 ? 1 : 0;
    std::vector<std::vector<__int128>> a(d, std::vector<__int128>(d, 0));
    for (const Edge& e : inst.edges) {
        int u = e.u, v = e.v;
        if (u > 0) a[u - 1][u - 1] += 1;
        if (v > 0) a[v - 1][v - 1] += 1;
        if (u > 0 && v > 0) {
            a[u - 1][v - 1] -= 1;
            a[v - 1][u - 1] -= 1;
        }
    }
    __int128 prev = 1;
    int sign = 1;
    for (int k = 0; k < d; ++k) {
        if (a[k][k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < d; ++i)
                if (a[i][k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return 0;
            std::swap(a[k], a[swap_row]);
            sign = -sign;
        }
        for (int i = k + 1; i < d; ++i)
            for (int j = k + 1; j < d; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    __int128 det = sign * a[d - 1][d - 1];
    if (det < 0 || det > INT64_MAX)
        throw std::overflow_error("spanning tree count exceeds 64-bit range");
    return (std::int64_t)det;
}

/// Exhaustive minimum over the colored subproblem, ties broken by the
/// lexicographically smallest edge-id set. Ground truth for everything else.
inline std::optional<Solution> brute_force_optimum(const MultiGraphInstance& inst,
                                                   const OwaWeights& w,
                                                   const EdgeColoring& coloring) {
    std::optional<Solution> best;
    enumerate_trees(inst, coloring, [&](const std::vector<EdgeId>& tree) {
        Solution s = make_solution(inst, tree, w);
        if (!best || s.owa_value < best->owa_value ||
            (s.owa_value == best->owa_value && s.edge_ids < best->edge_ids))
            best = std::move(s);
    });
    return best;
}

inline std::optional<Solution> brute_force_optimum(const MultiGraphInstance& inst,
                                                   const OwaWeights& w) {
    return brute_force_optimum(inst, w, empty_coloring(inst));
}

/// True when the optimal value over trees respecting the coloring equals the
/// unconstrained optimal value. The soundness contract of preprocessing and
/// shaving.
inline bool coloring_preserves_optimum(const MultiGraphInstance& inst,
                                       const OwaWeights& w,
                                       const EdgeColoring& coloring) {
    auto whole = brute_force_optimum(inst, w);
    auto sub = brute_force_optimum(inst, w, coloring);
    if (!whole) return !sub;
    return sub && sub->owa_value == whole->owa_value;
}

struct VerifyReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Cross-checks a solver run against exhaustive enumeration: the final value
/// must equal the true optimum and every recorded bound must be a valid lower
/// bound for the subproblem it was computed on.
inline VerifyReport verify_run(const MultiGraphInstance& inst, const OwaWeights& w,
                               const Solution& result,
                               const std::vector<BoundTrace>& traces) {
    VerifyReport rep;
    auto whole = brute_force_optimum(inst, w);
    if (!whole) {
        rep.violations.push_back("instance admits no spanning tree");
        return rep;
    }
    if (result.owa_value != whole->owa_value)
        rep.violations.push_back("solver value " + result.owa_value.to_string() +
                                 " differs from optimum " + whole->owa_value.to_string());
    for (std::size_t i = 0; i < traces.size(); ++i) {
        auto sub = brute_force_optimum(inst, w, traces[i].coloring);
        if (!sub) continue;  // infeasible subproblem: any report is fine
        if (!traces[i].bound) {
            rep.violations.push_back("trace " + std::to_string(i) +
                                     ": reported infeasible but trees exist");
        } else if (*traces[i].bound > sub->owa_value) {
            rep.violations.push_back("trace " + std::to_string(i) + ": bound " +
                                     traces[i].bound->to_string() + " exceeds optimum " +
                                     sub->owa_value.to_string());
        }
    }
    return rep;
}

} // namespace owast

#endif // OWAST_ORACLE_HPP
