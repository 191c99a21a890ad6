#ifndef OWAST_MST_HPP
#define OWAST_MST_HPP

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "owast/core.hpp"

namespace owast {

/// Blue = mandatory, Red = forbidden. T(c) is the set of spanning trees that
/// include every blue edge and no red one.
enum class EdgeColor : std::uint8_t { Uncolored, Blue, Red };

using EdgeColoring = std::vector<EdgeColor>;

inline EdgeColoring empty_coloring(const MultiGraphInstance& inst) {
    return EdgeColoring(inst.m(), EdgeColor::Uncolored);
}

inline const char* to_string(EdgeColor c) {
    switch (c) {
        case EdgeColor::Blue: return "blue";
        case EdgeColor::Red: return "red";
        default: return "uncolored";
    }
}

class UnionFind {
public:
    explicit UnionFind(int n) : parent_(n), size_(n, 1) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    /// Returns false when both endpoints were already connected.
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        return true;
    }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
};

struct ColoringStatus {
    bool ok = true;
    std::string reason;
};

/// Checks the two coloring invariants: blue edges acyclic, graph minus red
/// edges connected. A violation means T(c) is empty.
inline ColoringStatus validate_coloring(const MultiGraphInstance& inst,
                                        const EdgeColoring& coloring) {
    if ((int)coloring.size() != inst.m())
        throw InputError("coloring length does not match edge count");
    UnionFind blue(inst.n);
    for (EdgeId e = 0; e < inst.m(); ++e)
        if (coloring[e] == EdgeColor::Blue &&
            !blue.unite(inst.edges[e].u, inst.edges[e].v))
            return {false, "blue edges contain a cycle"};
    UnionFind comp(inst.n);
    int parts = inst.n;
    for (EdgeId e = 0; e < inst.m(); ++e)
        if (coloring[e] != EdgeColor::Red &&
            comp.unite(inst.edges[e].u, inst.edges[e].v))
            --parts;
    if (parts != 1) return {false, "red edges disconnect the graph"};
    return {};
}

using ScalarWeights = std::vector<Rational>;

/// Values every edge e by sum_i lambda_i * v_i^e, exactly.
inline ScalarWeights scalarize(const MultiGraphInstance& inst,
                               const std::vector<Rational>& lambda) {
    if ((int)lambda.size() != inst.p)
        throw InputError("scalarize: lambda length mismatch");
    ScalarWeights w(inst.m());
    for (EdgeId e = 0; e < inst.m(); ++e) {
        Rational acc;
        for (int i = 0; i < inst.p; ++i)
            acc += lambda[i] * Rational(inst.edges[e].cost[i]);
        w[e] = acc;
    }
    return w;
}

struct MstResult {
    std::vector<EdgeId> edge_ids;  // sorted ascending
    Rational total;
};

namespace detail {

/// Uncolored/red-agnostic edge order shared by every subproblem of one
/// weight vector: ascending weight, ties broken by lower edge id.
inline std::vector<EdgeId> weight_order(const MultiGraphInstance& inst,
                                        const ScalarWeights& weights) {
    std::vector<EdgeId> order(inst.m());
    for (EdgeId e = 0; e < inst.m(); ++e) order[e] = e;
    std::stable_sort(order.begin(), order.end(), [&](EdgeId a, EdgeId b) {
        if (weights[a] != weights[b]) return weights[a] < weights[b];
        return a < b;
    });
    return order;
}

/// Re-establishes the (weight, id) order in place. Insertion sort, so a
/// nearly sorted carry-over from a neighboring weight vector costs about one
/// exact comparison per edge; the result is the same unique permutation
/// weight_order produces.
inline void resort_weight_order(const ScalarWeights& weights,
                                std::vector<EdgeId>& order) {
    for (std::size_t i = 1; i < order.size(); ++i) {
        EdgeId e = order[i];
        std::size_t j = i;
        while (j > 0) {
            EdgeId o = order[j - 1];
            if (weights[e] < weights[o] || (weights[e] == weights[o] && e < o)) {
                order[j] = o;
                --j;
            } else {
                break;
            }
        }
        order[j] = e;
    }
}

/// Kruskal with mandatory blue edges inserted first and red edges skipped.
inline std::optional<MstResult> mst_ordered(const MultiGraphInstance& inst,
                                            const ScalarWeights& weights,
                                            const EdgeColoring& coloring,
                                            const std::vector<EdgeId>& order) {
    UnionFind uf(inst.n);
    MstResult out;
    for (EdgeId e = 0; e < inst.m(); ++e)
        if (coloring[e] == EdgeColor::Blue) {
            if (!uf.unite(inst.edges[e].u, inst.edges[e].v))
                return std::nullopt;  // blue cycle
            out.edge_ids.push_back(e);
            out.total += weights[e];
        }
    for (EdgeId e : order) {
        if ((int)out.edge_ids.size() == inst.n - 1) break;
        if (coloring[e] != EdgeColor::Uncolored) continue;
        if (uf.unite(inst.edges[e].u, inst.edges[e].v)) {
            out.edge_ids.push_back(e);
            out.total += weights[e];
        }
    }
    if ((int)out.edge_ids.size() != inst.n - 1) return std::nullopt;  // disconnected
    std::sort(out.edge_ids.begin(), out.edge_ids.end());
    return out;
}

} // namespace detail

/// Minimum spanning tree among the trees respecting the coloring.
/// Deterministic: among equal weights the lower edge id wins.
/// Returns nullopt when the colored subproblem is infeasible.
inline std::optional<MstResult> mst(const MultiGraphInstance& inst,
                                    const ScalarWeights& weights,
                                    const EdgeColoring& coloring) {
    if ((int)weights.size() != inst.m())
        throw InputError("mst: weight vector length mismatch");
    return detail::mst_ordered(inst, weights, coloring,
                               detail::weight_order(inst, weights));
}

inline std::optional<MstResult> mst(const MultiGraphInstance& inst,
                                    const ScalarWeights& weights) {
    return mst(inst, weights, empty_coloring(inst));
}

/// The k smallest-total spanning trees (fewer when the graph has fewer),
/// totals non-decreasing. Branch-and-partition: the space is split by in/out
/// edge constraints relative to each emitted tree, and each cell is solved by
/// a constrained MST. Ties between equal totals are broken by lexicographic
/// edge-id order, which makes the output deterministic.
inline std::vector<MstResult> k_best(const MultiGraphInstance& inst,
                                     const ScalarWeights& weights, int k) {
    if (k < 1) throw InputError("k_best: k must be >= 1");
    const std::vector<EdgeId> order = detail::weight_order(inst, weights);

    struct Node {
        MstResult rep;
        std::vector<EdgeId> in, out;  // sorted
    };
    auto better = [](const Node& a, const Node& b) {
        if (a.rep.total != b.rep.total) return a.rep.total < b.rep.total;
        return a.rep.edge_ids < b.rep.edge_ids;
    };
    auto solve_cell = [&](const std::vector<EdgeId>& in,
                          const std::vector<EdgeId>& out) -> std::optional<MstResult> {
        EdgeColoring c = empty_coloring(inst);
        for (EdgeId e : in) c[e] = EdgeColor::Blue;
        for (EdgeId e : out) c[e] = EdgeColor::Red;
        return detail::mst_ordered(inst, weights, c, order);
    };

    std::vector<Node> heap;
    auto heap_cmp = [&](const Node& a, const Node& b) { return better(b, a); };
    if (auto root = solve_cell({}, {})) {
        heap.push_back(Node{*root, {}, {}});
    }

    std::vector<MstResult> out;
    while (!heap.empty() && (int)out.size() < k) {
        std::pop_heap(heap.begin(), heap.end(), heap_cmp);
        Node cur = std::move(heap.back());
        heap.pop_back();
        out.push_back(cur.rep);

        std::vector<EdgeId> free;
        std::set_difference(cur.rep.edge_ids.begin(), cur.rep.edge_ids.end(),
                            cur.in.begin(), cur.in.end(), std::back_inserter(free));
        std::vector<EdgeId> in = cur.in;
        for (std::size_t j = 0; j < free.size(); ++j) {
            std::vector<EdgeId> child_out = cur.out;
            child_out.insert(std::lower_bound(child_out.begin(), child_out.end(), free[j]),
                             free[j]);
            if (auto rep = solve_cell(in, child_out)) {
                Node child{*rep, in, std::move(child_out)};
                heap.push_back(std::move(child));
                std::push_heap(heap.begin(), heap.end(), heap_cmp);
            }
            in.insert(std::lower_bound(in.begin(), in.end(), free[j]), free[j]);
        }
    }
    return out;
}

} // namespace owast

#endif // OWAST_MST_HPP
