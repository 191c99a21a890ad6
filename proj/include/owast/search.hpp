#ifndef OWAST_SEARCH_HPP
#define OWAST_SEARCH_HPP

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

#include "owast/bounds.hpp"
#include "owast/core.hpp"
#include "owast/mst.hpp"
#include "owast/preprocess.hpp"

namespace owast {

struct SearchConfig {
    std::optional<BoundMethod> bound_method;  // default: objective for monotone
                                              // weights, image otherwise
    int k_seed = 0;                           // 0 = size-based schedule
    bool use_preprocess = true;
    bool use_shave = true;
    std::optional<std::uint64_t> node_limit;
    std::optional<double> time_limit_sec;
    bool record_traces = false;
    // Subgradient budget for standalone and shaving bound calls. Inside
    // branch and bound the same bound is evaluated from a pool of cached
    // scalarizations instead of restarting the ascent at every node.
    int bound_max_iters = 200;
    int bound_stall_limit = 25;
};

struct SearchStats {
    std::uint64_t nodes_expanded = 0;
    std::uint64_t bounds_computed = 0;
    std::uint64_t edges_shaved_blue = 0;
    std::uint64_t edges_shaved_red = 0;
    std::uint64_t incumbent_updates = 0;
    double wall_time_sec = 0;
};

/// One shaving test, kept for fidelity checks and reporting.
struct ShaveStep {
    EdgeId edge = -1;
    bool mandatory_test = true;                // false: forbidden test
    std::optional<Rational> bound;             // nullopt: subproblem infeasible
    EdgeColor applied = EdgeColor::Uncolored;  // color assigned by this test
};

struct ShaveResult {
    EdgeColoring coloring;
    Solution incumbent;
    std::vector<ShaveStep> steps;
};

struct SolveResult {
    Solution best;
    SearchStats stats;
    bool proven = true;  // false when a node/time limit stopped the search
    EdgeColoring final_coloring;
    std::optional<EdgeColoring> preprocess_coloring;
};

inline int default_k_seed(int n) {
    if (n <= 40) return 500;
    if (n <= 70) return 2000;
    return 5000;
}

/// Best-of-k incumbent: k-best spanning trees under the arithmetic-mean
/// scalarization, re-ranked by OWA.
inline Solution seed_incumbent(const MultiGraphInstance& inst, const OwaWeights& w,
                               int k) {
    std::vector<Rational> ones(inst.p, Rational(1));
    auto ranked = k_best(inst, scalarize(inst, ones), k);
    if (ranked.empty()) throw InputError("instance admits no spanning tree");
    std::optional<Solution> best;
    for (const MstResult& r : ranked) {
        Solution s = make_solution(inst, r.edge_ids, w);
        if (!best || s.owa_value < best->owa_value) best = std::move(s);
    }
    return *best;
}

namespace detail {

struct SearchContext {
    SearchContext(const MultiGraphInstance& inst_, const OwaWeights& w_,
                  const SearchConfig& cfg_)
        : inst(inst_), w(w_), cfg(cfg_),
          method(cfg_.bound_method.value_or(w_.monotone() ? BoundMethod::Objective
                                                          : BoundMethod::Image)) {}

    const MultiGraphInstance& inst;
    const OwaWeights& w;
    const SearchConfig& cfg;
    BoundMethod method;
    SearchStats stats;
    std::vector<BoundTrace>* traces = nullptr;
    BoundWorkspace workspace;
    Solution incumbent;
    std::chrono::steady_clock::time_point t0;
    bool aborted = false;

    bool offer(const Solution& s) {
        if (s.owa_value < incumbent.owa_value) {
            incumbent = s;
            ++stats.incumbent_updates;
            return true;
        }
        return false;
    }

    std::optional<BoundResult> bound(const EdgeColoring& coloring,
                                     const ObjectiveBoundConfig& bcfg) {
        ++stats.bounds_computed;
        auto r = compute_bound(inst, coloring, w, method, bcfg, &workspace);
        if (traces) traces->push_back({coloring, r ? std::optional<Rational>(r->value)
                                                   : std::nullopt});
        if (r)
            for (const Solution& s : r->witnesses) offer(s);
        return r;
    }

    bool out_of_budget() {
        if (cfg.node_limit && stats.nodes_expanded >= *cfg.node_limit) return true;
        if (cfg.time_limit_sec && (stats.nodes_expanded & 0xFF) == 0) {
            double el = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - t0)
                            .count();
            if (el >= *cfg.time_limit_sec) return true;
        }
        return false;
    }
};

} // namespace detail

/// Shaving: for each uncolored edge, force it and check whether the lower
/// bound proves no improving tree exists (then the edge is forbidden);
/// otherwise forbid it and check again (then it is mandatory). Tests run
/// sequentially, each seeing the colors assigned before it, and compare with
/// strict > so the incumbent always stays feasible within the coloring.
inline ShaveResult shave(const MultiGraphInstance& inst, EdgeColoring coloring,
                         const OwaWeights& w, const Solution& incumbent,
                         const SearchConfig& cfg, SearchStats* stats_out = nullptr,
                         std::vector<BoundTrace>* traces = nullptr) {
    detail::SearchContext ctx(inst, w, cfg);
    ctx.traces = traces;
    ctx.incumbent = incumbent;
    ctx.t0 = std::chrono::steady_clock::now();

    ShaveResult out;
    ObjectiveBoundConfig bcfg;
    bcfg.max_iters = cfg.bound_max_iters;
    bcfg.stall_limit = cfg.bound_stall_limit;
    for (EdgeId e = 0; e < inst.m(); ++e) {
        if (coloring[e] != EdgeColor::Uncolored) continue;
        bcfg.cutoff = ctx.incumbent.owa_value;
        bcfg.stop_on_equal = false;  // coloring needs strictly greater
        coloring[e] = EdgeColor::Blue;  // mandatory test
        auto b1 = ctx.bound(coloring, bcfg);
        out.steps.push_back({e, true,
                             b1 ? std::optional<Rational>(b1->value) : std::nullopt,
                             EdgeColor::Uncolored});
        if (!b1 || b1->value > ctx.incumbent.owa_value) {
            coloring[e] = EdgeColor::Red;
            out.steps.back().applied = EdgeColor::Red;
            ++ctx.stats.edges_shaved_red;
            continue;
        }
        bcfg.cutoff = ctx.incumbent.owa_value;
        coloring[e] = EdgeColor::Red;  // forbidden test
        auto b2 = ctx.bound(coloring, bcfg);
        out.steps.push_back({e, false,
                             b2 ? std::optional<Rational>(b2->value) : std::nullopt,
                             EdgeColor::Uncolored});
        if (!b2 || b2->value > ctx.incumbent.owa_value) {
            coloring[e] = EdgeColor::Blue;
            out.steps.back().applied = EdgeColor::Blue;
            ++ctx.stats.edges_shaved_blue;
        } else {
            coloring[e] = EdgeColor::Uncolored;
        }
    }
    out.coloring = std::move(coloring);
    out.incumbent = std::move(ctx.incumbent);
    if (stats_out) {
        stats_out->bounds_computed += ctx.stats.bounds_computed;
        stats_out->edges_shaved_blue += ctx.stats.edges_shaved_blue;
        stats_out->edges_shaved_red += ctx.stats.edges_shaved_red;
        stats_out->incumbent_updates += ctx.stats.incumbent_updates;
    }
    return out;
}

namespace detail {

/// Union-find without path compression so that unions can be undone in LIFO
/// order; the branch-and-bound stacks blue edges this way.
class UndoableUnionFind {
public:
    explicit UndoableUnionFind(int n) : parent_(n), size_(n, 1) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }
    int find(int x) const {
        while (parent_[x] != x) x = parent_[x];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
        undo_.push_back({a, b});
        return true;
    }
    void undo_last() {
        auto [a, b] = undo_.back();
        undo_.pop_back();
        size_[a] -= size_[b];
        parent_[b] = b;
    }
    const std::vector<int>& parents() const { return parent_; }

private:
    std::vector<int> parent_;
    std::vector<int> size_;
    std::vector<std::pair<int, int>> undo_;
};

/// Depth-first branch and bound over edge colorings, engineered so that a
/// node costs on the order of a microsecond: feasibility is maintained
/// incrementally (blue union-find with undo, connectivity probes against a
/// scratch buffer), the branch order is the fixed (summed cost, id) order,
/// and the lower bound at a node re-evaluates a small pool of cached
/// scalarizations instead of restarting a subgradient ascent. For the image
/// method the p+1 per-objective MSTs reuse presorted edge orders and the
/// chain-LP values are memoized per ideal point.
class BbEngine {
public:
    BbEngine(SearchContext& ctx, EdgeColoring coloring)
        : ctx_(ctx), inst_(ctx.inst), coloring_(std::move(coloring)),
          blue_(inst_.n), image_accum_(inst_.p, 0) {
        ensure_objective_orders(inst_, ctx_.workspace);
        branch_order_.resize(inst_.m());
        for (EdgeId e = 0; e < inst_.m(); ++e) branch_order_[e] = e;
        std::stable_sort(branch_order_.begin(), branch_order_.end(),
                         [&](EdgeId a, EdgeId b) {
                             std::int64_t sa = inst_.cost_sum(a), sb = inst_.cost_sum(b);
                             if (sa != sb) return sa < sb;
                             return a < b;
                         });
        if (ctx_.method == BoundMethod::Objective) init_pool();
    }

    void run() {
        components_ = inst_.n;
        for (EdgeId e = 0; e < inst_.m(); ++e)
            if (coloring_[e] == EdgeColor::Blue) {
                if (!blue_.unite(inst_.edges[e].u, inst_.edges[e].v)) return;
                push_blue_effects(e);
                --components_;
            }
        if (!connectable_from(0)) return;
        recurse(0);
    }

private:
    // ---- incremental blue-edge state ----------------------------------------

    void push_blue_effects(EdgeId e) {
        blue_stack_.push_back(e);
        for (int i = 0; i < inst_.p; ++i) image_accum_[i] += inst_.edges[e].cost[i];
        for (std::size_t k = 0; k < pool_.size(); ++k)
            pool_blue_sum_[k] += pool_[k].weights[e];
    }
    void pop_blue_effects(EdgeId e) {
        blue_stack_.pop_back();
        for (int i = 0; i < inst_.p; ++i) image_accum_[i] -= inst_.edges[e].cost[i];
        for (std::size_t k = 0; k < pool_.size(); ++k)
            pool_blue_sum_[k] -= pool_[k].weights[e];
    }

    /// True when blue components can still be joined by the edges that are
    /// not red, looking at positions >= pos of the branch order (everything
    /// before pos is already colored).
    bool connectable_from(std::size_t pos) {
        probe_parent_ = blue_.parents();
        int parts = components_;
        for (std::size_t q = pos; q < branch_order_.size() && parts > 1; ++q) {
            EdgeId o = branch_order_[q];
            if (coloring_[o] == EdgeColor::Red) continue;
            int a = probe_find(inst_.edges[o].u);
            int b = probe_find(inst_.edges[o].v);
            if (a != b) {
                probe_parent_[a] = b;
                --parts;
            }
        }
        return parts == 1;
    }
    int probe_find(int x) {
        while (probe_parent_[x] != x) {
            probe_parent_[x] = probe_parent_[probe_parent_[x]];
            x = probe_parent_[x];
        }
        return x;
    }

    // ---- node bound ----------------------------------------------------------

    struct PoolEntry {
        std::vector<Rational> lambda;
        ScalarWeights weights;
        std::vector<EdgeId> order;
    };

    void init_pool() {
        std::vector<Rational> caps(inst_.p);
        Rational acc;
        for (int k = 0; k < inst_.p; ++k) {
            acc += ctx_.w.w[k];
            caps[k] = acc;
        }
        degenerate_ = caps[0].sign() == 0;
        if (degenerate_) return;
        Rational c = caps[0];
        for (int k = 1; k < inst_.p; ++k) c = min(c, caps[k] / Rational(k + 1));
        add_pool_entry(std::vector<Rational>(inst_.p, c));
    }

    void add_pool_entry(std::vector<Rational> lambda) {
        pool_known_.insert(lambda_hash(lambda));
        PoolEntry e;
        e.weights = scalarize(inst_, lambda);
        e.order = weight_order(inst_, e.weights);
        e.lambda = std::move(lambda);
        Rational bs;
        for (EdgeId b : blue_stack_) bs += e.weights[b];
        pool_.push_back(std::move(e));
        pool_blue_sum_.push_back(bs);
    }

    /// z(lambda) for one pool entry under the current coloring; the MST
    /// completes because the node is feasible. Also reports the minimizing
    /// tree's image for polishing and incumbent updates.
    Rational eval_entry(std::size_t k, ImageVector& image_out) {
        const PoolEntry& pe = pool_[k];
        probe_parent_ = blue_.parents();
        int parts = components_;
        Rational total = pool_blue_sum_[k];
        for (int i = 0; i < inst_.p; ++i) image_out[i] = image_accum_[i];
        for (std::size_t q = 0; q < pe.order.size() && parts > 1; ++q) {
            EdgeId o = pe.order[q];
            if (coloring_[o] != EdgeColor::Uncolored) continue;
            int a = probe_find(inst_.edges[o].u);
            int b = probe_find(inst_.edges[o].v);
            if (a == b) continue;
            probe_parent_[a] = b;
            --parts;
            total += pe.weights[o];
            for (int i = 0; i < inst_.p; ++i) image_out[i] += inst_.edges[o].cost[i];
        }
        return total;
    }

    /// Lower bound of the current node: max z over the pool, extended with
    /// the comonotone vertex of the best witness seen at this node (up to a
    /// few rounds). Exits as soon as some entry already proves a prune.
    Rational objective_bound() {
        Rational best;
        bool have = false;
        ImageVector image(inst_.p);
        for (int rounds = 0; rounds < 4; ++rounds) {
            bool extended = false;
            for (std::size_t k = 0; k < pool_.size(); ++k) {
                Rational z = eval_entry(k, image);
                maybe_offer(image);
                if (!have || z > best) {
                    have = true;
                    best = z;
                }
                if (best >= ctx_.incumbent.owa_value) return best;  // prunes
            }
            std::vector<Rational> vertex = comonotone_vertex(best_image_, ctx_.w);
            if (pool_.size() < 12 && !pool_known_.contains(lambda_hash(vertex)) &&
                lambda_feasible(vertex, ctx_.w)) {
                add_pool_entry(std::move(vertex));
                extended = true;
            } else if (!pool_known_.contains(lambda_hash(vertex))) {
                pool_known_.insert(lambda_hash(vertex));
            }
            if (!extended) break;
        }
        return best;
    }

    Rational image_bound() {
        IdealPoint b;
        b.b.resize(inst_.p);
        ImageVector image(inst_.p);
        for (int i = 0; i <= inst_.p; ++i) {
            probe_parent_ = blue_.parents();
            int parts = components_;
            const ScalarWeights& sw = ctx_.workspace.objective_weights[i];
            Rational total;
            for (EdgeId e : blue_stack_) total += sw[e];
            for (int j = 0; j < inst_.p; ++j) image[j] = image_accum_[j];
            for (std::size_t q = 0; q < branch_order_.size() && parts > 1; ++q) {
                EdgeId o = ctx_.workspace.objective_orders[i][q];
                if (coloring_[o] != EdgeColor::Uncolored) continue;
                int pa = probe_find(inst_.edges[o].u);
                int pb = probe_find(inst_.edges[o].v);
                if (pa == pb) continue;
                probe_parent_[pa] = pb;
                --parts;
                total += sw[o];
                for (int j = 0; j < inst_.p; ++j) image[j] += inst_.edges[o].cost[j];
            }
            if (i < inst_.p) b.b[i] = total.num();
            else b.b0 = total.num();
            maybe_offer(image);
        }
        std::uint64_t key = 1469598103934665603ULL;
        for (std::int64_t v : b.b) key = (key ^ (std::uint64_t)v) * 1099511628211ULL;
        key = (key ^ (std::uint64_t)b.b0) * 1099511628211ULL;
        auto it = ctx_.workspace.image_lp_values.find(key);
        if (it == ctx_.workspace.image_lp_values.end())
            it = ctx_.workspace.image_lp_values
                     .emplace(key, bound_image_relaxation(b, ctx_.w))
                     .first;
        return it->second;
    }

    /// Incumbent update from a bound witness; allocates only on improvement.
    void maybe_offer(const ImageVector& image) {
        Rational v = owa(ctx_.w, image);
        if (best_image_.empty() || v < best_image_value_) {
            best_image_ = image;
            best_image_value_ = v;
        }
        if (v < ctx_.incumbent.owa_value) rebuild_incumbent_from_last_eval_ = true;
    }

    // ---- the recursion -------------------------------------------------------

    void recurse(std::size_t pos) {
        if (ctx_.aborted || ctx_.out_of_budget()) {
            ctx_.aborted = true;
            return;
        }
        ++ctx_.stats.nodes_expanded;

        if (components_ == 1) {  // blue edges span: single-tree subproblem
            ctx_.offer(make_solution(inst_, blue_stack_, ctx_.w));
            return;
        }

        ++ctx_.stats.bounds_computed;
        best_image_.clear();
        rebuild_incumbent_from_last_eval_ = false;
        Rational bound;
        if (ctx_.method == BoundMethod::Objective && degenerate_) {
            bound = Rational(0);
        } else if (ctx_.method == BoundMethod::Objective) {
            bound = objective_bound();
        } else {
            bound = image_bound();
        }
        if (rebuild_incumbent_from_last_eval_) adopt_witness();
        if (ctx_.traces) ctx_.traces->push_back({coloring_, bound});
        if (bound >= ctx_.incumbent.owa_value) {
            if (ctx_.traces) ctx_.traces->back().pruned = true;
            return;
        }

        while (pos < branch_order_.size() &&
               coloring_[branch_order_[pos]] != EdgeColor::Uncolored)
            ++pos;
        if (pos == branch_order_.size()) return;
        EdgeId e = branch_order_[pos];

        if (blue_.unite(inst_.edges[e].u, inst_.edges[e].v)) {  // blue child
            coloring_[e] = EdgeColor::Blue;
            push_blue_effects(e);
            --components_;
            recurse(pos + 1);
            ++components_;
            pop_blue_effects(e);
            coloring_[e] = EdgeColor::Uncolored;
            blue_.undo_last();
        }

        coloring_[e] = EdgeColor::Red;  // red child
        if (connectable_from(pos + 1)) recurse(pos + 1);
        coloring_[e] = EdgeColor::Uncolored;
    }

    /// The witness that improved on the incumbent is recomputed as a full
    /// Solution. This re-runs one MST, which is fine: improvements are rare.
    void adopt_witness() {
        if (ctx_.method == BoundMethod::Objective) {
            for (std::size_t k = 0; k < pool_.size(); ++k) {
                std::vector<EdgeId> tree = collect_entry_tree(k);
                Solution s = make_solution(inst_, tree, ctx_.w);
                ctx_.offer(s);
            }
        } else {
            for (int i = 0; i <= inst_.p; ++i) {
                std::vector<EdgeId> tree = blue_stack_;
                probe_parent_ = blue_.parents();
                int parts = components_;
                for (std::size_t q = 0; q < branch_order_.size() && parts > 1; ++q) {
                    EdgeId o = ctx_.workspace.objective_orders[i][q];
                    if (coloring_[o] != EdgeColor::Uncolored) continue;
                    int pa = probe_find(inst_.edges[o].u);
                    int pb = probe_find(inst_.edges[o].v);
                    if (pa == pb) continue;
                    probe_parent_[pa] = pb;
                    --parts;
                    tree.push_back(o);
                }
                ctx_.offer(make_solution(inst_, tree, ctx_.w));
            }
        }
    }

    std::vector<EdgeId> collect_entry_tree(std::size_t k) {
        std::vector<EdgeId> tree = blue_stack_;
        probe_parent_ = blue_.parents();
        int parts = components_;
        const PoolEntry& pe = pool_[k];
        for (std::size_t q = 0; q < pe.order.size() && parts > 1; ++q) {
            EdgeId o = pe.order[q];
            if (coloring_[o] != EdgeColor::Uncolored) continue;
            int a = probe_find(inst_.edges[o].u);
            int b = probe_find(inst_.edges[o].v);
            if (a == b) continue;
            probe_parent_[a] = b;
            --parts;
            tree.push_back(o);
        }
        return tree;
    }

    SearchContext& ctx_;
    const MultiGraphInstance& inst_;
    EdgeColoring coloring_;
    std::vector<EdgeId> branch_order_;
    UndoableUnionFind blue_;
    std::vector<EdgeId> blue_stack_;
    ImageVector image_accum_;
    std::vector<int> probe_parent_;
    int components_ = 0;

    bool degenerate_ = false;
    std::vector<PoolEntry> pool_;
    std::vector<Rational> pool_blue_sum_;
    std::unordered_set<std::uint64_t> pool_known_;
    ImageVector best_image_;
    Rational best_image_value_;
    bool rebuild_incumbent_from_last_eval_ = false;
};

} // namespace detail

/// Depth-first branch and bound over edge colorings. Branches on the
/// uncolored edge with the smallest summed cost (ties to the lower id), blue
/// child first. A node is pruned when its lower bound is >= the incumbent
/// value, since only strictly better trees matter.
inline SolveResult branch_and_bound(const MultiGraphInstance& inst,
                                    const EdgeColoring& coloring, const OwaWeights& w,
                                    const Solution& incumbent, const SearchConfig& cfg,
                                    std::vector<BoundTrace>* traces = nullptr) {
    detail::SearchContext ctx(inst, w, cfg);
    ctx.traces = traces;
    ctx.incumbent = incumbent;
    ctx.t0 = std::chrono::steady_clock::now();

    detail::BbEngine engine(ctx, coloring);
    engine.run();

    SolveResult out;
    out.best = std::move(ctx.incumbent);
    out.stats = ctx.stats;
    out.proven = !ctx.aborted;
    out.final_coloring = coloring;
    out.stats.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.t0).count();
    return out;
}

/// Full pipeline. Non-increasing weights: preprocess, seed, shave, then
/// branch and bound. Arbitrary weights: the optimality conditions do not
/// apply, so preprocessing is skipped and the image-set bound is the default.
inline SolveResult solve(const MultiGraphInstance& inst, const OwaWeights& w,
                         const SearchConfig& cfg = {},
                         std::vector<BoundTrace>* traces = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult out;

    EdgeColoring coloring = empty_coloring(inst);
    if (w.monotone() && cfg.use_preprocess) {
        coloring = preprocess(inst, w);
        out.preprocess_coloring = coloring;
    }

    int k = cfg.k_seed > 0 ? cfg.k_seed : default_k_seed(inst.n);
    Solution incumbent = seed_incumbent(inst, w, k);

    SearchStats pre_stats;
    if (cfg.use_shave) {
        ShaveResult sh = shave(inst, coloring, w, incumbent, cfg, &pre_stats, traces);
        coloring = std::move(sh.coloring);
        incumbent = std::move(sh.incumbent);
    }

    SolveResult bb = branch_and_bound(inst, coloring, w, incumbent, cfg, traces);
    out.best = std::move(bb.best);
    out.proven = bb.proven;
    out.final_coloring = std::move(bb.final_coloring);
    out.stats = bb.stats;
    out.stats.bounds_computed += pre_stats.bounds_computed;
    out.stats.edges_shaved_blue += pre_stats.edges_shaved_blue;
    out.stats.edges_shaved_red += pre_stats.edges_shaved_red;
    out.stats.incumbent_updates += pre_stats.incumbent_updates;
    out.stats.wall_time_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace owast

#endif // OWAST_SEARCH_HPP
