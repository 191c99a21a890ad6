#ifndef OWAST_BOUNDS_HPP
#define OWAST_BOUNDS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "owast/core.hpp"
#include "owast/mst.hpp"
#include "owast/simplex.hpp"

namespace owast {

enum class BoundMethod { Image, Objective };

/// Per-objective minima over a colored subproblem, plus the minimum of the
/// summed objective. Note b0 >= sum(b_i) does NOT hold in general; each entry
/// is only a bound on the corresponding total of any tree in the subproblem.
struct IdealPoint {
    std::vector<std::int64_t> b;
    std::int64_t b0 = 0;
};

struct IdealPointResult {
    IdealPoint point;
    std::vector<Solution> witnesses;  // the p+1 minimizing trees
};

/// A lower bound along with every feasible tree discovered while computing it.
struct BoundResult {
    Rational value;
    std::vector<Rational> lambda;  // certifying weights (objective method)
    std::vector<Solution> witnesses;
};

/// One bound evaluation as recorded during a run, for offline verification.
struct BoundTrace {
    EdgeColoring coloring;
    std::optional<Rational> bound;  // nullopt: subproblem proved infeasible
    bool pruned = false;
};

namespace detail {

inline std::uint64_t coloring_hash(const EdgeColoring& c) {
    std::uint64_t h = 1469598103934665603ULL;
    for (EdgeColor s : c) {
        h ^= (std::uint64_t)s + 1;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::int64_t rational_to_int(const Rational& r) {
    if (!r.is_integer()) throw std::logic_error("expected integral value");
    return r.num();
}

} // namespace detail

/// Reusable state for the many bound evaluations of one solve: sorted edge
/// orders per scalarization (the expensive part of each Kruskal run), ideal
/// points per coloring, and image-relaxation LP values per ideal point.
struct BoundWorkspace {
    std::vector<ScalarWeights> objective_weights;        // v_i plus summed costs
    std::vector<std::vector<EdgeId>> objective_orders;   // matching sort orders
    std::unordered_map<std::uint64_t, std::pair<ScalarWeights, std::vector<EdgeId>>>
        lambda_orders;
    std::unordered_map<std::uint64_t, std::optional<IdealPointResult>> ideal_points;
    std::unordered_map<std::uint64_t, Rational> image_lp_values;
};

/// Historical alias: ideal points are memoized per coloring inside the
/// workspace.
using IdealPointCache = BoundWorkspace;

namespace detail {

inline void ensure_objective_orders(const MultiGraphInstance& inst, BoundWorkspace& ws) {
    if (!ws.objective_orders.empty()) return;
    for (int i = 0; i <= inst.p; ++i) {
        ScalarWeights sw(inst.m());
        for (EdgeId e = 0; e < inst.m(); ++e)
            sw[e] = Rational(i < inst.p ? inst.edges[e].cost[i] : inst.cost_sum(e));
        ws.objective_orders.push_back(weight_order(inst, sw));
        ws.objective_weights.push_back(std::move(sw));
    }
}

} // namespace detail

/// p+1 colored MST computations: one per objective plus one for summed costs.
/// Returns nullopt when the coloring admits no tree.
inline std::optional<IdealPointResult> ideal_point(const MultiGraphInstance& inst,
                                                   const EdgeColoring& coloring,
                                                   const OwaWeights& w,
                                                   BoundWorkspace* cache = nullptr) {
    std::uint64_t key = 0;
    if (cache) {
        key = detail::coloring_hash(coloring);
        auto it = cache->ideal_points.find(key);
        if (it != cache->ideal_points.end()) return it->second;
    }
    BoundWorkspace local;
    BoundWorkspace& ws = cache ? *cache : local;
    detail::ensure_objective_orders(inst, ws);

    std::optional<IdealPointResult> out;
    IdealPointResult res;
    res.point.b.resize(inst.p);
    bool feasible = true;
    for (int i = 0; i <= inst.p && feasible; ++i) {
        auto r = detail::mst_ordered(inst, ws.objective_weights[i], coloring,
                                     ws.objective_orders[i]);
        if (!r) {
            feasible = false;
            break;
        }
        std::int64_t total = detail::rational_to_int(r->total);
        if (i < inst.p) res.point.b[i] = total;
        else res.point.b0 = total;
        res.witnesses.push_back(make_solution(inst, r->edge_ids, w));
    }
    if (feasible) out = std::move(res);
    if (cache) cache->ideal_points[key] = out;
    return out;
}

/// Optimal value of the chain LP P_{Y',pi} for one permutation:
///   min sum_i w_i y_{pi(i)}
///   s.t. y_{pi(1)} >= ... >= y_{pi(p)},  y_i >= b_i,  sum_i y_i >= b0.
/// Solved after substituting u_i = y_i - b_i >= 0.
inline Rational permutation_lp_value(const IdealPoint& b, const OwaWeights& w,
                                     const std::vector<int>& perm) {
    const int p = (int)b.b.size();
    LinearProgram lp;
    lp.c.assign(p, Rational());
    Rational constant;
    for (int i = 0; i < p; ++i) {
        lp.c[perm[i]] += w.w[i];
        constant += w.w[i] * Rational(b.b[perm[i]]);
    }
    for (int i = 0; i + 1 < p; ++i) {
        LinearProgram::Row row;
        row.a.assign(p, Rational());
        row.a[perm[i]] = Rational(1);
        row.a[perm[i + 1]] = Rational(-1);
        row.rel = LinearProgram::GreaterEq;
        row.b = Rational(b.b[perm[i + 1]] - b.b[perm[i]]);
        lp.rows.push_back(std::move(row));
    }
    LinearProgram::Row sum_row;
    sum_row.a.assign(p, Rational(1));
    sum_row.rel = LinearProgram::GreaterEq;
    std::int64_t bsum = std::accumulate(b.b.begin(), b.b.end(), (std::int64_t)0);
    sum_row.b = Rational(b.b0 - bsum);
    lp.rows.push_back(std::move(sum_row));

    LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw std::logic_error("permutation LP must have an optimum");
    return sol.value + constant;
}

/// Image-set relaxation bound: the chain LP for the permutation pi* sorting b
/// non-increasingly (ties broken by index), which attains the minimum over
/// all p! permutations.
inline Rational bound_image_relaxation(const IdealPoint& b, const OwaWeights& w) {
    std::vector<int> perm(b.b.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) {
        if (b.b[i] != b.b[j]) return b.b[i] > b.b[j];
        return i < j;
    });
    return permutation_lp_value(b, w, perm);
}

/// Membership test for the polytope Lambda: lambda >= 0 and, for every k, the
/// sum of the k largest components is at most w_1 + ... + w_k. The sorted
/// prefix test is equivalent to checking all 2^p subsets because the cap
/// depends only on |I| and the worst subset of size k is the k largest.
inline bool lambda_feasible(const std::vector<Rational>& lambda, const OwaWeights& w) {
    if ((int)lambda.size() != w.p()) return false;
    std::vector<Rational> s = lambda;
    for (const Rational& li : s)
        if (li.sign() < 0) return false;
    std::sort(s.begin(), s.end(), [](const Rational& a, const Rational& b) { return b < a; });
    Rational prefix, cap;
    for (int k = 0; k < w.p(); ++k) {
        prefix += s[k];
        cap += w.w[k];
        if (prefix > cap) return false;
    }
    return true;
}

struct ObjectiveBoundConfig {
    int max_iters = 200;
    int stall_limit = 25;
    std::optional<Rational> cutoff;  // stop once the bound exceeds this value
    bool stop_on_equal = false;      // ... or equals it (branch-and-bound pruning)
};

namespace detail {

constexpr std::int64_t kLambdaGrid = 1 << 20;

inline Rational floor_to_grid(const Rational& x) {
    __int128 n = (__int128)x.num() * kLambdaGrid;
    __int128 q = n / x.den();
    if (n < 0 && q * x.den() != n) --q;
    return Rational((std::int64_t)q, kLambdaGrid);
}

/// Iterative repair projection onto Lambda: clip negatives, then for each
/// violated sorted prefix remove the excess evenly from the k largest
/// components, snapping to a fixed grid so denominators stay bounded.
/// Falls back toward the always-feasible start point if repair stalls.
inline std::vector<Rational> project_lambda(std::vector<Rational> lambda,
                                            const std::vector<Rational>& caps,
                                            const std::vector<Rational>& start) {
    const int p = (int)lambda.size();
    for (auto& li : lambda) {
        if (li.sign() < 0) li = Rational(0);
        li = floor_to_grid(li);
    }
    for (int round = 0; round < 50; ++round) {
        std::vector<int> idx(p);
        std::iota(idx.begin(), idx.end(), 0);
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return lambda[b] < lambda[a]; });
        bool violated = false;
        Rational prefix;
        for (int k = 0; k < p; ++k) {
            prefix += lambda[idx[k]];
            if (prefix > caps[k]) {
                Rational cut = (prefix - caps[k]) / Rational(k + 1);
                for (int j = 0; j <= k; ++j) {
                    Rational v = lambda[idx[j]] - cut;
                    if (v.sign() < 0) v = Rational(0);
                    lambda[idx[j]] = floor_to_grid(v);
                }
                violated = true;
                break;
            }
        }
        if (!violated) return lambda;
    }
    for (int round = 0; round < 64; ++round) {
        bool ok = true;
        Rational prefix;
        std::vector<Rational> s = lambda;
        std::sort(s.begin(), s.end(), [](const Rational& a, const Rational& b) { return b < a; });
        for (int k = 0; k < p; ++k) {
            prefix += s[k];
            if (prefix > caps[k]) { ok = false; break; }
        }
        if (ok) return lambda;
        for (int i = 0; i < p; ++i)
            lambda[i] = floor_to_grid((lambda[i] + start[i]) / Rational(2));
    }
    return start;
}

inline std::uint64_t lambda_hash(const std::vector<Rational>& lambda) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const Rational& r : lambda) {
        h ^= (std::uint64_t)r.num() * 1099511628211ULL;
        h ^= (std::uint64_t)r.den() * 387411839ULL;
        h *= 1099511628211ULL;
    }
    return h;
}

/// The vertex of Lambda comonotone with y: assign w_1 to the largest
/// component of y, w_2 to the second largest, and so on (stable on ties).
/// Feasible by construction for non-increasing weights; for arbitrary
/// weights it must still pass lambda_feasible before use.
inline std::vector<Rational> comonotone_vertex(const ImageVector& y, const OwaWeights& w) {
    const int p = (int)y.size();
    std::vector<int> idx(p);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return y[a] > y[b]; });
    std::vector<Rational> lambda(p);
    for (int i = 0; i < p; ++i) lambda[idx[i]] = w.w[i];
    return lambda;
}

} // namespace detail

/// Objective-function relaxation bound: max over feasible lambda of
/// z(lambda) = min over trees of lambda . f(T), maximized by projected
/// subgradient ascent. Every accepted value is z at a lambda that passed the
/// exact feasibility test, so the result is a valid lower bound regardless of
/// how far the ascent got. The iterate walks in floating point; every
/// evaluation is exact. In addition to the subgradient steps, the vertex of
/// Lambda comonotone with the best witness found so far is evaluated, which
/// reaches the exact maximum on instances where that witness is optimal.
inline std::optional<BoundResult> bound_objective_relaxation(
    const MultiGraphInstance& inst, const EdgeColoring& coloring, const OwaWeights& w,
    const ObjectiveBoundConfig& cfg = {}, BoundWorkspace* cache = nullptr) {
    if (!validate_coloring(inst, coloring).ok) return std::nullopt;
    const int p = inst.p;
    BoundWorkspace local;
    BoundWorkspace& ws = cache ? *cache : local;

    std::vector<Rational> caps(p);
    Rational acc;
    for (int k = 0; k < p; ++k) {
        acc += w.w[k];
        caps[k] = acc;
    }
    Rational start_c = caps[0];
    for (int k = 1; k < p; ++k) start_c = min(start_c, caps[k] / Rational(k + 1));
    const std::vector<Rational> start(p, start_c);

    BoundResult out;
    bool have_value = false;
    std::unordered_set<std::uint64_t> seen_lambda;
    std::unordered_set<std::uint64_t> seen_witness;
    std::size_t best_witness = SIZE_MAX;

    auto note_witness = [&](const std::vector<EdgeId>& ids) {
        Solution s = make_solution(inst, ids, w);
        std::uint64_t h = 1469598103934665603ULL;
        for (EdgeId e : s.edge_ids) h = (h ^ (std::uint64_t)(e + 1)) * 1099511628211ULL;
        if (!seen_witness.insert(h).second) return;
        if (best_witness == SIZE_MAX ||
            s.owa_value < out.witnesses[best_witness].owa_value)
            best_witness = out.witnesses.size();
        out.witnesses.push_back(std::move(s));
    };

    // Scratch order carried between the subgradient iterates: consecutive
    // lambdas differ by one small step, so an insertion-sort refresh costs
    // about one exact comparison per edge.
    ScalarWeights step_weights;
    std::vector<EdgeId> step_order;

    // evaluates z at an exactly feasible lambda; returns the minimizing image.
    // the well-known lambdas (start point, comonotone vertices) are memoized
    // in the workspace since they recur at every node of a search; transient
    // subgradient iterates refresh the carried order instead.
    auto evaluate = [&](const std::vector<Rational>& lambda,
                        bool transient) -> ImageVector {
        const ScalarWeights* swp = nullptr;
        const std::vector<EdgeId>* orderp = nullptr;
        if (transient && !step_order.empty()) {
            step_weights = scalarize(inst, lambda);
            detail::resort_weight_order(step_weights, step_order);
            swp = &step_weights;
            orderp = &step_order;
        } else {
            std::uint64_t key = detail::lambda_hash(lambda);
            auto it = ws.lambda_orders.find(key);
            if (it == ws.lambda_orders.end()) {
                ScalarWeights sw = scalarize(inst, lambda);
                std::vector<EdgeId> order = detail::weight_order(inst, sw);
                it = ws.lambda_orders
                         .emplace(key, std::make_pair(std::move(sw), std::move(order)))
                         .first;
            }
            if (step_order.empty()) step_order = it->second.second;
            swp = &it->second.first;
            orderp = &it->second.second;
        }
        auto r = detail::mst_ordered(inst, *swp, coloring, *orderp);
        if (!r) throw std::logic_error("validated coloring must admit a tree");
        if (!have_value || r->total > out.value) {
            have_value = true;
            out.value = r->total;
            out.lambda = lambda;
        }
        ImageVector y = tree_image(inst, r->edge_ids);
        note_witness(r->edge_ids);
        return y;
    };

    // The cutoff stop is suppressed while the comonotone vertex of the best
    // witness is still unevaluated: that one deterministic step usually lands
    // on the converged bound, and callers record the stopped value.
    auto polish_pending = [&]() {
        if (best_witness == SIZE_MAX) return false;
        return !seen_lambda.contains(detail::lambda_hash(
            detail::comonotone_vertex(out.witnesses[best_witness].image, w)));
    };
    auto stop_reached = [&]() {
        if (!cfg.cutoff) return false;
        if (polish_pending()) return false;
        return out.value > *cfg.cutoff || (cfg.stop_on_equal && out.value == *cfg.cutoff);
    };

    // Degenerate polytope (cap_1 == 0 forces lambda == 0): the bound is 0.
    if (caps[0].sign() == 0) {
        std::vector<Rational> zero(p, Rational(0));
        seen_lambda.insert(detail::lambda_hash(zero));
        evaluate(zero, false);
        return out;
    }

    double gamma0 = 0;
    {
        std::int64_t worst = 1;
        for (EdgeId e = 0; e < inst.m(); ++e) worst = std::max(worst, inst.cost_sum(e));
        gamma0 = 1.0 / (double)worst;
    }

    std::vector<double> iterate(p);
    for (int i = 0; i < p; ++i) iterate[i] = start[i].to_double();
    std::vector<double> caps_d(p);
    for (int i = 0; i < p; ++i) caps_d[i] = caps[i].to_double();

    ImageVector last_y;
    int stall = 0;
    bool improved_once = false;
    Rational best_before;
    for (int t = 1; t <= cfg.max_iters; ++t) {
        std::vector<Rational> cand;
        bool transient = false;
        if (t == 1) {
            cand = start;
        } else if (best_witness != SIZE_MAX) {
            std::vector<Rational> vertex =
                detail::comonotone_vertex(out.witnesses[best_witness].image, w);
            if (!seen_lambda.contains(detail::lambda_hash(vertex))) {
                if (lambda_feasible(vertex, w)) {
                    cand = std::move(vertex);
                } else {
                    seen_lambda.insert(detail::lambda_hash(vertex));  // don't retry it
                }
            }
        }
        if (cand.empty()) {
            // subgradient step on the float iterate, then exact projection
            double norm = 0;
            for (std::int64_t yi : last_y) norm += (double)yi * (double)yi;
            norm = std::sqrt(std::max(norm, 1.0));
            for (int i = 0; i < p; ++i) iterate[i] += gamma0 / t * (double)last_y[i] / norm;
            // cheap float repair so the iterate does not drift away
            for (int r = 0; r < 4; ++r) {
                std::vector<int> idx(p);
                std::iota(idx.begin(), idx.end(), 0);
                std::sort(idx.begin(), idx.end(),
                          [&](int a, int b) { return iterate[b] < iterate[a]; });
                double prefix = 0;
                bool bad = false;
                for (int k = 0; k < p && !bad; ++k) {
                    if (iterate[idx[k]] < 0) iterate[idx[k]] = 0;
                    prefix += iterate[idx[k]];
                    if (prefix > caps_d[k]) {
                        double cut = (prefix - caps_d[k]) / (k + 1);
                        for (int j = 0; j <= k; ++j) iterate[idx[j]] -= cut;
                        bad = true;
                    }
                }
                if (!bad) break;
            }
            std::vector<Rational> quant(p);
            for (int i = 0; i < p; ++i) {
                double clipped = std::max(iterate[i], 0.0);
                quant[i] = Rational(
                    (std::int64_t)std::floor(clipped * (double)detail::kLambdaGrid),
                    detail::kLambdaGrid);
            }
            cand = detail::project_lambda(std::move(quant), caps, start);
            transient = true;
        }
        std::uint64_t h = detail::lambda_hash(cand);
        if (seen_lambda.insert(h).second) {
            if (!lambda_feasible(cand, w))
                throw std::logic_error("projection produced an infeasible lambda");
            last_y = evaluate(cand, transient);
            if (stop_reached()) break;
        }
        if (!improved_once || out.value > best_before) {
            improved_once = true;
            best_before = out.value;
            stall = 0;
        } else if (++stall >= cfg.stall_limit) {
            break;
        }
    }
    return out;
}

/// Unified entry used by shaving and branch-and-bound.
inline std::optional<BoundResult> compute_bound(const MultiGraphInstance& inst,
                                                const EdgeColoring& coloring,
                                                const OwaWeights& w, BoundMethod method,
                                                const ObjectiveBoundConfig& cfg = {},
                                                BoundWorkspace* cache = nullptr) {
    if (method == BoundMethod::Objective)
        return bound_objective_relaxation(inst, coloring, w, cfg, cache);
    auto ip = ideal_point(inst, coloring, w, cache);
    if (!ip) return std::nullopt;
    BoundResult out;
    if (cache) {
        std::uint64_t key = 1469598103934665603ULL;
        for (std::int64_t v : ip->point.b) key = (key ^ (std::uint64_t)v) * 1099511628211ULL;
        key = (key ^ (std::uint64_t)ip->point.b0) * 1099511628211ULL;
        auto it = cache->image_lp_values.find(key);
        if (it == cache->image_lp_values.end())
            it = cache->image_lp_values.emplace(key, bound_image_relaxation(ip->point, w))
                     .first;
        out.value = it->second;
    } else {
        out.value = bound_image_relaxation(ip->point, w);
    }
    out.witnesses = std::move(ip->witnesses);
    return out;
}

} // namespace owast

#endif // OWAST_BOUNDS_HPP
