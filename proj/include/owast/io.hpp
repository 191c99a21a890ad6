#ifndef OWAST_IO_HPP
#define OWAST_IO_HPP

#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "owast/core.hpp"

namespace owast {

namespace detail {

/// Connectivity over all edges, plain DFS on an adjacency list.
inline bool connected(int n, const std::vector<Edge>& edges) {
    if (n <= 0) return false;
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int nb : adj[v])
            if (!seen[nb]) {
                seen[nb] = 1;
                ++count;
                stack.push_back(nb);
            }
    }
    return count == n;
}

} // namespace detail

/// Validates the instance invariants: simple graph, ids in range, connected,
/// and per-objective totals that fit into 64 bits (no silent wraparound).
inline void validate_instance(const MultiGraphInstance& inst) {
    if (inst.p < 2) throw InputError("instance needs p >= 2 objectives");
    if (inst.n < 2) throw InputError("instance needs n >= 2 vertices");
    std::set<std::pair<int, int>> seen;
    std::vector<__int128> abs_total(inst.p, 0);
    for (const Edge& e : inst.edges) {
        if (e.u < 0 || e.u >= inst.n || e.v < 0 || e.v >= inst.n)
            throw InputError("edge endpoint out of range");
        if (e.u == e.v) throw InputError("self-loop edge");
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second) throw InputError("duplicate edge");
        if ((int)e.cost.size() != inst.p) throw InputError("cost vector length mismatch");
        for (int i = 0; i < inst.p; ++i) {
            std::int64_t c = e.cost[i];
            // negative edge costs would break the weak-duality bound, which
            // needs nonnegative tree images
            if (c < 0) throw InputError("edge costs must be nonnegative");
            abs_total[i] += (__int128)c;
            if (abs_total[i] > INT64_MAX)
                throw InputError("cost totals overflow 64-bit range");
        }
    }
    if (!detail::connected(inst.n, inst.edges))
        throw InputError("graph is not connected");
}

/// Instance text format: first line "p n m", then m lines "u v c1 ... cp"
/// with 1-based vertex ids.
inline MultiGraphInstance parse_instance(std::istream& in) {
    MultiGraphInstance inst;
    int m = 0;
    if (!(in >> inst.p >> inst.n >> m))
        throw InputError("instance header must be 'p n m'");
    if (m < 0) throw InputError("negative edge count");
    inst.edges.reserve(m);
    for (int k = 0; k < m; ++k) {
        Edge e;
        int u1 = 0, v1 = 0;
        if (!(in >> u1 >> v1)) throw InputError("truncated edge line");
        e.u = u1 - 1;
        e.v = v1 - 1;
        e.cost.resize(inst.p);
        for (int i = 0; i < inst.p; ++i)
            if (!(in >> e.cost[i])) throw InputError("truncated cost vector");
        inst.edges.push_back(std::move(e));
    }
    validate_instance(inst);
    return inst;
}

inline void serialize_instance(const MultiGraphInstance& inst, std::ostream& out) {
    out << inst.p << ' ' << inst.n << ' ' << inst.m() << '\n';
    for (const Edge& e : inst.edges) {
        out << e.u + 1 << ' ' << e.v + 1;
        for (std::int64_t c : e.cost) out << ' ' << c;
        out << '\n';
    }
}

/// Weight file: one decimal per line.
inline OwaWeights parse_weights(std::istream& in) {
    std::vector<Rational> w;
    std::string line;
    while (std::getline(in, line)) {
        std::size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        std::size_t b = line.find_last_not_of(" \t\r");
        w.push_back(Rational::from_decimal(line.substr(a, b - a + 1)));
    }
    return classify_weights(std::move(w));
}

inline void serialize_weights(const OwaWeights& w, std::ostream& out) {
    for (const Rational& wi : w.w) out << wi.to_string() << '\n';
}

/// splitmix64; deterministic across platforms so that identical seeds give
/// byte-identical instances.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// Uniform integer in [lo, hi].
    std::int64_t range(std::int64_t lo, std::int64_t hi) {
        return lo + (std::int64_t)(next() % (std::uint64_t)(hi - lo + 1));
    }

private:
    std::uint64_t state_;
};

/// Random clique with cost components uniform in [1,100].
/// density_spec is reserved for future sparse modes; only "clique" is valid.
inline MultiGraphInstance generate_instance(int n, int p, std::uint64_t seed,
                                            const std::string& density_spec = "clique") {
    if (n < 2 || p < 2) throw InputError("generate: need n >= 2 and p >= 2");
    if (density_spec != "clique")
        throw InputError("generate: unsupported density '" + density_spec + "'");
    SplitMix64 rng(seed);
    MultiGraphInstance inst;
    inst.n = n;
    inst.p = p;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            Edge e;
            e.u = u;
            e.v = v;
            e.cost.resize(p);
            for (int i = 0; i < p; ++i) e.cost[i] = rng.range(1, 100);
            inst.edges.push_back(std::move(e));
        }
    return inst;
}

/// Bundled weight presets used by the benchmark harness.
inline OwaWeights weight_preset(const std::string& name) {
    auto dec = [](std::initializer_list<const char*> xs) {
        std::vector<Rational> w;
        for (const char* x : xs) w.push_back(Rational::from_decimal(x));
        return classify_weights(std::move(w));
    };
    if (name == "w3a") return dec({"0.6", "0.3", "0.1"});
    if (name == "w3b") return dec({"0.4", "0.35", "0.25"});
    if (name == "w5") return dec({"0.5", "0.3", "0.1", "0.06", "0.04"});
    if (name == "w10")
        return dec({"0.25", "0.2", "0.15", "0.1", "0.09", "0.08", "0.06", "0.04",
                    "0.02", "0.01"});
    throw InputError("unknown weight preset '" + name + "'");
}

/// Uniform rank weights 1/p (exact, even when 1/p has no finite decimal).
inline OwaWeights uniform_weights(int p) {
    return classify_weights(std::vector<Rational>(p, Rational(1, p)));
}

} // namespace owast

#endif // OWAST_IO_HPP
