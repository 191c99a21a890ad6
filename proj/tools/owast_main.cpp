// Command-line front end for the OWA-optimal spanning tree toolkit.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "owast/bounds.hpp"
#include "owast/core.hpp"
#include "owast/io.hpp"
#include "owast/mip.hpp"
#include "owast/mst.hpp"
#include "owast/oracle.hpp"
#include "owast/preprocess.hpp"
#include "owast/search.hpp"

namespace {

using namespace owast;
using nlohmann::json;

constexpr int kStatsSchemaVersion = 1;

struct WeightChoice {
    std::string weights_file;
    std::string hurwicz;
    std::string preset;

    void add_flags(CLI::App* cmd) {
        auto* a = cmd->add_option("--weights", weights_file,
                                  "weight file, one decimal per line");
        auto* b = cmd->add_option("--hurwicz", hurwicz,
                                  "alpha in [0,1] for the Hurwicz criterion");
        auto* c = cmd->add_option("--preset", preset,
                                  "bundled weights: w3a, w3b, w5, w10");
        a->excludes(b)->excludes(c);
        b->excludes(c);
    }

    OwaWeights resolve(int p) const {
        if (!weights_file.empty()) {
            std::ifstream in(weights_file);
            if (!in) throw InputError("cannot open weight file " + weights_file);
            OwaWeights w = parse_weights(in);
            if (w.p() != p)
                throw InputError("weight count " + std::to_string(w.p()) +
                                 " does not match instance p=" + std::to_string(p));
            return w;
        }
        if (!hurwicz.empty()) return hurwicz_weights(Rational::from_decimal(hurwicz), p);
        if (!preset.empty()) {
            OwaWeights w = weight_preset(preset);
            if (w.p() != p)
                throw InputError("preset " + preset + " has p=" + std::to_string(w.p()) +
                                 ", instance has p=" + std::to_string(p));
            return w;
        }
        throw InputError("one of --weights/--hurwicz/--preset is required");
    }
};

MultiGraphInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open instance file " + path);
    return parse_instance(in);
}

std::string value_string(const Rational& r) {
    std::string s = r.to_string();
    if (!r.has_finite_decimal()) s += " (= " + std::to_string(r.to_double()) + ")";
    return s;
}

void print_solution(const Solution& s) {
    std::cout << "value " << value_string(s.owa_value) << "\n";
    std::cout << "image";
    for (auto v : s.image) std::cout << ' ' << v;
    std::cout << "\nedges";
    for (EdgeId e : s.edge_ids) std::cout << ' ' << e + 1;
    std::cout << "\n";
}

json stats_json(const SearchStats& st, bool proven) {
    return json{{"schema_version", kStatsSchemaVersion},
                {"nodes_expanded", st.nodes_expanded},
                {"bounds_computed", st.bounds_computed},
                {"edges_shaved_blue", st.edges_shaved_blue},
                {"edges_shaved_red", st.edges_shaved_red},
                {"incumbent_updates", st.incumbent_updates},
                {"wall_time_sec", st.wall_time_sec},
                {"proven", proven}};
}

void print_coloring(const MultiGraphInstance& inst, const EdgeColoring& c) {
    for (EdgeId e = 0; e < inst.m(); ++e)
        std::cout << e + 1 << ' ' << to_string(c[e]) << "\n";
}

int count_color(const EdgeColoring& c, EdgeColor col) {
    int n = 0;
    for (EdgeColor s : c) n += s == col;
    return n;
}

// ---- subcommand bodies ----------------------------------------------------

int run_generate(int n, int p, std::uint64_t seed, const std::string& density,
                 const std::string& out_path) {
    MultiGraphInstance inst = generate_instance(n, p, seed, density);
    if (out_path.empty()) {
        serialize_instance(inst, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write " + out_path);
        serialize_instance(inst, out);
    }
    return 0;
}

int run_solve(const std::string& instance_path, const WeightChoice& wc,
              const std::string& bound_name, bool no_preprocess, bool no_shave,
              int k_seed, const std::string& stats_path, const std::string& mip_path,
              std::optional<double> time_limit) {
    MultiGraphInstance inst = load_instance(instance_path);
    OwaWeights w = wc.resolve(inst.p);

    SearchConfig cfg;
    if (bound_name == "image") cfg.bound_method = BoundMethod::Image;
    else if (bound_name == "objective") cfg.bound_method = BoundMethod::Objective;
    else if (!bound_name.empty()) throw InputError("unknown bound method " + bound_name);
    cfg.use_preprocess = !no_preprocess;
    cfg.use_shave = !no_shave;
    cfg.k_seed = k_seed;
    cfg.time_limit_sec = time_limit;

    if (!mip_path.empty()) {
        // coloration phase only, then hand the reduced model to an external
        // MIP solver; resolve the assignment later with read-solution
        EdgeColoring coloring = empty_coloring(inst);
        if (w.monotone() && cfg.use_preprocess) coloring = preprocess(inst, w);
        Solution inc = seed_incumbent(inst, w,
                                      cfg.k_seed > 0 ? cfg.k_seed : default_k_seed(inst.n));
        if (cfg.use_shave) {
            ShaveResult sh = shave(inst, coloring, w, inc, cfg);
            coloring = std::move(sh.coloring);
            inc = std::move(sh.incumbent);
        }
        MipModel model = build_mip(inst, coloring, w);
        std::ofstream out(mip_path);
        if (!out) throw InputError("cannot write " + mip_path);
        write_lp(model, out);
        std::cout << "exported " << mip_path << " (" << model.constraint_count()
                  << " constraints, " << model.variable_count() << " variables)\n";
        std::cout << "incumbent ";
        print_solution(inc);
        return 0;
    }

    SolveResult res = solve(inst, w, cfg);
    print_solution(res.best);
    if (!res.proven) std::cout << "status limit-reached (value not proven optimal)\n";
    if (!stats_path.empty()) {
        json j = stats_json(res.stats, res.proven);
        j["value"] = res.best.owa_value.to_string();
        std::ofstream out(stats_path);
        if (!out) throw InputError("cannot write " + stats_path);
        out << j.dump(2) << "\n";
    }
    return 0;
}

int run_preprocess(const std::string& instance_path, const WeightChoice& wc) {
    MultiGraphInstance inst = load_instance(instance_path);
    OwaWeights w = wc.resolve(inst.p);
    print_coloring(inst, preprocess(inst, w));
    return 0;
}

int run_shave(const std::string& instance_path, const WeightChoice& wc,
              const std::string& bound_name, bool no_preprocess, int k_seed) {
    MultiGraphInstance inst = load_instance(instance_path);
    OwaWeights w = wc.resolve(inst.p);
    SearchConfig cfg;
    if (bound_name == "image") cfg.bound_method = BoundMethod::Image;
    else if (bound_name == "objective") cfg.bound_method = BoundMethod::Objective;
    else if (!bound_name.empty()) throw InputError("unknown bound method " + bound_name);

    EdgeColoring coloring = empty_coloring(inst);
    if (w.monotone() && !no_preprocess) coloring = preprocess(inst, w);
    Solution inc =
        seed_incumbent(inst, w, k_seed > 0 ? k_seed : default_k_seed(inst.n));
    ShaveResult sh = shave(inst, coloring, w, inc, cfg);
    print_coloring(inst, sh.coloring);
    std::cout << "incumbent ";
    print_solution(sh.incumbent);
    return 0;
}

int run_bound(const std::string& instance_path, const WeightChoice& wc,
              const std::string& method) {
    MultiGraphInstance inst = load_instance(instance_path);
    OwaWeights w = wc.resolve(inst.p);
    EdgeColoring coloring = empty_coloring(inst);
    if (method == "image") {
        auto ip = ideal_point(inst, coloring, w);
        if (!ip) throw InputError("infeasible instance");
        std::cout << "ideal-point";
        for (auto b : ip->point.b) std::cout << ' ' << b;
        std::cout << " | sum " << ip->point.b0 << "\n";
        std::cout << "bound " << value_string(bound_image_relaxation(ip->point, w))
                  << "\n";
        for (const Solution& s : ip->witnesses)
            std::cout << "witness " << value_string(s.owa_value) << "\n";
    } else if (method == "objective") {
        auto r = bound_objective_relaxation(inst, coloring, w);
        if (!r) throw InputError("infeasible instance");
        std::cout << "bound " << value_string(r->value) << "\nlambda";
        for (const Rational& l : r->lambda) std::cout << ' ' << l.to_string();
        std::cout << "\n";
        for (const Solution& s : r->witnesses)
            std::cout << "witness " << value_string(s.owa_value) << "\n";
    } else {
        throw InputError("unknown bound method " + method);
    }
    return 0;
}

int run_export_mip(const std::string& instance_path, const WeightChoice& wc,
                   const std::string& out_path, bool with_coloration, int k_seed) {
    MultiGraphInstance inst = load_instance(instance_path);
    OwaWeights w = wc.resolve(inst.p);
    EdgeColoring coloring = empty_coloring(inst);
    if (with_coloration) {
        coloring = preprocess(inst, w);
        Solution inc =
            seed_incumbent(inst, w, k_seed > 0 ? k_seed : default_k_seed(inst.n));
        SearchConfig cfg;
        coloring = shave(inst, coloring, w, inc, cfg).coloring;
    }
    MipModel model = build_mip(inst, coloring, w);
    if (out_path.empty()) {
        write_lp(model, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw InputError("cannot write " + out_path);
        write_lp(model, out);
        std::cout << "exported " << out_path << " (" << model.constraint_count()
                  << " constraints, " << model.variable_count() << " variables)\n";
    }
    return 0;
}

int run_read_solution(const std::string& instance_path, const WeightChoice& wc,
                      const std::string& assignment_path) {
    MultiGraphInstance inst = load_instance(instance_path);
    OwaWeights w = wc.resolve(inst.p);
    std::ifstream in(assignment_path);
    if (!in) throw InputError("cannot open assignment file " + assignment_path);
    print_solution(read_solution(inst, w, in));
    return 0;
}

int run_oracle(const std::string& instance_path, const WeightChoice& wc,
               bool count_only) {
    MultiGraphInstance inst = load_instance(instance_path);
    std::cout << "trees " << spanning_tree_count(inst) << "\n";
    if (count_only) return 0;
    OwaWeights w = wc.resolve(inst.p);
    auto best = brute_force_optimum(inst, w);
    if (!best) throw InputError("instance admits no spanning tree");
    print_solution(*best);
    return 0;
}

int run_bench(std::vector<int> ns, std::vector<int> ps, std::string preset,
              std::string hurwicz, int runs, std::uint64_t seed, double time_limit,
              const std::string& bound_name, const std::string& json_path,
              bool no_preprocess, bool no_shave) {
    std::vector<json> cells;
    SearchConfig cfg;
    if (bound_name == "image") cfg.bound_method = BoundMethod::Image;
    else if (bound_name == "objective") cfg.bound_method = BoundMethod::Objective;
    cfg.time_limit_sec = time_limit;
    cfg.use_preprocess = !no_preprocess;
    cfg.use_shave = !no_shave;

    std::printf("%-6s %-4s %-12s %8s %8s %8s %10s %10s %8s\n", "n", "p", "weights",
                "mean_s", "min_s", "max_s", "pp(b-r)", "sh(b-r)", "verified");
    for (int n : ns)
        for (int p : ps) {
            OwaWeights w = !hurwicz.empty()
                               ? hurwicz_weights(Rational::from_decimal(hurwicz), p)
                               : weight_preset(preset);
            if (w.p() != p) continue;  // preset does not fit this p
            double tmin = 0, tmax = 0, tsum = 0;
            double pp_b = 0, pp_r = 0, sh_b = 0, sh_r = 0;
            int verified = 0, verifiable = 0;
            for (int r = 0; r < runs; ++r) {
                std::uint64_t s = seed + 1000003ULL * r + 17ULL * n + (std::uint64_t)p;
                MultiGraphInstance inst = generate_instance(n, p, s);
                auto t0 = std::chrono::steady_clock::now();
                SolveResult res = solve(inst, w, cfg);
                double el =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                tsum += el;
                if (r == 0 || el < tmin) tmin = el;
                if (r == 0 || el > tmax) tmax = el;
                if (res.preprocess_coloring) {
                    pp_b += count_color(*res.preprocess_coloring, EdgeColor::Blue);
                    pp_r += count_color(*res.preprocess_coloring, EdgeColor::Red);
                }
                sh_b += count_color(res.final_coloring, EdgeColor::Blue);
                sh_r += count_color(res.final_coloring, EdgeColor::Red);
                if (n <= 8) {
                    ++verifiable;
                    auto truth = brute_force_optimum(inst, w);
                    if (truth && truth->owa_value == res.best.owa_value) ++verified;
                }
            }
            std::string wname = !hurwicz.empty() ? "hurwicz" + hurwicz : preset;
            std::printf("%-6d %-4d %-12s %8.3f %8.3f %8.3f %5.1f-%-5.1f %5.1f-%-5.1f %5d/%-3d\n",
                        n, p, wname.c_str(), tsum / runs, tmin, tmax, pp_b / runs,
                        pp_r / runs, sh_b / runs, sh_r / runs, verified, verifiable);
            cells.push_back(json{{"n", n},
                                 {"p", p},
                                 {"weights", wname},
                                 {"runs", runs},
                                 {"mean_sec", tsum / runs},
                                 {"min_sec", tmin},
                                 {"max_sec", tmax},
                                 {"pp_blue_mean", pp_b / runs},
                                 {"pp_red_mean", pp_r / runs},
                                 {"shave_blue_mean", sh_b / runs},
                                 {"shave_red_mean", sh_r / runs},
                                 {"oracle_verified", verified},
                                 {"oracle_verifiable", verifiable}});
        }
    if (!json_path.empty()) {
        json out{{"schema_version", kStatsSchemaVersion}, {"cells", cells}};
        std::ofstream f(json_path);
        if (!f) throw InputError("cannot write " + json_path);
        f << out.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact OWA-optimal spanning tree solver"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a random clique instance");
    int gn = 10, gp = 3;
    std::uint64_t gseed = 1;
    std::string gdensity = "clique", gout;
    gen->add_option("--n", gn, "vertex count")->required();
    gen->add_option("--p", gp, "objective count")->required();
    gen->add_option("--seed", gseed, "PRNG seed");
    gen->add_option("--density", gdensity, "graph density (only 'clique')");
    gen->add_option("-o,--output", gout, "output file (default stdout)");

    // solve
    auto* sv = app.add_subcommand("solve", "find an OWA-optimal spanning tree");
    std::string s_instance, s_bound, s_stats, s_mip;
    WeightChoice s_w;
    bool s_nopp = false, s_nosh = false;
    int s_kseed = 0;
    std::uint64_t s_seed = 0;
    std::optional<double> s_tlimit;
    double s_tlimit_raw = 0;
    sv->add_option("instance", s_instance, "instance file")->required();
    s_w.add_flags(sv);
    sv->add_option("--bound", s_bound, "lower bound: image | objective");
    sv->add_flag("--no-preprocess", s_nopp, "skip the preprocessing pass");
    sv->add_flag("--no-shave", s_nosh, "skip the shaving pass");
    sv->add_option("--k-seed", s_kseed, "k for k-best incumbent seeding");
    sv->add_option("--seed", s_seed, "reserved; the solver itself is deterministic");
    auto* tl = sv->add_option("--time-limit", s_tlimit_raw, "seconds before giving up");
    sv->add_option("--stats-json", s_stats, "write run statistics as JSON");
    sv->add_option("--export-mip", s_mip,
                   "run the coloration phase, then write the LP model instead of "
                   "solving");

    // preprocess
    auto* pp = app.add_subcommand("preprocess", "edge coloring from the optimality "
                                                "conditions (monotone weights)");
    std::string p_instance;
    WeightChoice p_w;
    pp->add_option("instance", p_instance)->required();
    p_w.add_flags(pp);

    // shave
    auto* sh = app.add_subcommand("shave", "bound-driven edge fixing");
    std::string h_instance, h_bound;
    WeightChoice h_w;
    bool h_nopp = false;
    int h_kseed = 0;
    sh->add_option("instance", h_instance)->required();
    h_w.add_flags(sh);
    sh->add_option("--bound", h_bound, "lower bound: image | objective");
    sh->add_flag("--no-preprocess", h_nopp);
    sh->add_option("--k-seed", h_kseed);

    // bound
    auto* bd = app.add_subcommand("bound", "lower bound on the optimal OWA value");
    std::string b_instance, b_method = "image";
    WeightChoice b_w;
    bd->add_option("instance", b_instance)->required();
    b_w.add_flags(bd);
    bd->add_option("--method", b_method, "image | objective")->required();

    // export-mip
    auto* ex = app.add_subcommand("export-mip", "write the LP-format MIP model");
    std::string e_instance, e_out;
    WeightChoice e_w;
    bool e_color = false;
    int e_kseed = 0;
    ex->add_option("instance", e_instance)->required();
    e_w.add_flags(ex);
    ex->add_option("-o,--output", e_out, "output file (default stdout)");
    ex->add_flag("--with-coloration", e_color,
                 "preprocess and shave before emitting the model");
    ex->add_option("--k-seed", e_kseed);

    // read-solution
    auto* rs = app.add_subcommand("read-solution",
                                  "validate a MIP assignment and recompute its value");
    std::string r_instance, r_assign;
    WeightChoice r_w;
    rs->add_option("instance", r_instance)->required();
    r_w.add_flags(rs);
    rs->add_option("assignment", r_assign, "file of 'name value' lines")->required();

    // oracle
    auto* oc = app.add_subcommand("oracle", "exhaustive enumeration (small n)");
    std::string o_instance;
    WeightChoice o_w;
    bool o_count = false;
    oc->add_option("instance", o_instance)->required();
    o_w.add_flags(oc);
    oc->add_flag("--count-only", o_count, "only count spanning trees");

    // bench
    auto* bn = app.add_subcommand("bench", "desk-scale benchmark matrix");
    std::vector<int> n_list{5, 6, 7, 8};
    std::vector<int> p_list{3};
    std::string bn_preset = "w3a", bn_hurwicz, bn_bound, bn_json;
    int bn_runs = 30;
    std::uint64_t bn_seed = 1;
    double bn_tlimit = 60.0;
    bn->add_option("--n-list", n_list, "vertex counts");
    bn->add_option("--p-list", p_list, "objective counts");
    bn->add_option("--preset", bn_preset, "weight preset per cell");
    bn->add_option("--hurwicz", bn_hurwicz, "use Hurwicz alpha instead of a preset");
    bn->add_option("--bound", bn_bound, "image | objective");
    bn->add_option("--runs", bn_runs, "instances per cell");
    bn->add_option("--seed", bn_seed, "base seed");
    bn->add_option("--time-limit", bn_tlimit, "per-instance limit in seconds");
    bn->add_option("--json", bn_json, "also write the table as JSON");
    bool bn_nopp = false, bn_nosh = false;
    bn->add_flag("--no-preprocess", bn_nopp, "skip preprocessing in every cell");
    bn->add_flag("--no-shave", bn_nosh, "skip shaving in every cell");

    try {
        app.parse(argc, argv);
        if (*tl) s_tlimit = s_tlimit_raw;
        if (gen->parsed()) return run_generate(gn, gp, gseed, gdensity, gout);
        if (sv->parsed())
            return run_solve(s_instance, s_w, s_bound, s_nopp, s_nosh, s_kseed, s_stats,
                             s_mip, s_tlimit);
        if (pp->parsed()) return run_preprocess(p_instance, p_w);
        if (sh->parsed()) return run_shave(h_instance, h_w, h_bound, h_nopp, h_kseed);
        if (bd->parsed()) return run_bound(b_instance, b_w, b_method);
        if (ex->parsed()) return run_export_mip(e_instance, e_w, e_out, e_color, e_kseed);
        if (rs->parsed()) return run_read_solution(r_instance, r_w, r_assign);
        if (oc->parsed()) return run_oracle(o_instance, o_w, o_count);
        if (bn->parsed())
            return run_bench(n_list, p_list, bn_preset, bn_hurwicz, bn_runs, bn_seed,
                             bn_tlimit, bn_bound, bn_json, bn_nopp, bn_nosh);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
