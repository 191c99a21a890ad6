#ifndef OWAST_MIP_HPP
#define OWAST_MIP_HPP

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "owast/core.hpp"
#include "owast/mst.hpp"

namespace owast {

/// Flow-based model of the OWA-optimal spanning tree problem with the OWA
/// objective linearized through the dual of the Lorenz-component programs.
/// Valid only for strictly decreasing weights (every objective coefficient
/// w_i - w_{i+1} must be positive).
///
/// Variables: r_i (free) and d_i_j >= 0 for the Lorenz duals, binary x_E{id}
/// per edge, flows f_u_v >= 0 per arc. With m edges, n vertices and p
/// objectives the model has p^2+n+2m+1 constraints and p^2+p+3m variables.
///
/// Note on the cardinality row: a spanning tree on n vertices selects
/// exactly n-1 edges, so the model carries sum(x) = n-1. Some published
/// flow formulations of the MST polytope print this row with right-hand
/// side 1, which is infeasible against the flow coupling whenever n > 2.
struct MipModel {
    struct Term {
        std::string var;
        Rational coeff;
    };
    struct Row {
        std::string name;
        std::vector<Term> terms;
        char rel = 'G';  // 'G' >=, 'L' <=, 'E' =
        Rational rhs;
    };

    std::string name = "owa_spanning_tree";
    std::vector<std::string> variables;    // registry, emission order
    std::vector<Term> objective;           // minimized
    std::vector<Row> rows;
    std::vector<std::string> free_vars;    // r_i
    std::vector<std::pair<std::string, int>> fixings;  // coloring: var = 0/1
    std::vector<std::string> binaries;     // x_E{id}

    std::size_t constraint_count() const { return rows.size(); }
    std::size_t variable_count() const { return variables.size(); }
};

namespace detail {

inline std::string xvar(EdgeId e) { return "x_E" + std::to_string(e + 1); }
inline std::string fvar(Vertex a, Vertex b) {
    return "f_" + std::to_string(a + 1) + "_" + std::to_string(b + 1);
}
inline std::string rvar(int i) { return "r_" + std::to_string(i + 1); }
inline std::string dvar(int i, int j) {
    return "d_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

} // namespace detail

inline MipModel build_mip(const MultiGraphInstance& inst, const EdgeColoring& coloring,
                          const OwaWeights& w) {
    if (w.cls != WeightClass::StrictlyDecreasing)
        throw UsageError("the MIP formulation requires strictly decreasing weights");
    if ((int)coloring.size() != inst.m())
        throw InputError("build_mip: coloring length mismatch");
    const int p = inst.p, n = inst.n, m = inst.m();
    MipModel model;

    for (int i = 0; i < p; ++i) model.variables.push_back(detail::rvar(i));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) model.variables.push_back(detail::dvar(i, j));
    for (EdgeId e = 0; e < m; ++e) model.variables.push_back(detail::xvar(e));
    for (EdgeId e = 0; e < m; ++e) {
        model.variables.push_back(detail::fvar(inst.edges[e].u, inst.edges[e].v));
        model.variables.push_back(detail::fvar(inst.edges[e].v, inst.edges[e].u));
    }

    // objective: sum_i (w_i - w_{i+1}) (i r_i + sum_j d_i_j), w_{p+1} = 0
    for (int i = 0; i < p; ++i) {
        Rational diff = w.w[i] - (i + 1 < p ? w.w[i + 1] : Rational(0));
        model.objective.push_back({detail::rvar(i), diff * Rational(i + 1)});
        for (int j = 0; j < p; ++j)
            model.objective.push_back({detail::dvar(i, j), diff});
    }

    // Lorenz dual rows: r_i + d_i_j - sum_e v_j^e x_e >= 0, the substituted
    // form of r_i + d_i_j >= y_j.
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
            MipModel::Row row;
            row.name = "lorenz_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
            row.terms.push_back({detail::rvar(i), Rational(1)});
            row.terms.push_back({detail::dvar(i, j), Rational(1)});
            for (EdgeId e = 0; e < m; ++e)
                row.terms.push_back({detail::xvar(e), Rational(-inst.edges[e].cost[j])});
            row.rel = 'G';
            row.rhs = Rational(0);
            model.rows.push_back(std::move(row));
        }

    // flow conservation: vertex 1 emits n-1 units, every other vertex absorbs 1
    for (Vertex v = 0; v < n; ++v) {
        MipModel::Row row;
        row.name = "flow_" + std::to_string(v + 1);
        for (EdgeId e = 0; e < m; ++e) {
            if (inst.edges[e].u == v || inst.edges[e].v == v) {
                Vertex other = inst.edges[e].u == v ? inst.edges[e].v : inst.edges[e].u;
                row.terms.push_back({detail::fvar(v, other), Rational(1)});
                row.terms.push_back({detail::fvar(other, v), Rational(-1)});
            }
        }
        row.rel = 'E';
        row.rhs = v == 0 ? Rational(n - 1) : Rational(-1);
        model.rows.push_back(std::move(row));
    }

    // capacity coupling in both arc directions
    for (EdgeId e = 0; e < m; ++e) {
        for (int dir = 0; dir < 2; ++dir) {
            Vertex a = dir == 0 ? inst.edges[e].u : inst.edges[e].v;
            Vertex b = dir == 0 ? inst.edges[e].v : inst.edges[e].u;
            MipModel::Row row;
            row.name = "cap_E" + std::to_string(e + 1) + (dir == 0 ? "_f" : "_r");
            row.terms.push_back({detail::fvar(a, b), Rational(1)});
            row.terms.push_back({detail::xvar(e), Rational(-(n - 1))});
            row.rel = 'L';
            row.rhs = Rational(0);
            model.rows.push_back(std::move(row));
        }
    }

    // cardinality: a spanning tree has exactly n-1 edges
    {
        MipModel::Row row;
        row.name = "card";
        for (EdgeId e = 0; e < m; ++e) row.terms.push_back({detail::xvar(e), Rational(1)});
        row.rel = 'E';
        row.rhs = Rational(n - 1);
        model.rows.push_back(std::move(row));
    }

    for (int i = 0; i < p; ++i) model.free_vars.push_back(detail::rvar(i));
    for (EdgeId e = 0; e < m; ++e) {
        if (coloring[e] == EdgeColor::Blue) model.fixings.push_back({detail::xvar(e), 1});
        if (coloring[e] == EdgeColor::Red) model.fixings.push_back({detail::xvar(e), 0});
    }
    for (EdgeId e = 0; e < m; ++e) model.binaries.push_back(detail::xvar(e));
    return model;
}

namespace detail {

inline void write_terms(std::ostream& out, const std::vector<MipModel::Term>& terms) {
    bool first = true;
    for (const auto& t : terms) {
        if (t.coeff.is_zero()) continue;
        Rational mag = t.coeff.abs();
        if (first) {
            if (t.coeff.sign() < 0) out << "- ";
            first = false;
        } else {
            out << (t.coeff.sign() < 0 ? " - " : " + ");
        }
        if (mag != Rational(1)) out << mag.to_decimal_string() << ' ';
        out << t.var;
    }
    if (first) out << "0";
}

} // namespace detail

/// Deterministic LP-format serialization; identical inputs give identical
/// bytes.
inline void write_lp(const MipModel& model, std::ostream& out) {
    out << "\\Problem name: " << model.name << "\n";
    out << "Minimize\n obj: ";
    detail::write_terms(out, model.objective);
    out << "\nSubject To\n";
    for (const auto& row : model.rows) {
        out << ' ' << row.name << ": ";
        detail::write_terms(out, row.terms);
        out << (row.rel == 'G' ? " >= " : row.rel == 'L' ? " <= " : " = ")
            << row.rhs.to_decimal_string() << "\n";
    }
    out << "Bounds\n";
    for (const auto& v : model.free_vars) out << ' ' << v << " free\n";
    for (const auto& [v, val] : model.fixings) out << ' ' << v << " = " << val << "\n";
    out << "Binaries\n";
    for (const auto& v : model.binaries) out << ' ' << v << "\n";
    out << "End\n";
}

inline std::string write_lp_string(const MipModel& model) {
    std::ostringstream os;
    write_lp(model, os);
    return os.str();
}

/// Reads a "name value" assignment file, reconstructs the edge set from the
/// x variables (rounded at 0.5), validates it is a spanning tree and
/// recomputes image and OWA value from the instance. The solver's objective
/// number is never trusted.
inline Solution read_solution(const MultiGraphInstance& inst, const OwaWeights& w,
                              std::istream& in) {
    std::vector<EdgeId> selected;
    std::string name;
    double value = 0;
    while (in >> name >> value) {
        if (name.rfind("x_E", 0) != 0) continue;
        int id = 0;
        try {
            id = std::stoi(name.substr(3));
        } catch (const std::exception&) {
            throw InputError("malformed variable name '" + name + "'");
        }
        if (id < 1 || id > inst.m())
            throw InputError("edge variable out of range: " + name);
        if (value >= 0.5) selected.push_back(id - 1);
    }
    if ((int)selected.size() != inst.n - 1)
        throw InputError("assignment selects " + std::to_string(selected.size()) +
                         " edges, expected " + std::to_string(inst.n - 1));
    UnionFind uf(inst.n);
    for (EdgeId e : selected)
        if (!uf.unite(inst.edges[e].u, inst.edges[e].v))
            throw InputError("assignment contains a cycle");
    return make_solution(inst, selected, w);
}

} // namespace owast

#endif // OWAST_MIP_HPP
