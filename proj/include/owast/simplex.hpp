#ifndef OWAST_SIMPLEX_HPP
#define OWAST_SIMPLEX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "owast/rational.hpp"

namespace owast {

/// min c.x subject to rows "a.x (rel) b", x >= 0.
struct LinearProgram {
    enum Rel { LessEq, Eq, GreaterEq };
    struct Row {
        std::vector<Rational> a;
        Rel rel = LessEq;
        Rational b;
    };
    std::vector<Rational> c;
    std::vector<Row> rows;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    Rational value;
    std::vector<Rational> x;
};

/// Dense two-phase primal simplex over exact rationals with Bland's rule.
/// Intended for the tiny LPs this project needs (a handful of variables);
/// no effort is spent on sparsity or numerics.
class Simplex {
public:
    static LpSolution solve(const LinearProgram& lp) {
        Simplex s(lp);
        return s.run();
    }

private:
    explicit Simplex(const LinearProgram& lp) : lp_(lp) {}

    LpSolution run() {
        const std::size_t n = lp_.c.size();
        const std::size_t m = lp_.rows.size();

        // Normalize rows to nonnegative rhs, then append slack/surplus and
        // artificial columns. Column layout: [original | slack | artificial].
        std::size_t n_slack = 0, n_art = 0;
        std::vector<int> slack_col(m, -1), art_col(m, -1);
        std::vector<LinearProgram::Row> rows = lp_.rows;
        for (auto& r : rows) {
            if ((int)r.a.size() != (int)n)
                throw std::invalid_argument("simplex: row width mismatch");
            if (r.b.sign() < 0) {
                for (auto& v : r.a) v = -v;
                r.b = -r.b;
                r.rel = r.rel == LinearProgram::LessEq ? LinearProgram::GreaterEq
                        : r.rel == LinearProgram::GreaterEq ? LinearProgram::LessEq
                                                            : LinearProgram::Eq;
            }
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (rows[i].rel != LinearProgram::Eq) slack_col[i] = (int)n_slack++;
            if (rows[i].rel != LinearProgram::LessEq) art_col[i] = (int)n_art++;
        }
        const std::size_t cols = n + n_slack + n_art;

        tab_.assign(m, std::vector<Rational>(cols + 1));
        basis_.assign(m, -1);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) tab_[i][j] = rows[i].a[j];
            tab_[i][cols] = rows[i].b;
            if (slack_col[i] >= 0)
                tab_[i][n + slack_col[i]] =
                    rows[i].rel == LinearProgram::LessEq ? Rational(1) : Rational(-1);
            if (art_col[i] >= 0) {
                tab_[i][n + n_slack + art_col[i]] = Rational(1);
                basis_[i] = (int)(n + n_slack + art_col[i]);
            } else {
                basis_[i] = (int)(n + slack_col[i]);
            }
        }

        // Phase 1: minimize the sum of artificials.
        if (n_art > 0) {
            std::vector<Rational> obj(cols);
            for (std::size_t j = n + n_slack; j < cols; ++j) obj[j] = Rational(1);
            Rational p1 = optimize(obj, cols);
            if (p1.sign() != 0) return {LpStatus::Infeasible, Rational(), {}};
            // Pivot any artificial still in the basis out of it (or drop the
            // row when it is all-zero, i.e. redundant).
            for (std::size_t i = 0; i < m; ++i) {
                if (basis_[i] < (int)(n + n_slack)) continue;
                std::size_t j = 0;
                for (; j < n + n_slack; ++j)
                    if (tab_[i][j].sign() != 0) break;
                if (j < n + n_slack) pivot(i, j, cols);
            }
        }

        // Phase 2 on the real objective; artificial columns stay blocked.
        std::vector<Rational> obj(cols);
        for (std::size_t j = 0; j < n; ++j) obj[j] = lp_.c[j];
        blocked_from_ = n + n_slack;
        Rational val = optimize(obj, cols);
        if (unbounded_) return {LpStatus::Unbounded, Rational(), {}};

        LpSolution sol;
        sol.status = LpStatus::Optimal;
        sol.value = val;
        sol.x.assign(n, Rational());
        for (std::size_t i = 0; i < m; ++i)
            if (basis_[i] >= 0 && basis_[i] < (int)n)
                sol.x[basis_[i]] = tab_[i][cols];
        return sol;
    }

    /// Runs Bland-rule pivots until the reduced costs are nonnegative.
    /// Returns the objective value of the final basis.
    Rational optimize(const std::vector<Rational>& obj, std::size_t cols) {
        unbounded_ = false;
        const std::size_t m = tab_.size();
        for (;;) {
            // reduced costs r_j = c_j - c_B . B^-1 A_j
            int enter = -1;
            for (std::size_t j = 0; j < cols; ++j) {
                if (j >= blocked_from_) break;
                if (is_basic(j)) continue;
                Rational r = obj[j];
                for (std::size_t i = 0; i < m; ++i)
                    if (obj[basis_[i]].sign() != 0)
                        r -= obj[basis_[i]] * tab_[i][j];
                if (r.sign() < 0) {
                    enter = (int)j;
                    break;  // Bland: first improving column
                }
            }
            if (enter < 0) break;
            int leave = -1;
            Rational best;
            for (std::size_t i = 0; i < m; ++i) {
                if (tab_[i][enter].sign() <= 0) continue;
                Rational ratio = tab_[i][cols] / tab_[i][enter];
                if (leave < 0 || ratio < best ||
                    (ratio == best && basis_[i] < basis_[leave])) {
                    leave = (int)i;
                    best = ratio;
                }
            }
            if (leave < 0) {
                unbounded_ = true;
                return Rational();
            }
            pivot((std::size_t)leave, (std::size_t)enter, cols);
        }
        Rational val;
        for (std::size_t i = 0; i < m; ++i)
            if (obj[basis_[i]].sign() != 0) val += obj[basis_[i]] * tab_[i][cols];
        return val;
    }

    bool is_basic(std::size_t j) const {
        for (int b : basis_)
            if (b == (int)j) return true;
        return false;
    }

    void pivot(std::size_t row, std::size_t col, std::size_t cols) {
        Rational piv = tab_[row][col];
        for (std::size_t j = 0; j <= cols; ++j) tab_[row][j] /= piv;
        for (std::size_t i = 0; i < tab_.size(); ++i) {
            if (i == row || tab_[i][col].sign() == 0) continue;
            Rational f = tab_[i][col];
            for (std::size_t j = 0; j <= cols; ++j) tab_[i][j] -= f * tab_[row][j];
        }
        basis_[row] = (int)col;
    }

    const LinearProgram& lp_;
    std::vector<std::vector<Rational>> tab_;
    std::vector<int> basis_;
    std::size_t blocked_from_ = SIZE_MAX;
    bool unbounded_ = false;
};

inline LpSolution solve_lp(const LinearProgram& lp) { return Simplex::solve(lp); }

} // namespace owast

#endif // OWAST_SIMPLEX_HPP
