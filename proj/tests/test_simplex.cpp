#include "doctest.h"
#include "owast/simplex.hpp"

using namespace owast;

namespace {

LinearProgram::Row row(std::vector<Rational> a, LinearProgram::Rel rel, Rational b) {
    return {std::move(a), rel, b};
}

} // namespace

TEST_CASE("textbook maximization recast as minimization") {
    // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  -> optimum 36 at (2,6)
    LinearProgram lp;
    lp.c = {Rational(-3), Rational(-5)};
    lp.rows.push_back(row({Rational(1), Rational(0)}, LinearProgram::LessEq, Rational(4)));
    lp.rows.push_back(row({Rational(0), Rational(2)}, LinearProgram::LessEq, Rational(12)));
    lp.rows.push_back(row({Rational(3), Rational(2)}, LinearProgram::LessEq, Rational(18)));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(-36));
    CHECK(sol.x[0] == Rational(2));
    CHECK(sol.x[1] == Rational(6));
}

TEST_CASE("greater-equal rows where both constraints bind") {
    // min 2x + 3y s.t. x + y >= 10, y - x >= 2 -> optimum at (4,6): 26
    LinearProgram lp;
    lp.c = {Rational(2), Rational(3)};
    lp.rows.push_back(row({Rational(1), Rational(1)}, LinearProgram::GreaterEq, Rational(10)));
    lp.rows.push_back(row({Rational(-1), Rational(1)}, LinearProgram::GreaterEq, Rational(2)));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(26));
    CHECK(sol.x[0] == Rational(4));
    CHECK(sol.x[1] == Rational(6));
}

TEST_CASE("equality constraints") {
    // min x + y s.t. x + 2y = 4, x,y >= 0 -> y = 2, x = 0, value 2
    LinearProgram lp;
    lp.c = {Rational(1), Rational(1)};
    lp.rows.push_back(row({Rational(1), Rational(2)}, LinearProgram::Eq, Rational(4)));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(2));
    CHECK(sol.x[1] == Rational(2));
}

TEST_CASE("infeasible and unbounded programs are detected") {
    LinearProgram bad;
    bad.c = {Rational(1)};
    bad.rows.push_back(row({Rational(1)}, LinearProgram::LessEq, Rational(1)));
    bad.rows.push_back(row({Rational(1)}, LinearProgram::GreaterEq, Rational(2)));
    CHECK(solve_lp(bad).status == LpStatus::Infeasible);

    LinearProgram unb;
    unb.c = {Rational(-1)};
    unb.rows.push_back(row({Rational(-1)}, LinearProgram::LessEq, Rational(0)));
    CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("degenerate rhs and rational data stay exact") {
    // min 0.3x + 0.7y s.t. x + y >= 1 -> 0.3 at x = 1
    LinearProgram lp;
    lp.c = {Rational(3, 10), Rational(7, 10)};
    lp.rows.push_back(row({Rational(1), Rational(1)}, LinearProgram::GreaterEq, Rational(1)));
    lp.rows.push_back(row({Rational(1), Rational(0)}, LinearProgram::LessEq, Rational(1)));
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == LpStatus::Optimal);
    CHECK(sol.value == Rational(3, 10));
}
