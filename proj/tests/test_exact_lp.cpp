#include "attnrat/exact_lp.hpp"

#include "doctest.h"

using namespace attnrat;
using lp::Matrix;

namespace {

std::vector<Rational> row(std::initializer_list<int> v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("phase one finds nonnegative solutions of equality systems") {
    Matrix e{row({1, 1}), row({1, -1})};
    auto b = row({4, 2});
    auto res = lp::find_nonnegative_solution(e, b);
    REQUIRE(res.feasible);
    CHECK(res.solution[0] == 3);
    CHECK(res.solution[1] == 1);

    Matrix e2{row({1, 1})};
    auto b2 = row({-1});
    CHECK_FALSE(lp::find_nonnegative_solution(e2, b2).feasible);
}

TEST_CASE("inequality systems return verified certificates") {
    // x >= 1 and -x >= 0 is infeasible.
    Matrix a{row({1}), row({-1})};
    auto b = row({1, 0});
    auto res = lp::solve_inequalities(a, b);
    CHECK_FALSE(res.feasible);
    CHECK(lp::is_farkas_certificate(a, b, res.farkas));

    // x - y >= 1, y >= -2, -x >= -5
    Matrix a2{row({1, -1}), row({0, 1}), row({-1, 0})};
    auto b2 = row({1, -2, -5});
    auto res2 = lp::solve_inequalities(a2, b2);
    REQUIRE(res2.feasible);
    CHECK(lp::satisfies(a2, b2, res2.point));
}

TEST_CASE("certificate checkers reject wrong certificates") {
    Matrix a{row({1}), row({-1})};
    auto b = row({1, 0});
    CHECK_FALSE(lp::is_farkas_certificate(a, b, row({1, 0})));
    CHECK_FALSE(lp::is_farkas_certificate(a, b, row({-1, -1})));
    CHECK_FALSE(lp::satisfies(a, b, row({1})));
}

TEST_CASE("degenerate systems terminate under Bland's rule") {
    // Many redundant constraints through the same vertex.
    Matrix a;
    std::vector<Rational> b;
    for (int i = 1; i <= 8; ++i) {
        a.push_back(row({i, -i}));
        b.push_back(0);
        a.push_back(row({-i, i}));
        b.push_back(0);
    }
    a.push_back(row({1, 1}));
    b.push_back(2);
    auto res = lp::solve_inequalities(a, b);
    REQUIRE(res.feasible);
    CHECK(lp::satisfies(a, b, res.point));
}
