#include "attnrat/parity.hpp"

#include "attnrat/errors.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <bit>

using namespace attnrat;
using attnrat::testing::Gen;
using attnrat::testing::upoly;

namespace {

RealTable table(std::uint32_t n, std::vector<Rational> v) { return RealTable{n, std::move(v)}; }

RealTable pm_encoding(const BooleanTable& g) {
    RealTable f{g.n, {}};
    for (auto b : g.values) f.values.push_back(2 * static_cast<int>(b) - 1);
    return f;
}

// Sensitivity by walking all edges of the cube, each counted from both ends.
Rational brute_sensitivity(std::uint32_t n, const std::function<bool(std::uint64_t)>& g) {
    int edges = 0;
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint64_t y = x | (1ULL << i);
            if (y != x && g(x) != g(y)) edges += 2;
        }
    }
    return make_rational(edges, 1L << n);
}

// (-1)^(1+parity(x)) f(x) >= 1 on every point, evaluated from the witness terms.
bool witness_ok(const CubePolynomial& f, std::uint32_t n, std::uint32_t k) {
    if (f.degree() > k) return false;
    for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
        Rational v = poly_eval(f.to_polynomial(), attnrat::testing::cube_point(x, n));
        if (std::popcount(x) % 2 == 0) v = -v;
        if (v < 1) return false;
    }
    return true;
}

// y >= 0, sum y = 1 and for every |S| <= k: sum_{x superset of S} y_x sigma(x) = 0.
bool farkas_ok(const std::vector<Rational>& y, std::uint32_t n, std::uint32_t k) {
    if (y.size() != (1ULL << n)) return false;
    Rational total = 0;
    for (const auto& v : y) {
        if (v < 0) return false;
        total += v;
    }
    if (total != 1) return false;
    for (std::uint64_t s = 0; s < (1ULL << n); ++s) {
        if (static_cast<std::uint32_t>(std::popcount(s)) > k) continue;
        Rational acc = 0;
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
            if ((x & s) != s) continue;
            acc += std::popcount(x) % 2 ? y[x] : Rational(-y[x]);
        }
        if (acc != 0) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("parity examples") {
    CHECK(parity(1).values == std::vector<std::uint8_t>{0, 1});
    CHECK(parity(2).values == std::vector<std::uint8_t>{0, 1, 1, 0});
    CHECK(parity(3).values[0b111] == 1);
}

TEST_CASE("sign_represents examples") {
    Gen gen(3);
    for (std::uint32_t n = 1; n <= 5; ++n) {
        BooleanTable g{n, {}};
        for (std::size_t x = 0; x < (1U << n); ++x) g.values.push_back(gen.coin());
        CHECK(sign_represents(pm_encoding(g), g));
    }
    CHECK_FALSE(sign_represents(table(2, {0, 0, 0, 0}), parity(2)));
    CHECK(sign_represents(table(2, {-1, 1, 1, -1}), parity(2)));
    CHECK_THROWS_AS(sign_represents(table(2, {0, 0, 0, 0}), parity(3)), ValidationError);
}

TEST_CASE("margin_represents examples") {
    RealTable f = pm_encoding(parity(3));
    CHECK(margin_represents(f, parity(3), 0, 1));
    CHECK_FALSE(margin_represents(f, parity(3), 0, make_rational(3, 2)));
    CHECK_THROWS_AS(margin_represents(f, parity(3), 0, 0), ValidationError);
    CHECK_THROWS_AS(margin_represents(f, parity(3), 0, -1), ValidationError);
}

TEST_CASE("best_margin examples") {
    auto m = best_margin(pm_encoding(parity(3)), parity(3));
    REQUIRE(m);
    CHECK(m->tau == 0);
    CHECK(m->gamma == 1);
    auto m2 = best_margin(table(2, {-1, 1, 1, -1}), parity(2));
    REQUIRE(m2);
    CHECK(m2->tau == 0);
    CHECK(m2->gamma == 1);
    CHECK_FALSE(best_margin(table(2, {make_rational(1, 2), make_rational(1, 2), make_rational(1, 2), make_rational(1, 2)}), parity(2)));
}

TEST_CASE("property: margins imply shifted sign representation and best_margin is tight") {
    Gen gen(17);
    for (int trial = 0; trial < 300; ++trial) {
        const auto n = static_cast<std::uint32_t>(gen.integer(1, 4));
        RealTable f{n, {}};
        BooleanTable g{n, {}};
        for (std::size_t x = 0; x < (1U << n); ++x) {
            f.values.push_back(gen.rational(6, 3));
            g.values.push_back(gen.coin());
        }
        const Rational tau = gen.rational(2, 2);
        const Rational gamma = gen.positive_rational(3, 4);
        if (margin_represents(f, g, tau, gamma)) CHECK(sign_represents(shifted(f, -tau), g));
        auto best = best_margin(f, g);
        bool separable = false;
        for (const auto& t : f.values) {
            if (sign_represents(shifted(f, -t), g)) separable = true;
        }
        bool has_both = std::find(g.values.begin(), g.values.end(), 0) != g.values.end() &&
                        std::find(g.values.begin(), g.values.end(), 1) != g.values.end();
        if (has_both) CHECK(best.has_value() == separable);
        if (best) {
            CHECK(best->gamma > 0);
            CHECK(margin_represents(f, g, best->tau, best->gamma));
            CHECK_FALSE(margin_represents(f, g, best->tau, best->gamma * make_rational(11, 10)));
        }
    }
}

TEST_CASE("average_sensitivity examples") {
    for (std::uint32_t n = 1; n <= 12; ++n) CHECK(average_sensitivity(parity(n)) == n);
    CHECK(average_sensitivity(BooleanTable{3, std::vector<std::uint8_t>(8, 1)}) == 0);
    auto maj3 = [](std::uint64_t x) { return std::popcount(x) >= 2; };
    CHECK(brute_sensitivity(3, maj3) == make_rational(3, 2));
    CHECK(average_sensitivity(majority(3)) == make_rational(3, 2));
    for (std::uint32_t n = 1; n <= 7; ++n) {
        auto maj = [n](std::uint64_t x) { return 2 * static_cast<std::uint32_t>(std::popcount(x)) > n; };
        CHECK(average_sensitivity(majority(n)) == brute_sensitivity(n, maj));
    }
}

TEST_CASE("parity_correlation examples") {
    for (std::uint32_t n = 1; n <= 8; ++n) {
        CHECK(parity_correlation(parity(n)) == 1);
        CHECK(parity_correlation(BooleanTable{n, std::vector<std::uint8_t>(1U << n, 0)}) == 0);
    }
    CHECK(parity_correlation(BooleanTable{2, {0, 1, 0, 1}}) == 0);
    // Complement of parity is perfectly anti-correlated.
    CHECK(parity_correlation(BooleanTable{2, {1, 0, 0, 1}}) == 1);
}

TEST_CASE("ptf_parity_feasible examples with independently checked certificates") {
    auto check = [](std::uint32_t n, std::uint32_t k, bool expected) {
        CAPTURE(n);
        CAPTURE(k);
        PtfFeasibility r = ptf_parity_feasible(n, k);
        REQUIRE(r.feasible == expected);
        if (expected) {
            REQUIRE(r.witness);
            CHECK(witness_ok(*r.witness, n, k));
        } else {
            CHECK(farkas_ok(r.farkas, n, k));
        }
    };
    check(2, 1, false);
    check(2, 2, true);
    check(3, 2, false);
    for (std::uint32_t n = 1; n <= 4; ++n) {
        check(n, n, true);
        check(n, n - 1, false);
        CHECK(symmetric_parity_feasible(n, n));
        CHECK_FALSE(symmetric_parity_feasible(n, n - 1));
    }
    CHECK_THROWS_AS(ptf_parity_feasible(5, 2), ScaleCapExceeded);
}

TEST_CASE("build_parity_layer examples") {
    LayerSpec l1 = build_parity_layer(1);
    CHECK(l1.rational_post().numerator == upoly({-1, 2}));
    CHECK(layer_table(l1).values == std::vector<Rational>{-1, 1});

    LayerSpec l2 = build_parity_layer(2);
    CHECK(l2.rational_post().numerator == upoly({-1, 8, -8}));
    CHECK(layer_table(l2).values == std::vector<Rational>{-1, 1, 1, -1});

    LayerSpec l4 = build_parity_layer(4);
    CompiledLayer compiled = compile_layer(l4);
    CHECK(sign_represents(function_table(compiled.function), parity(4)));
    CHECK(l4.h() * compiled.declared_p == 4);
}

TEST_CASE("lagrange_interpolant hits every node") {
    Gen gen(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto m = gen.integer(1, 7);
        std::vector<Rational> z;
        std::vector<Rational> y;
        for (std::int64_t i = 0; i < m; ++i) {
            z.push_back(make_rational(i, 3) + make_rational(gen.integer(0, 2), 7));
            y.push_back(gen.rational());
        }
        Polynomial u = lagrange_interpolant(z, y);
        CHECK(total_degree(u) <= static_cast<std::uint32_t>(m - 1));
        for (std::int64_t i = 0; i < m; ++i) CHECK(poly_eval(u, std::vector<Rational>{z[i]}) == y[i]);
    }
    CHECK_THROWS_AS(lagrange_interpolant({1, 1}, {0, 1}), ValidationError);
}

TEST_CASE("property: parity layers verify and sign-represent up to n = 10") {
    for (std::uint32_t n = 1; n <= 10; ++n) {
        CAPTURE(n);
        LayerSpec layer = build_parity_layer(n);
        CompiledLayer compiled = compile_layer(layer);
        CHECK(verify_equivalence(layer, compiled.function).ok());
        CHECK(sign_represents(function_table(compiled.function), parity(n)));
    }
}

TEST_CASE("theorem1_report examples") {
    BoundReport r = theorem1_report(build_parity_layer(8));
    CHECK(r.sign_represents);
    CHECK(r.h * r.p == 8);
    CHECK(r.bound == 2);
    CHECK(r.satisfied);
    CHECK_FALSE(r.contradiction);

    LayerSpec identity({attnrat::testing::uniform_mean_head(4)}, RationalPost{upoly({0, 1}), upoly({1}), 1});
    BoundReport r2 = theorem1_report(identity);
    CHECK_FALSE(r2.sign_represents);
    CHECK(r2.satisfied);
    CHECK_FALSE(r2.contradiction);
    CHECK(r2.witness.find("first failing x") != std::string::npos);
}

TEST_CASE("forbidden shapes and a small falsification campaign") {
    CHECK(forbidden_shapes(4).empty());
    CHECK(forbidden_shapes(8) == std::vector<std::pair<std::uint32_t, std::uint32_t>>{{1, 1}});
    CHECK(forbidden_shapes(9).size() == 3);
    CHECK_THROWS_AS(theorem1_campaign({4, 10, 1, 3}), ValidationError);

    CampaignResult a = theorem1_campaign({6, 200, 7, 3});
    CampaignResult b = theorem1_campaign({6, 200, 7, 3});
    CHECK(a.sign_representations == 0);
    CHECK(a.contradictions == 0);
    CHECK(a.sign_representations == b.sign_representations);
    CHECK(a.resampled == b.resampled);
}

TEST_CASE("random_rational_layer is reproducible and nonvanishing") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        LayerSpec a = random_rational_layer(seed, 5, 2, 1, 2);
        LayerSpec b = random_rational_layer(seed, 5, 2, 1, 2);
        CHECK(layer_table(a).values == layer_table(b).values);
    }
}
