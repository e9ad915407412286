#include "attnrat/approximation.hpp"
#include "attnrat/errors.hpp"
#include "attnrat/fixtures.hpp"
#include "attnrat/newman.hpp"
#include "attnrat/rational_circuit.hpp"
#include "test_support.hpp"

#include "doctest.h"

#include <cmath>

using namespace attnrat;
using attnrat::testing::Gen;

namespace {

ApproximationOptions quick_options() {
    ApproximationOptions o;
    o.grid_points = 20000;
    o.univariate_grid = 20000;
    return o;
}

// Newman's formula evaluated directly in long double from its product form.
long double newman_direct(unsigned k, long double x) {
    const long double xi = std::exp(-1.0L / std::sqrt(static_cast<long double>(k)));
    long double plus = 1;
    long double minus = 1;
    for (unsigned i = 1; i < k; ++i) {
        const long double t = std::pow(xi, static_cast<long double>(i));
        plus *= x + t;
        minus *= -x + t;
    }
    return x * (plus - minus) / (plus + minus);
}

Rational sample_unit(Gen& gen) {
    Rational r(gen.integer(-1000, 1000), 1000);
    r.canonicalize();
    return r;
}

}  // namespace

TEST_CASE("relu network evaluation examples") {
    ReluNetwork net = single_gate_network();
    CHECK(net.evaluate(std::vector<Rational>{make_rational(-1, 2)}) == 0);
    CHECK(net.evaluate(std::vector<Rational>{make_rational(1, 2)}) == make_rational(1, 2));
    try {
        ReluNetwork(1, {{AffineGate{{Rational(2)}, 0}}}, AffineGate{{Rational(1)}, 0});
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("layer 1 gate 1") != std::string::npos);
    }
    CHECK_THROWS_AS(net.evaluate(std::vector<Rational>{1, 1}), ValidationError);
}

TEST_CASE("property: normalized gates are 1-Lipschitz in the max-norm") {
    Gen gen(11);
    ReluNetwork tent = tent_network();
    for (int trial = 0; trial < 500; ++trial) {
        const Rational a = sample_unit(gen);
        const Rational b = sample_unit(gen);
        const Rational lhs = abs_value(tent.evaluate(std::vector<Rational>{a}) - tent.evaluate(std::vector<Rational>{b}));
        CHECK(lhs <= abs_value(a - b));
        for (const auto& layer : tent.layers()) {
            for (const auto& gate : layer) {
                std::vector<Rational> z1(gate.a.size()), z2(gate.a.size());
                Rational dist = 0;
                for (std::size_t j = 0; j < z1.size(); ++j) {
                    z1[j] = sample_unit(gen);
                    z2[j] = sample_unit(gen);
                    dist = std::max(dist, Rational(abs_value(z1[j] - z2[j])));
                }
                CHECK(abs_value(relu(gate.apply(z1)) - relu(gate.apply(z2))) <= dist);
            }
        }
    }
}

TEST_CASE("newman_abs structure") {
    CHECK_THROWS_AS(newman_abs(1), ValidationError);
    Gen gen(2);
    for (unsigned k : {2u, 4u, 9u, 16u}) {
        CAPTURE(k);
        UnivariateRational r = newman_abs(k);
        CHECK(r.degree() <= k);
        CHECK(r.evaluate(Rational(0)) == 0);
        for (int i = 0; i < 25; ++i) {
            const Rational x = sample_unit(gen);
            const Rational v = r.evaluate(x);
            CHECK(v == r.evaluate(Rational(-x)));
            CHECK(std::fabs(v.get_d() - static_cast<double>(newman_direct(k, x.get_d()))) < 1e-12);
        }
        // The rounded xi stays within 2^-64 relative error.
        const long double xi = std::exp(-1.0L / std::sqrt(static_cast<long double>(k)));
        CHECK(std::fabs(static_cast<long double>(newman_xi(k).get_d()) - xi) / xi < 1e-15L);
    }
}

TEST_CASE("newman_abs gridded error decreases with k") {
    BigFloat previous = newman_abs_error(4, 20001).sup_error;
    for (unsigned k : {9u, 16u, 25u}) {
        BigFloat err = newman_abs_error(k, 20001).sup_error;
        CHECK(err < previous);
        previous = err;
    }
    CHECK(newman_abs_error(16, 20001).sup_error < newman_abs_error(4, 20001).sup_error);
}

TEST_CASE("rational_relu examples") {
    Gen gen(4);
    for (unsigned k : {3u, 8u, 16u}) {
        CAPTURE(k);
        UnivariateRational f = rational_relu(k);
        CHECK(f.evaluate(Rational(0)) == 0);
        const BigFloat abs_err = newman_abs_error(k, 20001).sup_error;
        BigFloat at_one(Rational(f.evaluate(Rational(1)) - 1));
        CHECK(at_one.abs().to_double() <= abs_err.to_double() / 2 + 1e-18);
        for (int i = 0; i < 20; ++i) {
            const Rational x = sample_unit(gen);
            CHECK(f.evaluate(x) - f.evaluate(Rational(-x)) == x);
        }
        const Rational radius = make_rational(11, 10);
        UnivariateRational wide = rational_relu(k, radius);
        CHECK(wide.hi() == radius);
        for (int i = 0; i < 10; ++i) {
            const Rational x = sample_unit(gen) * radius;
            CHECK(wide.evaluate(x) == radius * f.evaluate(Rational(x / radius)));
        }
    }
}

TEST_CASE("circuit folds constants and tracks degrees") {
    MultivariateRationalFunction c(2);
    const std::size_t y0 = c.input(0);
    const std::size_t y1 = c.input(1);
    const std::size_t k3 = c.constant(3);
    std::vector<std::size_t> ins{k3, k3};
    std::vector<Rational> co{1, 2};
    const std::size_t folded = c.affine(ins, co, 1);
    CHECK(c.is_constant(folded));
    CHECK(c.node(folded).value == 10);

    auto square = std::make_shared<const UnivariateRational>(attnrat::testing::upoly({0, 0, 1}),
                                                             attnrat::testing::upoly({1, 0, 1}), -2, 2);
    std::vector<std::size_t> lin_in{y0, y1};
    std::vector<Rational> lin_co{1, -1};
    const std::size_t diff = c.affine(lin_in, lin_co, 0);
    const std::size_t sq = c.apply(diff, square);
    CHECK(c.node(sq).num_degree == 2);
    CHECK(c.node(sq).den_degree == 2);
    std::vector<std::size_t> out_in{sq, y0};
    std::vector<Rational> out_co{make_rational(1, 2), make_rational(1, 2)};
    c.set_output(c.affine(out_in, out_co, 0));
    CHECK(c.num_degree() == 3);
    CHECK(c.den_degree() == 2);

    Gen gen(8);
    for (int i = 0; i < 30; ++i) {
        std::vector<Rational> y{gen.rational(), gen.rational()};
        const Rational t = y[0] - y[1];
        const Rational expected = (t * t / (1 + t * t) + y[0]) / 2;
        CHECK(c.evaluate(y) == expected);
        auto pair = c.evaluate_pair(y);
        CHECK(pair.numerator / pair.denominator == expected);
        std::vector<BigFloat> yf{BigFloat(y[0]), BigFloat(y[1])};
        CHECK(std::fabs(c.evaluate(yf).to_double() - expected.get_d()) < 1e-12);
    }
    const std::size_t const_apply = c.apply(k3, square);
    CHECK(c.node(const_apply).value == make_rational(9, 10));
}

TEST_CASE("approximate_network examples") {
    ApproximationResult single = approximate_network(single_gate_network(), make_rational(1, 10), quick_options());
    CHECK(single.sup_error.compare(make_rational(1, 10)) <= 0);
    // Independent check at random rational points, exactly.
    Gen gen(21);
    for (int i = 0; i < 200; ++i) {
        const Rational y = sample_unit(gen);
        CHECK(abs_value(single.function.evaluate(std::vector<Rational>{y}) - relu(y)) <= make_rational(1, 10));
    }

    ReluNetwork constant(2, {{AffineGate{{0, 0}, make_rational(1, 2)}, AffineGate{{0, 0}, make_rational(-1, 3)}}},
                         AffineGate{{make_rational(1, 2), make_rational(1, 2)}, 0});
    ApproximationResult exact = approximate_network(constant, make_rational(1, 10), quick_options());
    CHECK(exact.degree == 0);
    CHECK(exact.k == 0);
    CHECK(exact.sup_error.sign() == 0);
    CHECK(exact.function.evaluate(std::vector<Rational>{0, 0}) == make_rational(1, 4));

    std::uint32_t previous = 0;
    for (const Rational& eps : {make_rational(1, 2), make_rational(1, 10), make_rational(1, 50)}) {
        ApproximationResult r = approximate_network(tent_network(), eps, quick_options());
        CHECK(r.sup_error.compare(eps) <= 0);
        CHECK(r.degree >= previous);
        previous = r.degree;
    }

    CHECK_THROWS_AS(approximate_network(single_gate_network(), 0, quick_options()), ValidationError);
    ApproximationOptions tight = quick_options();
    tight.max_k = 3;
    CHECK_THROWS_AS(approximate_network(single_gate_network(), make_rational(1, 50), tight),
                    ApproximationBudgetExceeded);
}

TEST_CASE("verification samples cover the box deterministically") {
    CHECK(verification_size(1, 100) == 100);
    CHECK(verification_size(2, 100) == 104);
    auto corner = verification_point(2, 3, 100);
    CHECK(corner[0].compare(1) == 0);
    CHECK(corner[1].compare(1) == 0);
    // First Halton point: (1/2, 1/3) mapped to [-1, 1].
    auto first = verification_point(2, 4, 100);
    CHECK(first[0].compare(0) == 0);
    CHECK(std::fabs((first[1] - BigFloat(make_rational(-1, 3))).to_double()) < 1e-50);
}

TEST_CASE("relu hat fixtures interpolate a parity margin") {
    for (std::uint32_t n = 1; n <= 6; ++n) {
        CAPTURE(n);
        const Rational amp = relu_hat_amplitude(n);
        ReluNetwork net = relu_hat_network(n);
        for (std::uint32_t w = 0; w <= n; ++w) {
            Rational y(2 * static_cast<long>(w) - static_cast<long>(n), n);
            y.canonicalize();
            CHECK(net.evaluate(std::vector<Rational>{y}) == (w % 2 ? amp : Rational(-amp)));
        }
        LayerSpec layer = relu_hat_layer(n);
        auto margin = best_margin(layer_table(layer), parity(n));
        REQUIRE(margin);
        CHECK(margin->tau == 0);
        CHECK(margin->gamma == amp);
    }
    CHECK(relu_hat_amplitude(4) == make_rational(1, 57));
}

TEST_CASE("theorem2_report examples") {
    Theorem2Options options;
    options.approximation = quick_options();
    for (std::uint32_t n : {2u, 4u}) {
        CAPTURE(n);
        LayerSpec layer = relu_hat_layer(n);
        auto margin = best_margin(layer_table(layer), parity(n));
        REQUIRE(margin);
        BoundReport r = theorem2_report(layer, margin->tau, margin->gamma, options);
        CHECK(r.theorem == 2);
        CHECK(r.hypothesis_met);
        CHECK(r.margin_inequalities_hold);
        CHECK(r.sign_represents);
        CHECK(r.satisfied);
        CHECK(Rational(r.h * r.p) >= Rational(n, 4));
        CHECK(r.epsilon == margin->gamma / 2);
        CHECK(r.m == n);
        CHECK(r.l == 1);
        CHECK(std::stod(r.relu_bound_quantity) > 0);
    }

    // Values 3/2 push the head sum out of [-1, 1].
    std::vector<WeightTable> weights(2);
    std::vector<ValuePair> values(2);
    for (auto& w : weights) {
        for (auto& row : w) row = {Rational(1), Rational(1)};
    }
    for (auto& v : values) v = {std::vector<Rational>{0}, std::vector<Rational>{make_rational(3, 2)}};
    LayerSpec wide({HeadSpec(2, 1, weights, values)}, ReluPost{single_gate_network(), 0});
    CHECK_THROWS_AS(theorem2_report(wide, 0, make_rational(1, 10), options), RangeAssumptionViolated);

    BoundReport unmet = theorem2_report(relu_hat_layer(2), 0, 1, options);
    CHECK_FALSE(unmet.hypothesis_met);
    CHECK_FALSE(unmet.satisfied);
    CHECK(unmet.witness.find("hypothesis unmet") != std::string::npos);
}

TEST_CASE("relu bound quantity") {
    // 1 * 2^1 * ln(2/(1/2))^2 = 2 ln(4)^2
    const double expected = 2 * std::pow(std::log(4.0), 2);
    CHECK(std::fabs(std::stod(relu_bound_quantity(1, 2, 1, make_rational(1, 2))) - expected) < 1e-9);
    CHECK(relu_bound_quantity(1, 2, 0, 1) == "undefined");
}
