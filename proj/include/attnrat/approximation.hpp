#pragma once

#include "attnrat/attention.hpp"
#include "attnrat/compiler.hpp"
#include "attnrat/high_precision.hpp"
#include "attnrat/parity.hpp"
#include "attnrat/rational_circuit.hpp"
#include "attnrat/relu_network.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace attnrat {

struct ApproximationOptions {
    // Verification samples over [-1, 1]^d: a uniform grid when d = 1,
    // Halton points plus the 2^d corners otherwise.
    std::size_t grid_points = 100000;
    // Uniform grid used to measure the per-gate approximant error.
    std::size_t univariate_grid = 100000;
    std::uint32_t max_k = 160;
};

struct ApproximationResult {
    MultivariateRationalFunction function{0};
    std::uint32_t degree = 0;
    std::uint32_t num_degree = 0;
    std::uint32_t den_degree = 0;
    Rational epsilon;
    Rational delta;   // per-gate budget epsilon / (2 l)
    Rational radius;  // gates approximate relu on [-radius, radius], radius = 1 + epsilon
    std::uint32_t k = 0;  // Newman parameter shared by all non-constant gates (0: none)
    // Per layer, per gate: k, or 0 when the gate folded to an exact constant.
    std::vector<std::vector<std::uint32_t>> gate_k;
    BigFloat gate_error;  // measured relu error of the chosen approximant
    BigFloat sup_error;   // measured |v - u| over the verification samples
    std::size_t grid_points = 0;
    std::size_t univariate_grid = 0;
};

// Smallest k in [2, max_k] (searched by doubling then bisection, which
// assumes the error is nonincreasing in k) whose gridded relu error on
// [-radius, radius] is <= delta. Throws ApproximationBudgetExceeded.
std::uint32_t choose_newman_degree(const Rational& delta, const Rational& radius, const ApproximationOptions& options,
                                   BigFloat* error = nullptr);

// Replaces every relu gate with a Newman-based rational approximant and
// composes the result as a circuit. Requires 0 < epsilon <= 1. Throws
// ApproximationBudgetExceeded when no k <= max_k meets the budget or the
// measured error exceeds epsilon, and DenominatorVanished when an
// approximant denominator changes sign on the samples.
ApproximationResult approximate_network(const ReluNetwork& net, const Rational& epsilon,
                                        const ApproximationOptions& options = {});

// Sample i of the verification set for dimension d.
std::vector<BigFloat> verification_point(std::size_t d, std::size_t i, std::size_t points);
std::size_t verification_size(std::size_t d, std::size_t points);

BigFloat evaluate_network(const ReluNetwork& net, std::span<const BigFloat> z);

// Decimal rendering of h m^l ln(2l/gamma)^(2l).
std::string relu_bound_quantity(std::uint32_t h, std::uint32_t m, std::uint32_t l, const Rational& gamma);

struct Theorem2Options {
    std::uint32_t cap = kDefaultExhaustiveCap;
    ApproximationOptions approximation;
};

// Theorem 2 pipeline for a ReLU-post layer and a declared (tau, gamma):
// checks the range hypothesis and the margin, approximates the network with
// epsilon = gamma / 2, checks that v(Y(x)) - tau sign-represents parity,
// compiles the approximant through the homogenized lift with p equal to its
// degree and records h p >= n/4. Throws RangeAssumptionViolated when a head
// sum leaves [-1, 1]^d.
BoundReport theorem2_report(const LayerSpec& layer, const Rational& tau, const Rational& gamma,
                            const Theorem2Options& options = {});

}  // namespace attnrat
