#pragma once

#include "attnrat/attention.hpp"
#include "attnrat/compiler.hpp"
#include "attnrat/cube_polynomial.hpp"
#include "attnrat/rational.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace attnrat {

// Real-valued function on {0,1}^n, indexed by the cube-point encoding
// (x_1 least significant).
struct RealTable {
    std::uint32_t n = 0;
    std::vector<Rational> values;
};

// Boolean function on {0,1}^n, same indexing.
struct BooleanTable {
    std::uint32_t n = 0;
    std::vector<std::uint8_t> values;
};

BooleanTable parity(std::uint32_t n);
BooleanTable majority(std::uint32_t n);
// g(x) = [f(x) > threshold].
BooleanTable threshold_table(const RealTable& f, const Rational& threshold = 0);
RealTable shifted(const RealTable& f, const Rational& offset);

// Values of the layer on every cube point (throws ScaleCapExceeded above cap).
RealTable layer_table(const LayerSpec& layer, std::uint32_t cap = kDefaultExhaustiveCap);
RealTable function_table(const CubeRationalFunction& f, std::uint32_t cap = kDefaultExhaustiveCap);

// f(x) > 0 exactly when g(x) = 1; f(x) = 0 falls on the g = 0 side.
bool sign_represents(const RealTable& f, const BooleanTable& g);
// g = 1 implies f >= tau + gamma and g = 0 implies f <= tau - gamma.
// Throws ValidationError for gamma <= 0.
bool margin_represents(const RealTable& f, const BooleanTable& g, const Rational& tau, const Rational& gamma);

struct Margin {
    Rational tau;
    Rational gamma;
};

// Midpoint threshold and half-gap between the classes, or nullopt when the
// classes are not strictly separated (or one class is empty).
std::optional<Margin> best_margin(const RealTable& f, const BooleanTable& g);

// (1/2^n) * number of (x, i) with g(x) != g(x xor e_i).
Rational average_sensitivity(const BooleanTable& g);
// |E_x[(-1)^g(x) (-1)^parity(x)]|
Rational parity_correlation(const BooleanTable& g);

inline constexpr std::uint32_t kPtfLpCap = 4;

struct PtfFeasibility {
    bool feasible = false;
    // Witness f of degree <= k with (-1)^(1+parity(x)) f(x) >= 1 on the cube.
    std::optional<CubePolynomial> witness;
    // Nonnegative weights on cube points certifying infeasibility.
    std::vector<Rational> farkas;
    std::size_t pivots = 0;
};

// Exact LP decision: is there a multilinear polynomial of degree <= k that
// sign-represents parity on n bits? Requires 0 <= k <= n <= 4.
PtfFeasibility ptf_parity_feasible(std::uint32_t n, std::uint32_t k);

// Cross-check through symmetrization: parity is symmetric, so a degree-k
// representation exists iff some univariate q of degree <= k satisfies
// (-1)^(1+w) q(w) >= 1 for w = 0..n. Decided by the same exact LP on the
// reduced system.
bool symmetric_parity_feasible(std::uint32_t n, std::uint32_t k);

// Lagrange interpolant through (z_i, y_i), as a univariate polynomial.
Polynomial lagrange_interpolant(const std::vector<Rational>& z, const std::vector<Rational>& y);

// Head with w = 1 everywhere and v_i(b) = b: output is the mean of the bits.
HeadSpec uniform_mean_head(std::uint32_t n);

// Uniform-mean head followed by the degree-n interpolant u(k/n) = (-1)^(k+1).
// Declared p = n, so hp = n.
LayerSpec build_parity_layer(std::uint32_t n);

struct BoundReport {
    int theorem = 1;
    std::uint32_t n = 0;
    std::uint32_t h = 0;
    std::uint32_t p = 0;
    Rational bound;            // n / 4
    bool sign_represents = false;
    // The recorded inequality h p >= n/4 holds.
    bool satisfied = false;
    // Sign-represents parity while violating the inequality.
    bool contradiction = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::string witness;

    // Theorem 2 fields.
    std::uint32_t m = 0;
    std::uint32_t l = 0;
    std::optional<Rational> tau;
    std::optional<Rational> gamma;
    bool hypothesis_met = true;
    std::string relu_bound_quantity;  // decimal h m^l ln(2l/gamma)^(2l)
    std::uint32_t achieved_degree = 0;
    std::optional<Rational> epsilon;
    std::uint32_t newman_k = 0;
    std::string approximation_error;  // measured grid sup-error, decimal
    std::uint64_t grid_points = 0;
    // v - tau >= gamma/2 on parity-1 inputs and <= -gamma/2 on the rest.
    bool margin_inequalities_hold = false;
};

// Compiles the layer, checks parity sign-representation exhaustively and
// records h p >= n/4.
BoundReport theorem1_report(const LayerSpec& layer, std::uint32_t cap = kDefaultExhaustiveCap);

struct CampaignOptions {
    std::uint32_t n = 8;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    std::uint32_t max_d = 3;
};

struct CampaignResult {
    std::uint32_t n = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::uint64_t sign_representations = 0;
    std::uint64_t contradictions = 0;
    // Post-processing denominators that vanished and were redrawn.
    std::uint64_t resampled = 0;
    std::optional<std::uint64_t> first_representation;
};

// Random layers with 2hp < n/2 (so the bound forbids parity), compiled and
// checked exhaustively. Weights are 2^j with j uniform in [-8, 8], values
// small integers. Each trial draws from its own seed-derived stream, so the
// result does not depend on the thread count.
CampaignResult theorem1_campaign(const CampaignOptions& options);

// The (h, p) pairs with h, p >= 1 and 2hp < n/2.
std::vector<std::pair<std::uint32_t, std::uint32_t>> forbidden_shapes(std::uint32_t n);

LayerSpec random_rational_layer(std::uint64_t seed, std::uint32_t n, std::uint32_t d, std::uint32_t h,
                                std::uint32_t p, std::uint64_t* resampled = nullptr);

}  // namespace attnrat
