#include "attnrat/approximation.hpp"

#include "attnrat/errors.hpp"
#include "attnrat/kernels.hpp"
#include "attnrat/newman.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace attnrat {

namespace {

constexpr std::uint32_t kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                     43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};
constexpr std::size_t kMaxCornerDim = 16;

// Van der Corput radical inverse of i in the given base, as an exact rational.
Rational radical_inverse(std::size_t i, std::uint32_t base) {
    Integer num = 0;
    Integer den = 1;
    while (i > 0) {
        num = num * base + static_cast<unsigned long>(i % base);
        den *= base;
        i /= base;
    }
    // Digits were accumulated most-significant first in reverse order, which
    // is exactly the mirrored expansion.
    Rational r(num, den);
    r.canonicalize();
    return r;
}

std::size_t corner_count(std::size_t d) { return d <= kMaxCornerDim ? std::size_t{1} << d : 0; }

}  // namespace

std::size_t verification_size(std::size_t d, std::size_t points) {
    return d <= 1 ? std::max<std::size_t>(points, 2) : corner_count(d) + points;
}

std::vector<BigFloat> verification_point(std::size_t d, std::size_t i, std::size_t points) {
    if (d == 0) return {};
    if (d == 1) return {uniform_grid_point(-1, 1, i, std::max<std::size_t>(points, 2))};
    if (d > std::size(kPrimes)) throw ValidationError("verification grid supports at most 25 dimensions");
    std::vector<BigFloat> out;
    out.reserve(d);
    const std::size_t corners = corner_count(d);
    if (i < corners) {
        for (std::size_t j = 0; j < d; ++j) out.emplace_back(Rational(((i >> j) & 1U) ? 1 : -1));
        return out;
    }
    const std::size_t index = i - corners + 1;
    for (std::size_t j = 0; j < d; ++j) out.emplace_back(2 * radical_inverse(index, kPrimes[j]) - 1);
    return out;
}

BigFloat evaluate_network(const ReluNetwork& net, std::span<const BigFloat> z) {
    if (z.size() != net.input_dim()) throw ValidationError("network evaluation: input has wrong dimension");
    const mpfr_prec_t precision = z.empty() ? BigFloat::kDefaultPrecision : z[0].precision();
    auto affine = [&](const AffineGate& gate, const std::vector<BigFloat>& in) {
        BigFloat acc(gate.b, precision);
        for (std::size_t j = 0; j < in.size(); ++j) {
            if (gate.a[j] != 0) acc += BigFloat(gate.a[j], precision) * in[j];
        }
        return acc;
    };
    std::vector<BigFloat> current(z.begin(), z.end());
    for (const auto& layer : net.layers()) {
        std::vector<BigFloat> next;
        next.reserve(layer.size());
        for (const auto& gate : layer) {
            BigFloat t = affine(gate, current);
            next.push_back(t.sign() > 0 ? t : BigFloat(precision));
        }
        current = std::move(next);
    }
    return affine(net.readout(), current);
}

std::uint32_t choose_newman_degree(const Rational& delta, const Rational& radius, const ApproximationOptions& options,
                                   BigFloat* error) {
    if (options.max_k < 2) throw ValidationError("max_k must be at least 2");
    auto meets = [&](std::uint32_t k) {
        GridError err = rational_relu_error(k, radius, options.univariate_grid);
        return err.denominator_sign_consistent && err.sup_error.compare(delta) <= 0;
    };
    std::uint32_t lo = 1;  // largest k known to fail (1 = none tried)
    std::uint32_t hi = 2;
    while (!meets(hi)) {
        lo = hi;
        if (hi == options.max_k) {
            throw ApproximationBudgetExceeded("no Newman degree k <= " + std::to_string(options.max_k) +
                                              " meets the per-gate budget " + format_rational(delta));
        }
        hi = std::min(2 * hi, options.max_k);
    }
    while (hi - lo > 1) {
        const std::uint32_t mid = lo + (hi - lo) / 2;
        if (mid < 2 || !meets(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (error) *error = rational_relu_error(hi, radius, options.univariate_grid).sup_error;
    return hi;
}

ApproximationResult approximate_network(const ReluNetwork& net, const Rational& epsilon,
                                        const ApproximationOptions& options) {
    if (epsilon <= 0 || epsilon > 1) throw ValidationError("epsilon must satisfy 0 < epsilon <= 1");
    if (options.grid_points < 1 || options.univariate_grid < 2) throw ValidationError("grid sizes must be positive");
    ApproximationResult result;
    result.epsilon = epsilon;
    result.radius = 1 + epsilon;
    result.grid_points = verification_size(net.input_dim(), options.grid_points);
    result.univariate_grid = options.univariate_grid;
    const std::size_t depth = net.depth();
    if (depth > 0) result.delta = epsilon / (2 * static_cast<long>(depth));

    std::shared_ptr<const UnivariateRational> gate_fn;
    auto approximant = [&]() {
        if (!gate_fn) {
            result.k = choose_newman_degree(result.delta, result.radius, options, &result.gate_error);
            gate_fn = std::make_shared<const UnivariateRational>(rational_relu(result.k, result.radius));
        }
        return gate_fn;
    };

    MultivariateRationalFunction circuit(net.input_dim());
    std::vector<std::size_t> current;
    for (std::size_t j = 0; j < net.input_dim(); ++j) current.push_back(circuit.input(j));
    for (const auto& layer : net.layers()) {
        std::vector<std::size_t> next;
        std::vector<std::uint32_t> ks;
        for (const auto& gate : layer) {
            const std::size_t pre = circuit.affine(current, gate.a, gate.b);
            if (circuit.is_constant(pre)) {
                next.push_back(circuit.constant(relu(circuit.node(pre).value)));
                ks.push_back(0);
            } else {
                next.push_back(circuit.apply(pre, approximant()));
                ks.push_back(result.k);
            }
        }
        current = std::move(next);
        result.gate_k.push_back(std::move(ks));
    }
    circuit.set_output(circuit.affine(current, net.readout().a, net.readout().b));

    // Verification over the sample set.
    const std::size_t d = net.input_dim();
    const auto count = static_cast<std::int64_t>(result.grid_points);
    std::vector<int> reference_signs;
    {
        auto y = verification_point(d, 0, options.grid_points);
        circuit.evaluate(y, &reference_signs);
    }
    const bool signs_ok = std::all_of(reference_signs.begin(), reference_signs.end(), [](int s) { return s != 0; });
    std::int64_t first_bad = signs_ok ? count : 0;
    BigFloat sup;
#pragma omp parallel
    {
        BigFloat local;
        std::vector<int> signs;
        std::int64_t local_bad = count;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) {
            auto y = verification_point(d, static_cast<std::size_t>(i), options.grid_points);
            BigFloat v = circuit.evaluate(y, &signs);
            if (signs != reference_signs && local_bad == count) local_bad = i;
            BigFloat err = (v - evaluate_network(net, y)).abs();
            if (local < err) local = err;
        }
#pragma omp critical(attnrat_approx_verify)
        {
            if (sup < local) sup = local;
            first_bad = std::min(first_bad, local_bad);
        }
    }
    if (first_bad < count) {
        throw DenominatorVanished("an approximant denominator changes sign at verification sample " +
                                  std::to_string(first_bad));
    }
    result.sup_error = sup;
    result.num_degree = circuit.num_degree();
    result.den_degree = circuit.den_degree();
    result.degree = circuit.degree();
    result.function = std::move(circuit);
    if (result.sup_error.compare(epsilon) > 0) {
        throw ApproximationBudgetExceeded("measured sup-error " + decimal_string(result.sup_error) + " exceeds epsilon " +
                                          format_rational(epsilon));
    }
    return result;
}

std::string relu_bound_quantity(std::uint32_t h, std::uint32_t m, std::uint32_t l, const Rational& gamma) {
    if (l == 0 || gamma <= 0) return "undefined";
    // h m^l ln(2l/gamma)^(2l)
    BigFloat log_term = big_log(BigFloat(Rational(2 * l) / gamma));
    BigFloat value{Rational(h)};
    for (std::uint32_t i = 0; i < l; ++i) value *= BigFloat(Rational(m));
    for (std::uint32_t i = 0; i < 2 * l; ++i) value *= log_term;
    return decimal_string(value);
}

BoundReport theorem2_report(const LayerSpec& layer, const Rational& tau, const Rational& gamma,
                            const Theorem2Options& options) {
    const ReluPost& post = layer.relu_post();
    const std::uint32_t n = layer.n();
    if (n > options.cap || n > kDenseCubeLimit) {
        throw ScaleCapExceeded("n = " + std::to_string(n) + " exceeds the exhaustive cap " + std::to_string(options.cap));
    }
    if (gamma <= 0) throw ValidationError("gamma must be positive");
    const ReluNetwork& net = post.network;

    BoundReport report;
    report.theorem = 2;
    report.n = n;
    report.h = layer.h();
    report.m = static_cast<std::uint32_t>(net.width());
    report.l = static_cast<std::uint32_t>(net.depth());
    report.tau = tau;
    report.gamma = gamma;
    report.bound = Rational(n, 4);
    report.bound.canonicalize();
    report.relu_bound_quantity = relu_bound_quantity(report.h, report.m, report.l, gamma);

    const std::size_t size = cube_size(n);
    std::vector<std::vector<Rational>> sums(size);
    RealTable u{n, std::vector<Rational>(size)};
    for (CubeMask x = 0; x < size; ++x) {
        sums[x] = layer_sum_eval(layer, x);
        for (std::size_t k = 0; k < sums[x].size(); ++k) {
            if (abs(sums[x][k]) > 1) {
                throw RangeAssumptionViolated("head sum coordinate " + std::to_string(k + 1) + " at x = " +
                                              bitstring(x, n) + " is " + format_rational(sums[x][k]) +
                                              ", outside [-1, 1]");
            }
        }
        u.values[x] = net.evaluate(sums[x]);
    }
    const BooleanTable target = parity(n);
    report.hypothesis_met = margin_represents(u, target, tau, gamma);
    if (!report.hypothesis_met) {
        report.witness = "hypothesis unmet: the layer does not (tau, gamma)-represent parity; no bound asserted";
        return report;
    }

    const Rational half_gamma = gamma / 2;
    const Rational epsilon = half_gamma > 1 ? Rational(1) : half_gamma;
    report.epsilon = epsilon;
    ApproximationResult approx = approximate_network(net, epsilon, options.approximation);
    report.newman_k = approx.k;
    report.approximation_error = decimal_string(approx.sup_error);
    report.grid_points = approx.grid_points;
    const MultivariateRationalFunction& v = approx.function;

    RealTable v_table{n, std::vector<Rational>(size)};
    for (CubeMask x = 0; x < size; ++x) v_table.values[x] = v.evaluate(sums[x]);
    report.margin_inequalities_hold = margin_represents(v_table, target, tau, gamma / 2);

    std::vector<LoweredHead> lowered;
    for (const auto& head : layer.heads()) lowered.push_back(head_to_rational(head));
    const CommonDenominator common = common_denominator(lowered);
    const std::uint32_t p = approx.degree;
    CubePolynomial num = homogenize_pointwise(
        [&](std::span<const Rational> y) -> Rational { return v.evaluate_pair(y).numerator; }, common.numerators,
        common.denominator, p);
    CubePolynomial den = homogenize_pointwise(
        [&](std::span<const Rational> y) -> Rational { return v.evaluate_pair(y).denominator; }, common.numerators,
        common.denominator, p);
    const CubeRationalFunction compiled = CubeRationalFunction::make(std::move(num), std::move(den), options.cap);
    const RealTable compiled_table = function_table(compiled, options.cap);
    if (compiled_table.values != v_table.values) {
        throw std::logic_error("compiled approximant disagrees with direct evaluation");
    }

    report.p = p;
    report.achieved_degree = compiled.degree();
    report.sign_represents = sign_represents(shifted(compiled_table, -tau), target);
    report.satisfied = Rational(report.h * p) >= report.bound;
    report.contradiction = report.sign_represents && !report.satisfied;
    report.witness = std::string(report.sign_represents ? "v(Y(x)) - tau sign-represents parity"
                                                        : "v(Y(x)) - tau does not sign-represent parity") +
                     "; hp = " + std::to_string(report.h * p) + ", n/4 = " + format_rational(report.bound);
    return report;
}

}  // namespace attnrat
