#include "attnrat/parity.hpp"

#include "attnrat/errors.hpp"
#include "attnrat/exact_lp.hpp"
#include "attnrat/kernels.hpp"
#include "attnrat/random.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace attnrat {

namespace {

void require_same_n(std::uint32_t a, std::uint32_t b, const char* op) {
    if (a != b) throw ValidationError(std::string(op) + ": tables have different input lengths");
}

void require_table(const RealTable& f) {
    if (f.values.size() != cube_size(f.n)) throw ValidationError("truth table length must be 2^n");
}

void require_table(const BooleanTable& g) {
    if (g.values.size() != cube_size(g.n)) throw ValidationError("truth table length must be 2^n");
}

void require_cap(std::uint32_t n, std::uint32_t cap) {
    if (n > cap || n > kDenseCubeLimit) {
        throw ScaleCapExceeded("n = " + std::to_string(n) + " exceeds the exhaustive cap " +
                               std::to_string(std::min(cap, kDenseCubeLimit)));
    }
}

}  // namespace

BooleanTable parity(std::uint32_t n) {
    require_cap(n, kDenseCubeLimit);
    BooleanTable g{n, std::vector<std::uint8_t>(cube_size(n))};
    for (std::size_t x = 0; x < g.values.size(); ++x) g.values[x] = static_cast<std::uint8_t>(std::popcount(x) & 1);
    return g;
}

BooleanTable majority(std::uint32_t n) {
    require_cap(n, kDenseCubeLimit);
    BooleanTable g{n, std::vector<std::uint8_t>(cube_size(n))};
    for (std::size_t x = 0; x < g.values.size(); ++x) {
        g.values[x] = static_cast<std::uint8_t>(2 * static_cast<std::uint32_t>(std::popcount(x)) > n);
    }
    return g;
}

BooleanTable threshold_table(const RealTable& f, const Rational& threshold) {
    require_table(f);
    BooleanTable g{f.n, std::vector<std::uint8_t>(f.values.size())};
    for (std::size_t x = 0; x < f.values.size(); ++x) g.values[x] = f.values[x] > threshold ? 1 : 0;
    return g;
}

RealTable shifted(const RealTable& f, const Rational& offset) {
    RealTable out = f;
    for (auto& v : out.values) v += offset;
    return out;
}

RealTable layer_table(const LayerSpec& layer, std::uint32_t cap) {
    require_cap(layer.n(), cap);
    return RealTable{layer.n(), kernels::tabulate(layer.n(), [&](CubeMask x) -> Rational { return layer_eval(layer, x); })};
}

RealTable function_table(const CubeRationalFunction& f, std::uint32_t cap) {
    const std::uint32_t n = f.arity();
    require_cap(n, cap);
    auto num = kernels::cube_values(f.numerator());
    const auto den = kernels::cube_values(f.denominator());
    for (std::size_t x = 0; x < num.size(); ++x) {
        if (den[x] == 0) throw DenominatorVanished("denominator vanishes at x = " + bitstring(x, n));
        num[x] /= den[x];
    }
    return RealTable{n, std::move(num)};
}

bool sign_represents(const RealTable& f, const BooleanTable& g) {
    require_table(f);
    require_table(g);
    require_same_n(f.n, g.n, "sign_represents");
    for (std::size_t x = 0; x < f.values.size(); ++x) {
        if ((f.values[x] > 0) != (g.values[x] == 1)) return false;
    }
    return true;
}

bool margin_represents(const RealTable& f, const BooleanTable& g, const Rational& tau, const Rational& gamma) {
    require_table(f);
    require_table(g);
    require_same_n(f.n, g.n, "margin_represents");
    if (gamma <= 0) throw ValidationError("margin_represents: gamma must be positive");
    const Rational upper = tau + gamma;
    const Rational lower = tau - gamma;
    for (std::size_t x = 0; x < f.values.size(); ++x) {
        if (g.values[x] == 1 ? f.values[x] < upper : f.values[x] > lower) return false;
    }
    return true;
}

std::optional<Margin> best_margin(const RealTable& f, const BooleanTable& g) {
    require_table(f);
    require_table(g);
    require_same_n(f.n, g.n, "best_margin");
    std::optional<Rational> min_one;
    std::optional<Rational> max_zero;
    for (std::size_t x = 0; x < f.values.size(); ++x) {
        const Rational& v = f.values[x];
        if (g.values[x] == 1) {
            if (!min_one || v < *min_one) min_one = v;
        } else {
            if (!max_zero || v > *max_zero) max_zero = v;
        }
    }
    if (!min_one || !max_zero || *min_one <= *max_zero) return std::nullopt;
    return Margin{(*min_one + *max_zero) / 2, (*min_one - *max_zero) / 2};
}

Rational average_sensitivity(const BooleanTable& g) {
    require_table(g);
    Integer flips = 0;
    for (std::size_t x = 0; x < g.values.size(); ++x) {
        for (std::uint32_t i = 0; i < g.n; ++i) {
            if (g.values[x] != g.values[x ^ (std::size_t{1} << i)]) flips += 1;
        }
    }
    Rational out(flips, Integer(1) << g.n);
    out.canonicalize();
    return out;
}

Rational parity_correlation(const BooleanTable& g) {
    require_table(g);
    Integer sum = 0;
    for (std::size_t x = 0; x < g.values.size(); ++x) {
        const bool agree = (g.values[x] & 1U) == static_cast<unsigned>(std::popcount(x) & 1);
        sum += agree ? 1 : -1;
    }
    Rational out(abs(sum), Integer(1) << g.n);
    out.canonicalize();
    return out;
}

PtfFeasibility ptf_parity_feasible(std::uint32_t n, std::uint32_t k) {
    if (n > kPtfLpCap) {
        throw ScaleCapExceeded("ptf_parity_feasible: n = " + std::to_string(n) + " exceeds the exact-LP cap " +
                               std::to_string(kPtfLpCap));
    }
    if (k > n) throw ValidationError("ptf_parity_feasible: requires k <= n");
    std::vector<CubeMask> monomials;
    for (CubeMask s = 0; s < cube_size(n); ++s) {
        if (static_cast<std::uint32_t>(std::popcount(s)) <= k) monomials.push_back(s);
    }
    lp::Matrix a(cube_size(n), std::vector<Rational>(monomials.size(), Rational(0)));
    std::vector<Rational> b(cube_size(n), Rational(1));
    for (CubeMask x = 0; x < cube_size(n); ++x) {
        const int sigma = (std::popcount(x) & 1) ? 1 : -1;
        for (std::size_t j = 0; j < monomials.size(); ++j) {
            if ((monomials[j] & x) == monomials[j]) a[x][j] = sigma;
        }
    }
    lp::InequalityResult solved = lp::solve_inequalities(a, b);
    PtfFeasibility out;
    out.feasible = solved.feasible;
    out.pivots = solved.pivots;
    if (solved.feasible) {
        if (!lp::satisfies(a, b, solved.point)) throw std::logic_error("ptf_parity_feasible: invalid witness");
        CubePolynomial witness(n);
        for (std::size_t j = 0; j < monomials.size(); ++j) witness.add_term(monomials[j], solved.point[j]);
        out.witness = std::move(witness);
    } else {
        if (!lp::is_farkas_certificate(a, b, solved.farkas)) {
            throw std::logic_error("ptf_parity_feasible: invalid infeasibility certificate");
        }
        out.farkas = std::move(solved.farkas);
    }
    return out;
}

bool symmetric_parity_feasible(std::uint32_t n, std::uint32_t k) {
    lp::Matrix a(n + 1, std::vector<Rational>(k + 1, Rational(0)));
    std::vector<Rational> b(n + 1, Rational(1));
    for (std::uint32_t w = 0; w <= n; ++w) {
        const int sigma = (w & 1U) ? 1 : -1;
        Rational wp = 1;
        for (std::uint32_t j = 0; j <= k; ++j) {
            a[w][j] = sigma * wp;
            wp *= w;
        }
    }
    return lp::solve_inequalities(a, b).feasible;
}

Polynomial lagrange_interpolant(const std::vector<Rational>& z, const std::vector<Rational>& y) {
    if (z.size() != y.size() || z.empty()) throw ValidationError("lagrange_interpolant: need matching, nonempty nodes");
    // Newton divided differences, then expansion of the Newton form.
    std::vector<Rational> coef = y;
    for (std::size_t level = 1; level < z.size(); ++level) {
        for (std::size_t i = z.size() - 1; i >= level; --i) {
            const Rational gap = z[i] - z[i - level];
            if (gap == 0) throw ValidationError("lagrange_interpolant: repeated node");
            coef[i] = (coef[i] - coef[i - 1]) / gap;
        }
    }
    Polynomial result = Polynomial::constant(1, coef.back());
    for (std::size_t i = z.size() - 1; i-- > 0;) {
        std::vector<Rational> linear{-z[i], 1};
        result = poly_add(poly_mul(result, univariate_from_coefficients(linear)), Polynomial::constant(1, coef[i]));
    }
    return result;
}

HeadSpec uniform_mean_head(std::uint32_t n) {
    std::vector<WeightTable> weights(n);
    std::vector<ValuePair> values(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (auto& row : weights[i]) row = {Rational(1), Rational(1)};
        values[i] = {std::vector<Rational>{0}, std::vector<Rational>{1}};
    }
    return HeadSpec(n, 1, std::move(weights), std::move(values));
}

LayerSpec build_parity_layer(std::uint32_t n) {
    if (n < 1) throw ValidationError("build_parity_layer: n must be at least 1");
    std::vector<Rational> nodes;
    std::vector<Rational> targets;
    for (std::uint32_t k = 0; k <= n; ++k) {
        nodes.push_back(Rational(k, n));
        nodes.back().canonicalize();
        targets.push_back((k & 1U) ? 1 : -1);
    }
    Polynomial u = lagrange_interpolant(nodes, targets);
    return LayerSpec({uniform_mean_head(n)}, RationalPost{u, Polynomial::constant(1, 1), n});
}

BoundReport theorem1_report(const LayerSpec& layer, std::uint32_t cap) {
    const std::uint32_t n = layer.n();
    require_cap(n, cap);
    CompileOptions options;
    options.cap = cap;
    const CompiledLayer compiled = compile_layer(layer, options);
    const RealTable table = function_table(compiled.function, cap);
    const BooleanTable target = parity(n);

    BoundReport report;
    report.theorem = 1;
    report.n = n;
    report.h = layer.h();
    report.p = compiled.declared_p;
    report.bound = Rational(n, 4);
    report.bound.canonicalize();
    report.achieved_degree = compiled.function.degree();
    report.sign_represents = sign_represents(table, target);
    report.satisfied = Rational(report.h * report.p) >= report.bound;
    report.contradiction = report.sign_represents && !report.satisfied;
    if (report.sign_represents) {
        report.witness = "sign-represents parity; hp = " + std::to_string(report.h * report.p) +
                         " >= n/4 = " + format_rational(report.bound) + (report.satisfied ? "" : " VIOLATED");
    } else {
        std::size_t bad = 0;
        while ((table.values[bad] > 0) == (target.values[bad] == 1)) ++bad;
        report.witness = "does not sign-represent parity; first failing x = " + bitstring(bad, n) +
                         " (value " + format_rational(table.values[bad]) + ", parity " +
                         std::to_string(target.values[bad]) + ")";
    }
    return report;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> forbidden_shapes(std::uint32_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> shapes;
    // 2hp < n/2  <=>  4hp < n
    for (std::uint32_t h = 1; 4 * h < n; ++h) {
        for (std::uint32_t p = 1; 4 * h * p < n; ++p) shapes.emplace_back(h, p);
    }
    return shapes;
}

namespace {

Polynomial random_post_polynomial(RandomStream& rng, std::uint32_t d, std::uint32_t p) {
    Polynomial poly(d);
    const auto terms = rng.integer(1, 4);
    for (std::int64_t t = 0; t < terms; ++t) {
        std::vector<Monomial::Factor> factors;
        const auto deg = rng.integer(0, p);
        for (std::int64_t e = 0; e < deg; ++e) factors.emplace_back(static_cast<std::uint32_t>(rng.integer(0, d - 1)), 1);
        poly.add_term(Monomial(std::move(factors)), rng.small_rational(4, 3));
    }
    return poly;
}

LayerSpec draw_rational_layer(RandomStream& rng, std::uint32_t n, std::uint32_t d, std::uint32_t h, std::uint32_t p,
                              std::uint64_t* resampled) {
    std::vector<HeadSpec> heads;
    for (std::uint32_t j = 0; j < h; ++j) {
        std::vector<WeightTable> weights(n);
        std::vector<ValuePair> values(n);
        for (std::uint32_t i = 0; i < n; ++i) {
            for (auto& row : weights[i]) {
                for (auto& w : row) w = rng.power_of_two(8);
            }
            for (auto& vec : values[i]) {
                vec.resize(d);
                for (auto& c : vec) c = rng.integer(-3, 3);
            }
        }
        heads.emplace_back(n, d, std::move(weights), std::move(values));
    }
    // Attained head sums, shared by every denominator draw.
    LayerSpec probe(heads, RationalPost{Polynomial(d), Polynomial::constant(d, 1), p});
    std::vector<std::vector<Rational>> sums;
    sums.reserve(cube_size(n));
    for (CubeMask x = 0; x < cube_size(n); ++x) sums.push_back(layer_sum_eval(probe, x));

    Polynomial numerator = random_post_polynomial(rng, d, p);
    for (;;) {
        Polynomial denominator = random_post_polynomial(rng, d, p);
        const bool vanishes = denominator.is_zero() ||
                              std::any_of(sums.begin(), sums.end(),
                                          [&](const std::vector<Rational>& s) { return poly_eval(denominator, s) == 0; });
        if (!vanishes) return LayerSpec(std::move(heads), RationalPost{std::move(numerator), std::move(denominator), p});
        if (resampled) ++*resampled;
    }
}

}  // namespace

LayerSpec random_rational_layer(std::uint64_t seed, std::uint32_t n, std::uint32_t d, std::uint32_t h,
                                std::uint32_t p, std::uint64_t* resampled) {
    RandomStream rng(seed);
    return draw_rational_layer(rng, n, d, h, p, resampled);
}

CampaignResult theorem1_campaign(const CampaignOptions& options) {
    const auto shapes = forbidden_shapes(options.n);
    if (shapes.empty()) {
        throw ValidationError("theorem1_campaign: no (h, p) with h, p >= 1 satisfies 2hp < n/2 for n = " +
                              std::to_string(options.n));
    }
    require_cap(options.n, kDenseCubeLimit);
    CampaignResult result;
    result.n = options.n;
    result.trials = options.trials;
    result.seed = options.seed;
    const BooleanTable target = parity(options.n);

    std::uint64_t found = 0;
    std::uint64_t contradictions = 0;
    std::uint64_t resampled = 0;
    std::uint64_t first = options.trials;
    const auto trials = static_cast<std::int64_t>(options.trials);
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : found, contradictions, resampled) reduction(min : first)
    for (std::int64_t t = 0; t < trials; ++t) {
        RandomStream rng(options.seed, static_cast<std::uint64_t>(t));
        const auto& [h, p] = shapes[static_cast<std::size_t>(rng.integer(0, static_cast<std::int64_t>(shapes.size()) - 1))];
        const auto d = static_cast<std::uint32_t>(rng.integer(1, options.max_d));
        std::uint64_t redraws = 0;
        LayerSpec layer = draw_rational_layer(rng, options.n, d, h, p, &redraws);
        resampled += redraws;
        CompileOptions compile_options;
        compile_options.cap = options.n;
        const CompiledLayer compiled = compile_layer(layer, compile_options);
        if (sign_represents(function_table(compiled.function, options.n), target)) {
            ++found;
            first = std::min(first, static_cast<std::uint64_t>(t));
            if (4 * h * p < options.n) ++contradictions;
        }
    }
    result.sign_representations = found;
    result.contradictions = contradictions;
    result.resampled = resampled;
    if (first < options.trials) result.first_representation = first;
    return result;
}

}  // namespace attnrat
