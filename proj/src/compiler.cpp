#include "attnrat/compiler.hpp"

#include "attnrat/errors.hpp"
#include "attnrat/kernels.hpp"

#include <algorithm>
#include <string>

namespace attnrat {

CubeRationalFunction::CubeRationalFunction(CubePolynomial numerator, CubePolynomial denominator, bool positive,
                                           bool certified)
    : numerator_(std::move(numerator)),
      denominator_(std::move(denominator)),
      denominator_positive_(positive),
      denominator_certified_(certified) {
    if (numerator_.arity() != denominator_.arity()) {
        throw ValidationError("rational function: numerator and denominator arities differ");
    }
    if (denominator_.is_zero()) throw DenominatorVanished("rational function: zero denominator");
}

CubeRationalFunction CubeRationalFunction::make(CubePolynomial numerator, CubePolynomial denominator,
                                                std::uint32_t cap) {
    const std::uint32_t n = denominator.arity();
    if (n > cap || n > kDenseCubeLimit) {
        throw ScaleCapExceeded("denominator check needs 2^" + std::to_string(n) + " evaluations; cap is " +
                               std::to_string(std::min(cap, kDenseCubeLimit)));
    }
    const auto values = kernels::cube_values(denominator);
    auto zero = std::find(values.begin(), values.end(), Rational(0));
    if (zero != values.end()) {
        auto x = static_cast<CubeMask>(zero - values.begin());
        throw DenominatorVanished("compiled denominator vanishes at x = " + bitstring(x, n));
    }
    bool positive = std::all_of(values.begin(), values.end(), [](const Rational& v) { return v > 0; });
    return CubeRationalFunction(std::move(numerator), std::move(denominator), positive, true);
}

CubeRationalFunction CubeRationalFunction::trusted(CubePolynomial numerator, CubePolynomial denominator,
                                                   bool positive) {
    return CubeRationalFunction(std::move(numerator), std::move(denominator), positive, false);
}

std::uint32_t CubeRationalFunction::degree() const {
    return std::max(numerator_.degree(), denominator_.degree());
}

Rational CubeRationalFunction::evaluate(CubeMask x) const {
    Rational den = denominator_.evaluate(x);
    if (den == 0) throw DenominatorVanished("rational function denominator vanishes at x = " + bitstring(x, arity()));
    return numerator_.evaluate(x) / den;
}

Polynomial indicator_poly(int a, int b, std::uint32_t last_index, std::uint32_t position_index,
                          std::uint32_t arity) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) throw ValidationError("indicator_poly: a and b must be bits");
    auto factor = [arity](int bit, std::uint32_t index) {
        Polynomial f = Polynomial::constant(arity, 1 - bit);
        f.add_term(Monomial::variable(index), 2 * bit - 1);
        return f;
    };
    return poly_mul(factor(a, last_index), factor(b, position_index));
}

namespace {

// sum over positions and bit pairs of coeff(i, a, b) * indicator, unreduced.
template <class Coeff>
Polynomial weighted_indicator_sum(const HeadSpec& head, Coeff coeff) {
    const std::uint32_t n = head.n();
    Polynomial sum(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                Rational c = coeff(i, a, b);
                if (c == 0) continue;
                sum = poly_add(sum, indicator_poly(a, b, n - 1, i, n).scaled(c));
            }
        }
    }
    return sum;
}

std::vector<std::vector<Rational>> values_of(std::span<const CubePolynomial> polys) {
    std::vector<std::vector<Rational>> out;
    out.reserve(polys.size());
    for (const auto& p : polys) out.push_back(kernels::cube_values(p));
    return out;
}

void check_lift_inputs(const Polynomial& p_poly, std::span<const CubePolynomial> m, const CubePolynomial& s,
                       std::uint32_t p) {
    if (p_poly.arity() != m.size()) {
        throw ValidationError("homogenize_compose: polynomial arity " + std::to_string(p_poly.arity()) +
                              " does not match " + std::to_string(m.size()) + " coordinate numerators");
    }
    if (total_degree(p_poly) > p) {
        throw ValidationError("homogenize_compose: total degree " + std::to_string(total_degree(p_poly)) +
                              " exceeds the declared bound p = " + std::to_string(p));
    }
    for (const auto& mk : m) {
        if (mk.arity() != s.arity()) throw ValidationError("homogenize_compose: arity mismatch");
    }
}

}  // namespace

LoweredHead head_to_rational(const HeadSpec& head) {
    const std::uint32_t n = head.n();
    // Reduced indicators, shared by the numerators and the denominator.
    std::vector<std::array<std::array<CubePolynomial, 2>, 2>> indicators(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) indicators[i][a][b] = multilinear_reduce(indicator_poly(a, b, n - 1, i, n));
        }
    }
    LoweredHead out;
    out.numerators.assign(head.d(), CubePolynomial(n));
    out.denominator = CubePolynomial(n);
    out.formal_degree = 2;
    for (std::uint32_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const Rational& w = head.weight(i, a, b);
                const auto& ind = indicators[i][a][b];
                out.denominator = cube_add(out.denominator, ind.scaled(w));
                for (std::uint32_t k = 0; k < head.d(); ++k) {
                    out.numerators[k] = cube_add(out.numerators[k], ind.scaled(w * head.value(i, b)[k]));
                }
            }
        }
    }
    return out;
}

CommonDenominator common_denominator(std::span<const LoweredHead> heads) {
    if (heads.empty()) throw ValidationError("common_denominator: no heads");
    const std::uint32_t n = heads.front().denominator.arity();
    const std::size_t d = heads.front().numerators.size();
    CommonDenominator out;
    for (const auto& head : heads) {
        if (head.denominator.arity() != n || head.numerators.size() != d) {
            throw ValidationError("common_denominator: heads disagree on n or d");
        }
        out.formal_degree += head.formal_degree;
    }

    if (n > kDenseCubeLimit) {
        out.denominator = CubePolynomial::constant(n, 1);
        for (const auto& head : heads) out.denominator = cube_mul(out.denominator, head.denominator);
        out.numerators.assign(d, CubePolynomial(n));
        for (std::size_t j = 0; j < heads.size(); ++j) {
            CubePolynomial others = CubePolynomial::constant(n, 1);
            for (std::size_t l = 0; l < heads.size(); ++l) {
                if (l != j) others = cube_mul(others, heads[l].denominator);
            }
            for (std::size_t k = 0; k < d; ++k) {
                out.numerators[k] = cube_add(out.numerators[k], cube_mul(heads[j].numerators[k], others));
            }
        }
        return out;
    }

    const std::size_t size = cube_size(n);
    std::vector<std::vector<Rational>> den_values;
    std::vector<std::vector<std::vector<Rational>>> num_values;
    for (const auto& head : heads) {
        den_values.push_back(kernels::cube_values(head.denominator));
        num_values.push_back(values_of(head.numerators));
    }
    const std::size_t h = heads.size();
    std::vector<Rational> s_values(size);
    std::vector<std::vector<Rational>> m_values(d, std::vector<Rational>(size));
    const std::int64_t isize = static_cast<std::int64_t>(size);
#pragma omp parallel for schedule(static) if (size >= 1024)
    for (std::int64_t xi = 0; xi < isize; ++xi) {
        const auto x = static_cast<std::size_t>(xi);
        Rational s = 1;
        for (std::size_t j = 0; j < h; ++j) s *= den_values[j][x];
        s_values[x] = s;
        for (std::size_t k = 0; k < d; ++k) {
            Rational m = 0;
            for (std::size_t j = 0; j < h; ++j) {
                Rational term = num_values[j][k][x];
                for (std::size_t l = 0; l < h && term != 0; ++l) {
                    if (l != j) term *= den_values[l][x];
                }
                m += term;
            }
            m_values[k][x] = m;
        }
    }
    out.denominator = kernels::from_cube_values(n, std::move(s_values));
    for (std::size_t k = 0; k < d; ++k) out.numerators.push_back(kernels::from_cube_values(n, std::move(m_values[k])));
    return out;
}

CubePolynomial homogenize_compose(const Polynomial& p_poly, std::span<const CubePolynomial> m,
                                  const CubePolynomial& s, std::uint32_t p) {
    check_lift_inputs(p_poly, m, s, p);
    const std::uint32_t n = s.arity();
    if (n > kDenseCubeLimit) {
        CubePolynomial out(n);
        for (const auto& [alpha, c] : p_poly.terms()) {
            CubePolynomial term = cube_pow(s, p - alpha.degree()).scaled(c);
            for (const auto& [k, e] : alpha.factors()) term = cube_mul(term, cube_pow(m[k], e));
            out = cube_add(out, term);
        }
        return out;
    }
    const auto m_values = values_of(m);
    const auto s_values = kernels::cube_values(s);
    auto lifted = kernels::tabulate(n, [&](CubeMask x) -> Rational {
        Rational value = 0;
        for (const auto& [alpha, c] : p_poly.terms()) {
            Rational term = c * power(s_values[x], p - alpha.degree());
            for (const auto& [k, e] : alpha.factors()) term *= power(m_values[k][x], e);
            value += term;
        }
        return value;
    });
    return kernels::from_cube_values(n, std::move(lifted));
}

CubePolynomial homogenize_pointwise(const std::function<Rational(std::span<const Rational>)>& value_at,
                                    std::span<const CubePolynomial> m, const CubePolynomial& s, std::uint32_t p) {
    const std::uint32_t n = s.arity();
    const auto m_values = values_of(m);
    const auto s_values = kernels::cube_values(s);
    auto lifted = kernels::tabulate(n, [&](CubeMask x) -> Rational {
        const Rational& sx = s_values[x];
        if (sx <= 0) throw DenominatorVanished("common denominator S is not positive at x = " + bitstring(x, n));
        std::vector<Rational> y(m.size());
        for (std::size_t k = 0; k < m.size(); ++k) y[k] = m_values[k][x] / sx;
        return power(sx, p) * value_at(y);
    });
    return kernels::from_cube_values(n, std::move(lifted));
}

namespace reference {

LoweredHead head_to_rational(const HeadSpec& head) {
    LoweredHead out;
    Polynomial den = weighted_indicator_sum(head, [&](std::uint32_t i, int a, int b) { return head.weight(i, a, b); });
    out.formal_degree = total_degree(den);
    out.denominator = multilinear_reduce(den);
    for (std::uint32_t k = 0; k < head.d(); ++k) {
        Polynomial num = weighted_indicator_sum(
            head, [&](std::uint32_t i, int a, int b) -> Rational { return head.weight(i, a, b) * head.value(i, b)[k]; });
        out.formal_degree = std::max(out.formal_degree, total_degree(num));
        out.numerators.push_back(multilinear_reduce(num));
    }
    return out;
}

CommonDenominator common_denominator(std::span<const LoweredHead> heads) {
    const std::uint32_t n = heads.front().denominator.arity();
    const std::size_t d = heads.front().numerators.size();
    Polynomial s = Polynomial::constant(n, 1);
    for (const auto& head : heads) s = poly_mul(s, head.denominator.to_polynomial());
    CommonDenominator out;
    out.formal_degree = total_degree(s);
    out.denominator = multilinear_reduce(s);
    for (std::size_t k = 0; k < d; ++k) {
        Polynomial mk(n);
        for (std::size_t j = 0; j < heads.size(); ++j) {
            Polynomial term = heads[j].numerators[k].to_polynomial();
            for (std::size_t l = 0; l < heads.size(); ++l) {
                if (l != j) term = poly_mul(term, heads[l].denominator.to_polynomial());
            }
            mk = poly_add(mk, term);
        }
        out.formal_degree = std::max(out.formal_degree, total_degree(mk));
        out.numerators.push_back(multilinear_reduce(mk));
    }
    return out;
}

CubePolynomial homogenize_compose(const Polynomial& p_poly, std::span<const CubePolynomial> m,
                                  const CubePolynomial& s, std::uint32_t p) {
    check_lift_inputs(p_poly, m, s, p);
    const std::uint32_t n = s.arity();
    const Polynomial s_poly = s.to_polynomial();
    Polynomial lifted(n);
    for (const auto& [alpha, c] : p_poly.terms()) {
        Polynomial term = poly_pow(s_poly, p - alpha.degree()).scaled(c);
        for (const auto& [k, e] : alpha.factors()) term = poly_mul(term, poly_pow(m[k].to_polynomial(), e));
        lifted = poly_add(lifted, term);
    }
    return multilinear_reduce(lifted);
}

}  // namespace reference

CompiledLayer compile_layer(const LayerSpec& layer, const CompileOptions& options) {
    const auto& post = layer.rational_post();
    const std::uint32_t n = layer.n();
    const std::uint32_t p = post.degree_bound;
    const bool q_constant = total_degree(post.denominator) == 0;
    const bool exhaustive = n <= options.cap && n <= kDenseCubeLimit;
    if (!exhaustive && !q_constant && !options.assume_nonvanishing) {
        throw ScaleCapExceeded("n = " + std::to_string(n) + " exceeds the exhaustive cap " +
                               std::to_string(options.cap) +
                               "; a non-constant post-processing denominator cannot be certified nonvanishing");
    }

    std::vector<LoweredHead> lowered;
    lowered.reserve(layer.h());
    for (const auto& head : layer.heads()) lowered.push_back(head_to_rational(head));
    const CommonDenominator common = common_denominator(lowered);

    CubePolynomial p_lift = homogenize_compose(post.numerator, common.numerators, common.denominator, p);
    CubePolynomial q_lift = homogenize_compose(post.denominator, common.numerators, common.denominator, p);

    CompiledLayer out{
        exhaustive ? CubeRationalFunction::make(std::move(p_lift), std::move(q_lift), options.cap)
                   : CubeRationalFunction::trusted(std::move(p_lift), std::move(q_lift),
                                                   q_constant && post.denominator.terms().begin()->second > 0),
    };
    out.h = layer.h();
    out.declared_p = p;
    out.degree_bound = 2 * layer.h() * p;
    out.formal_degree = common.formal_degree * p;
    out.nonvanishing_assumed = !exhaustive && !q_constant;
    return out;
}

EquivalenceReport verify_equivalence(const LayerSpec& layer, const CubeRationalFunction& compiled,
                                     std::uint32_t cap) {
    const std::uint32_t n = layer.n();
    if (n > cap || n > kDenseCubeLimit) {
        throw ScaleCapExceeded("verify_equivalence: n = " + std::to_string(n) + " exceeds the exhaustive cap " +
                               std::to_string(std::min(cap, kDenseCubeLimit)));
    }
    if (compiled.arity() != n) throw ValidationError("verify_equivalence: compiled arity does not match the layer");
    EquivalenceReport report;
    report.n = n;
    if (layer.has_rational_post()) report.degree_bound = 2 * layer.h() * layer.rational_post().degree_bound;
    report.achieved_num_degree = compiled.numerator().degree();
    report.achieved_den_degree = compiled.denominator().degree();

    const auto num = kernels::cube_values(compiled.numerator());
    const auto den = kernels::cube_values(compiled.denominator());
    auto compiled_at = [&](CubeMask x) -> Rational {
        if (den[x] == 0) throw DenominatorVanished("compiled denominator vanishes at x = " + bitstring(x, n));
        return num[x] / den[x];
    };
    const std::size_t first =
        kernels::first_match(n, [&](CubeMask x) { return layer_eval(layer, x) != compiled_at(x); });
    report.equivalence_checked = true;
    if (first < cube_size(n)) {
        report.points_checked = first + 1;
        report.mismatch = Mismatch{first, layer_eval(layer, first), compiled_at(first)};
    } else {
        report.points_checked = cube_size(n);
    }
    return report;
}

}  // namespace attnrat
