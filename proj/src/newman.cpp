#include "attnrat/newman.hpp"

#include "attnrat/errors.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

namespace attnrat {

namespace {

std::shared_ptr<const std::vector<BigFloat>> to_floats(const std::vector<Rational>& coeffs) {
    auto out = std::make_shared<std::vector<BigFloat>>();
    out->reserve(coeffs.size());
    for (const auto& c : coeffs) out->emplace_back(c);
    return out;
}

void horner(const std::vector<BigFloat>& coeffs, mpfr_srcptr x, mpfr_ptr out) {
    mpfr_set_zero(out, 1);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) mpfr_fma(out, out, x, it->get(), MPFR_RNDN);
}

Rational horner(const std::vector<Rational>& coeffs, const Rational& x) {
    Rational acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

}  // namespace

UnivariateRational::UnivariateRational(Polynomial numerator, Polynomial denominator, Rational lo, Rational hi)
    : numerator_(std::move(numerator)), denominator_(std::move(denominator)), lo_(std::move(lo)), hi_(std::move(hi)) {
    if (numerator_.arity() != 1 || denominator_.arity() != 1) {
        throw ValidationError("univariate rational: polynomials must have arity 1");
    }
    if (denominator_.is_zero()) throw ValidationError("univariate rational: zero denominator");
    if (lo_ > hi_) throw ValidationError("univariate rational: empty domain");
    num_coeffs_ = univariate_coefficients(numerator_);
    den_coeffs_ = univariate_coefficients(denominator_);
    num_float_ = to_floats(num_coeffs_);
    den_float_ = to_floats(den_coeffs_);
}

std::uint32_t UnivariateRational::degree() const {
    return std::max(univariate_degree(numerator_), univariate_degree(denominator_));
}

Rational UnivariateRational::evaluate(const Rational& x) const {
    const Rational den = horner(den_coeffs_, x);
    if (den == 0) throw DenominatorVanished("univariate rational: denominator vanishes at " + format_rational(x));
    return horner(num_coeffs_, x) / den;
}

int UnivariateRational::evaluate(mpfr_srcptr x, mpfr_ptr value, mpfr_ptr scratch) const {
    horner(*den_float_, x, scratch);
    const int sign = mpfr_sgn(scratch);
    horner(*num_float_, x, value);
    mpfr_div(value, value, scratch, MPFR_RNDN);
    return sign;
}

BigFloat UnivariateRational::evaluate(const BigFloat& x) const {
    BigFloat value(x.precision());
    BigFloat scratch(x.precision());
    if (evaluate(x.get(), value.get(), scratch.get()) == 0) {
        throw DenominatorVanished("univariate rational: denominator vanishes at " + decimal_string(x));
    }
    return value;
}

UnivariateRational UnivariateRational::rescaled(const Rational& r) const {
    if (r <= 0) throw ValidationError("rescaled: radius must be positive");
    // r f(x/r) = r N(x/r) / D(x/r); multiply through by r^K.
    const std::uint32_t k = degree();
    std::vector<Rational> r_pow(k + 2, Rational(1));
    for (std::uint32_t i = 1; i < r_pow.size(); ++i) r_pow[i] = r_pow[i - 1] * r;
    std::vector<Rational> num(num_coeffs_.size());
    std::vector<Rational> den(den_coeffs_.size());
    for (std::size_t i = 0; i < num.size(); ++i) num[i] = num_coeffs_[i] * r_pow[k + 1 - i];
    for (std::size_t i = 0; i < den.size(); ++i) den[i] = den_coeffs_[i] * r_pow[k - i];
    return UnivariateRational(univariate_from_coefficients(num), univariate_from_coefficients(den), lo_ * r, hi_ * r);
}

Rational newman_xi(std::uint32_t k) {
    if (k < 2) throw ValidationError("newman: k must be at least 2");
    BigFloat root = big_sqrt(BigFloat(Rational(k)));
    BigFloat xi = big_exp(-(BigFloat(Rational(1)) / root));
    Rational tol(1);
    mpq_div_2exp(tol.get_mpq_t(), tol.get_mpq_t(), 65);
    return rationalize(xi, tol);
}

UnivariateRational newman_abs(std::uint32_t k) {
    const Rational xi = newman_xi(k);
    // Integer-scaled factors (b^i x + a^i) for xi = a/b; the common scale cancels in r.
    const Integer a = xi.get_num();
    const Integer b = xi.get_den();
    std::vector<Integer> p{1};
    Integer a_pow = 1;
    Integer b_pow = 1;
    for (std::uint32_t i = 1; i < k; ++i) {
        a_pow *= a;
        b_pow *= b;
        std::vector<Integer> next(p.size() + 1, Integer(0));
        for (std::size_t j = 0; j < p.size(); ++j) {
            next[j] += p[j] * a_pow;
            next[j + 1] += p[j] * b_pow;
        }
        p = std::move(next);
    }
    // p(x) - p(-x) keeps the odd coefficients (doubled), p(x) + p(-x) the even ones.
    std::vector<Rational> num(p.size() + 1, Rational(0));
    std::vector<Rational> den(p.size(), Rational(0));
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j % 2 == 1) {
            num[j + 1] = p[j];
        } else {
            den[j] = p[j];
        }
    }
    return UnivariateRational(univariate_from_coefficients(num), univariate_from_coefficients(den), -1, 1);
}

UnivariateRational rational_relu(std::uint32_t k, const Rational& radius) {
    const UnivariateRational r = newman_abs(k);
    // (x + N/D) / 2 = (x D + N) / (2 D)
    const std::vector<Rational>& n = r.numerator_coefficients();
    const std::vector<Rational>& d = r.denominator_coefficients();
    std::vector<Rational> num(std::max(n.size(), d.size() + 1), Rational(0));
    std::vector<Rational> den(d.size());
    for (std::size_t i = 0; i < n.size(); ++i) num[i] += n[i];
    for (std::size_t i = 0; i < d.size(); ++i) {
        num[i + 1] += d[i];
        den[i] = 2 * d[i];
    }
    UnivariateRational unit(univariate_from_coefficients(num), univariate_from_coefficients(den), -1, 1);
    return radius == 1 ? unit : unit.rescaled(radius);
}

BigFloat uniform_grid_point(const Rational& lo, const Rational& hi, std::size_t i, std::size_t points) {
    if (points < 2) return BigFloat(lo);
    Rational t(static_cast<unsigned long>(i), static_cast<unsigned long>(points - 1));
    t.canonicalize();
    return BigFloat(lo + (hi - lo) * t);
}

GridError gridded_sup_error(const UnivariateRational& f, const std::function<BigFloat(const BigFloat&)>& target,
                            std::size_t points) {
    if (points < 2) throw ValidationError("gridded_sup_error: need at least 2 grid points");
    const auto count = static_cast<std::int64_t>(points);
    GridError result;
    std::int64_t best_index = 0;
    int reference_sign = 0;
    {
        BigFloat x = uniform_grid_point(f.lo(), f.hi(), 0, points);
        BigFloat value, scratch;
        reference_sign = f.evaluate(x.get(), value.get(), scratch.get());
    }
    bool consistent = reference_sign != 0;
#pragma omp parallel
    {
        BigFloat local_max;
        std::int64_t local_index = -1;
        bool local_consistent = true;
        BigFloat value, scratch;
#pragma omp for schedule(static)
        for (std::int64_t i = 0; i < count; ++i) {
            BigFloat x = uniform_grid_point(f.lo(), f.hi(), static_cast<std::size_t>(i), points);
            if (f.evaluate(x.get(), value.get(), scratch.get()) != reference_sign) local_consistent = false;
            BigFloat err = (value - target(x)).abs();
            if (local_index < 0 || local_max < err) {
                local_max = err;
                local_index = i;
            }
        }
#pragma omp critical(attnrat_grid_error)
        {
            if (!local_consistent) consistent = false;
            if (local_index >= 0 &&
                (result.sup_error < local_max || (!(local_max < result.sup_error) && local_index < best_index))) {
                result.sup_error = local_max;
                best_index = local_index;
            }
        }
    }
    result.argmax = uniform_grid_point(f.lo(), f.hi(), static_cast<std::size_t>(best_index), points);
    result.denominator_sign_consistent = consistent;
    return result;
}

GridError newman_abs_error(std::uint32_t k, std::size_t points) {
    return gridded_sup_error(newman_abs(k), [](const BigFloat& x) { return x.abs(); }, points);
}

GridError rational_relu_error(std::uint32_t k, const Rational& radius, std::size_t points) {
    using Key = std::tuple<std::uint32_t, std::string, std::size_t>;
    static std::mutex mutex;
    static std::map<Key, GridError> cache;
    const Key key{k, format_rational(radius), points};
    {
        std::lock_guard<std::mutex> lock(mutex);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    GridError err = gridded_sup_error(
        rational_relu(k, radius),
        [](const BigFloat& x) { return x.sign() > 0 ? x : BigFloat(x.precision()); }, points);
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, err);
    return err;
}

}  // namespace attnrat
