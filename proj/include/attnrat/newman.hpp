#pragma once

#include "attnrat/high_precision.hpp"
#include "attnrat/polynomial.hpp"
#include "attnrat/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace attnrat {

// numerator(x) / denominator(x) on the closed interval [lo, hi].
class UnivariateRational {
public:
    // Both polynomials must have arity 1; the denominator must be nonzero.
    UnivariateRational(Polynomial numerator, Polynomial denominator, Rational lo, Rational hi);

    const Polynomial& numerator() const { return numerator_; }
    const Polynomial& denominator() const { return denominator_; }
    // Ascending coefficient vectors.
    const std::vector<Rational>& numerator_coefficients() const { return num_coeffs_; }
    const std::vector<Rational>& denominator_coefficients() const { return den_coeffs_; }
    const Rational& lo() const { return lo_; }
    const Rational& hi() const { return hi_; }
    // max(deg numerator, deg denominator)
    std::uint32_t degree() const;

    // Throws DenominatorVanished at a root of the denominator.
    Rational evaluate(const Rational& x) const;
    // value = numerator(x) / denominator(x); returns the sign of the
    // denominator (0 leaves value unspecified).
    int evaluate(mpfr_srcptr x, mpfr_ptr value, mpfr_ptr scratch) const;
    BigFloat evaluate(const BigFloat& x) const;

    // x -> r * f(x / r) on [r lo, r hi], r > 0.
    UnivariateRational rescaled(const Rational& r) const;

private:
    Polynomial numerator_;
    Polynomial denominator_;
    Rational lo_;
    Rational hi_;
    std::vector<Rational> num_coeffs_;
    std::vector<Rational> den_coeffs_;
    // Working-precision copies for grid evaluation.
    std::shared_ptr<const std::vector<BigFloat>> num_float_;
    std::shared_ptr<const std::vector<BigFloat>> den_float_;
};

// Newman's approximant to |x| on [-1, 1] with xi = e^(-1/sqrt k) rounded to
// a rational within relative error 2^-64:
//   p(x) = prod_{i=1}^{k-1} (x + xi^i),  r(x) = x (p(x) - p(-x)) / (p(x) + p(-x)).
// Throws ValidationError for k < 2.
UnivariateRational newman_abs(std::uint32_t k);
Rational newman_xi(std::uint32_t k);

// radius * relu_k(x / radius) on [-radius, radius], where
// relu_k(t) = (t + newman_abs(k)(t)) / 2.
UnivariateRational rational_relu(std::uint32_t k, const Rational& radius = 1);

// x_i = lo + (hi - lo) i / (points - 1), i = 0 .. points-1.
BigFloat uniform_grid_point(const Rational& lo, const Rational& hi, std::size_t i, std::size_t points);

struct GridError {
    BigFloat sup_error;
    BigFloat argmax;
    // Denominator kept one strict sign on every grid point.
    bool denominator_sign_consistent = true;
};

// sup over the uniform grid of [f.lo(), f.hi()] of |f(x) - target(x)|.
// target must be safe to call concurrently.
GridError gridded_sup_error(const UnivariateRational& f, const std::function<BigFloat(const BigFloat&)>& target,
                            std::size_t points);

GridError newman_abs_error(std::uint32_t k, std::size_t points = 100000);
// Error of rational_relu(k, radius) against relu on [-radius, radius],
// memoized per (k, radius, points).
GridError rational_relu_error(std::uint32_t k, const Rational& radius, std::size_t points = 100000);

}  // namespace attnrat
