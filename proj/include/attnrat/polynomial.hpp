#pragma once

#include "attnrat/rational.hpp"

#include <cstdint>
#include <initializer_list>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace attnrat {

// A power product z_{i1}^{e1} ... z_{ik}^{ek}. Factors are kept sorted by
// variable index with strictly positive exponents; the empty monomial is 1.
class Monomial {
public:
    using Factor = std::pair<std::uint32_t, std::uint32_t>;  // (variable, exponent)

    Monomial() = default;
    // Zero exponents are dropped and repeated variables merged.
    Monomial(std::initializer_list<Factor> factors);
    explicit Monomial(std::vector<Factor> factors);

    static Monomial variable(std::uint32_t index, std::uint32_t exponent = 1);

    const std::vector<Factor>& factors() const { return factors_; }
    bool is_constant() const { return factors_.empty(); }
    std::uint32_t degree() const;
    std::uint32_t exponent_of(std::uint32_t var) const;
    // Largest variable index + 1, or 0 for the constant monomial.
    std::uint32_t min_arity() const { return factors_.empty() ? 0 : factors_.back().first + 1; }
    bool is_multilinear() const;

    Monomial operator*(const Monomial& other) const;
    // Every exponent clamped to 1 (x^e = x on {0,1}).
    Monomial squarefree() const;

    Rational evaluate(std::span<const Rational> point) const;

    friend auto operator<=>(const Monomial&, const Monomial&) = default;
    friend bool operator==(const Monomial&, const Monomial&) = default;

private:
    void normalize();
    std::vector<Factor> factors_;
};

// Sparse multivariate polynomial over the rationals in canonical form:
// no zero coefficients, monomials iterated in sorted order.
class Polynomial {
public:
    using TermMap = std::map<Monomial, Rational>;

    explicit Polynomial(std::uint32_t arity = 0) : arity_(arity) {}
    Polynomial(std::uint32_t arity, TermMap terms);

    static Polynomial constant(std::uint32_t arity, const Rational& c);
    static Polynomial variable(std::uint32_t arity, std::uint32_t index);

    std::uint32_t arity() const { return arity_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    Rational coefficient(const Monomial& m) const;

    // Adds c * m, dropping the term if the coefficient cancels.
    void add_term(const Monomial& m, const Rational& c);

    Polynomial operator-() const;
    Polynomial scaled(const Rational& c) const;

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    std::uint32_t arity_;
    TermMap terms_;
};

Polynomial poly_add(const Polynomial& a, const Polynomial& b);
Polynomial poly_sub(const Polynomial& a, const Polynomial& b);
// Plain distributive product; exponents accumulate (no x^2 = x reduction).
Polynomial poly_mul(const Polynomial& a, const Polynomial& b);
Polynomial poly_pow(const Polynomial& a, unsigned exponent);
Rational poly_eval(const Polynomial& p, std::span<const Rational> point);
// Degree of the zero polynomial is 0.
std::uint32_t total_degree(const Polynomial& p);

// Univariate helpers (arity 1, variable 0).
std::uint32_t univariate_degree(const Polynomial& p);
// Coefficients c_0..c_deg in ascending order.
std::vector<Rational> univariate_coefficients(const Polynomial& p);
Polynomial univariate_from_coefficients(std::span<const Rational> coeffs);

inline Polynomial operator+(const Polynomial& a, const Polynomial& b) { return poly_add(a, b); }
inline Polynomial operator-(const Polynomial& a, const Polynomial& b) { return poly_sub(a, b); }
inline Polynomial operator*(const Polynomial& a, const Polynomial& b) { return poly_mul(a, b); }

}  // namespace attnrat
