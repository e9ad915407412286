#pragma once

#include "attnrat/polynomial.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace attnrat {

// Points of {0,1}^n are encoded as integers with x_1 in the least
// significant bit. A multilinear monomial is the bitmask of its variables,
// using the same bit order, so variable index j <-> bit j <-> x_{j+1}.
using CubeMask = std::uint64_t;

inline constexpr std::uint32_t kMaxCubeVariables = 63;

// Multilinear polynomial on {0,1}^n in canonical form: squarefree monomials
// keyed by variable bitmask, no zero coefficients.
class CubePolynomial {
public:
    using TermMap = std::map<CubeMask, Rational>;

    explicit CubePolynomial(std::uint32_t n = 0);
    CubePolynomial(std::uint32_t n, TermMap terms);

    static CubePolynomial constant(std::uint32_t n, const Rational& c);
    static CubePolynomial variable(std::uint32_t n, std::uint32_t index);

    std::uint32_t arity() const { return n_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0); }
    Rational coefficient(CubeMask mask) const;
    void add_term(CubeMask mask, const Rational& c);

    std::uint32_t degree() const;
    Rational evaluate(CubeMask point) const;
    Polynomial to_polynomial() const;

    CubePolynomial scaled(const Rational& c) const;
    CubePolynomial operator-() const { return scaled(-1); }

    friend bool operator==(const CubePolynomial&, const CubePolynomial&) = default;

private:
    std::uint32_t n_;
    TermMap terms_;
};

// Replaces every exponent e >= 1 by 1. The result agrees with p on every
// point of {0,1}^n and its degree never exceeds total_degree(p).
CubePolynomial multilinear_reduce(const Polynomial& p);

CubePolynomial cube_add(const CubePolynomial& a, const CubePolynomial& b);
CubePolynomial cube_sub(const CubePolynomial& a, const CubePolynomial& b);
// Product followed by multilinear reduction. Uses the dense transform
// kernel when the cube is small enough, otherwise sparse mask products.
CubePolynomial cube_mul(const CubePolynomial& a, const CubePolynomial& b);
CubePolynomial cube_pow(const CubePolynomial& a, unsigned exponent);

inline CubePolynomial operator+(const CubePolynomial& a, const CubePolynomial& b) { return cube_add(a, b); }
inline CubePolynomial operator-(const CubePolynomial& a, const CubePolynomial& b) { return cube_sub(a, b); }
inline CubePolynomial operator*(const CubePolynomial& a, const CubePolynomial& b) { return cube_mul(a, b); }

}  // namespace attnrat
