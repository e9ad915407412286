#pragma once

// Data-parallel kernels over the Boolean cube. Each kernel has a serial
// reference implementation in attnrat::reference, kept for tests and the
// benchmark target; the two must agree exactly.

#include "attnrat/cube_polynomial.hpp"
#include "attnrat/rational.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace attnrat {

// Largest n for which kernels materialize dense 2^n tables.
inline constexpr std::uint32_t kDenseCubeLimit = 22;

inline std::size_t cube_size(std::uint32_t n) { return std::size_t{1} << n; }

namespace kernels {

// In place: coefficient table -> value table, v[x] = sum_{A subset of x} c[A].
void subset_zeta(std::span<Rational> table);
// In place inverse of subset_zeta.
void subset_mobius(std::span<Rational> table);

// Values of p at every point of {0,1}^n (dense, length 2^n).
std::vector<Rational> cube_values(const CubePolynomial& p);
// Unique multilinear polynomial with the given cube values.
CubePolynomial from_cube_values(std::uint32_t n, std::vector<Rational> values);

// out[x] = fn(x) for every x in {0,1}^n, evaluated in parallel. fn must be
// safe to call concurrently.
std::vector<Rational> tabulate(std::uint32_t n, const std::function<Rational(CubeMask)>& fn);

// Smallest x with pred(x) true, or cube_size(n) if none. Deterministic
// regardless of thread count.
std::size_t first_match(std::uint32_t n, const std::function<bool(CubeMask)>& pred);

}  // namespace kernels

namespace reference {

std::vector<Rational> cube_values(const CubePolynomial& p);
CubePolynomial from_cube_values(std::uint32_t n, const std::vector<Rational>& values);
std::vector<Rational> tabulate(std::uint32_t n, const std::function<Rational(CubeMask)>& fn);
std::size_t first_match(std::uint32_t n, const std::function<bool(CubeMask)>& pred);
// Multilinear product through the generic polynomial route:
// poly_mul followed by multilinear_reduce.
CubePolynomial cube_mul(const CubePolynomial& a, const CubePolynomial& b);

}  // namespace reference

}  // namespace attnrat
