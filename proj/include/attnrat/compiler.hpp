#pragma once

#include "attnrat/attention.hpp"
#include "attnrat/cube_polynomial.hpp"
#include "attnrat/polynomial.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace attnrat {

inline constexpr std::uint32_t kDefaultExhaustiveCap = 20;

// numerator / denominator on {0,1}^n with the denominator nonzero on every
// cube point. The factory checks this exhaustively when n <= cap; above the
// cap the caller vouches for it (the compiler only does so when the
// denominator is a positive multiple of a power of S).
class CubeRationalFunction {
public:
    static CubeRationalFunction make(CubePolynomial numerator, CubePolynomial denominator,
                                     std::uint32_t cap = kDefaultExhaustiveCap);
    // Skips the exhaustive check; used above the cap.
    static CubeRationalFunction trusted(CubePolynomial numerator, CubePolynomial denominator, bool positive);

    const CubePolynomial& numerator() const { return numerator_; }
    const CubePolynomial& denominator() const { return denominator_; }
    std::uint32_t arity() const { return numerator_.arity(); }
    // True when the denominator was verified (or constructed) positive on
    // the whole cube.
    bool denominator_positive() const { return denominator_positive_; }
    // Whether the nonvanishing property was checked exhaustively.
    bool denominator_certified() const { return denominator_certified_; }
    // max(deg numerator, deg denominator)
    std::uint32_t degree() const;
    Rational evaluate(CubeMask x) const;

private:
    CubeRationalFunction(CubePolynomial numerator, CubePolynomial denominator, bool positive, bool certified);

    CubePolynomial numerator_;
    CubePolynomial denominator_;
    bool denominator_positive_;
    bool denominator_certified_;
};

// Indicator of (x_last, x_i) = (a, b) on the cube:
// (1 - a + (2a - 1) x_last) (1 - b + (2b - 1) x_i), as a polynomial of the
// given arity (unreduced; degree 2 even when the two indices coincide).
Polynomial indicator_poly(int a, int b, std::uint32_t last_index, std::uint32_t position_index, std::uint32_t arity);

// One head as d numerators over a shared denominator, each of degree <= 2.
struct LoweredHead {
    std::vector<CubePolynomial> numerators;
    CubePolynomial denominator;
    // Total degree of the representation before multilinear reduction.
    std::uint32_t formal_degree = 0;
};

LoweredHead head_to_rational(const HeadSpec& head);

// S = prod_j D_j and M_k = sum_j N_{j,k} prod_{l != j} D_l.
struct CommonDenominator {
    CubePolynomial denominator;
    std::vector<CubePolynomial> numerators;
    std::uint32_t formal_degree = 0;  // sum of head formal degrees (<= 2h)
};

CommonDenominator common_denominator(std::span<const LoweredHead> heads);

// Homogenized lift sum_alpha c_alpha M^alpha S^(p - |alpha|), reduced.
// Throws ValidationError if total_degree(P) > p.
CubePolynomial homogenize_compose(const Polynomial& p_poly, std::span<const CubePolynomial> m,
                                  const CubePolynomial& s, std::uint32_t p);

// Pointwise variant: the lift of a post-processing function known only
// through an exact evaluator of its numerator. value_at(y) must return
// P(y) for a polynomial P of total degree <= p; the lift on the cube is
// S(x)^p P(M(x)/S(x)), interpolated to its multilinear form. Requires
// S > 0 on the cube and n <= kDenseCubeLimit.
CubePolynomial homogenize_pointwise(const std::function<Rational(std::span<const Rational>)>& value_at,
                                    std::span<const CubePolynomial> m, const CubePolynomial& s, std::uint32_t p);

namespace reference {

// Literal symbolic versions: products via poly_mul over unreduced
// polynomials, reduced only at the end.
LoweredHead head_to_rational(const HeadSpec& head);
CommonDenominator common_denominator(std::span<const LoweredHead> heads);
CubePolynomial homogenize_compose(const Polynomial& p_poly, std::span<const CubePolynomial> m,
                                  const CubePolynomial& s, std::uint32_t p);

}  // namespace reference

struct CompileOptions {
    std::uint32_t cap = kDefaultExhaustiveCap;
    // Above the cap: accept a non-constant Q without an exhaustive check.
    bool assume_nonvanishing = false;
};

struct CompiledLayer {
    CubeRationalFunction function;
    std::uint32_t h = 0;
    std::uint32_t declared_p = 0;
    std::uint32_t degree_bound = 0;  // 2hp
    // Degree of the lifted representation before multilinear reduction.
    std::uint32_t formal_degree = 0;
    bool nonvanishing_assumed = false;
};

// Throws DenominatorVanished when the compiled denominator is zero at some
// cube point, and ScaleCapExceeded when n > cap with non-constant Q and no
// nonvanishing assertion.
CompiledLayer compile_layer(const LayerSpec& layer, const CompileOptions& options = {});

struct Mismatch {
    CubeMask x = 0;
    Rational lhs;  // layer_eval
    Rational rhs;  // compiled
};

struct EquivalenceReport {
    std::uint32_t n = 0;
    std::uint32_t degree_bound = 0;
    std::uint32_t achieved_num_degree = 0;
    std::uint32_t achieved_den_degree = 0;
    bool equivalence_checked = false;
    std::uint64_t points_checked = 0;
    std::optional<Mismatch> mismatch;

    bool ok() const { return equivalence_checked && !mismatch; }
};

// Exhaustive comparison of layer_eval against the compiled function on all
// 2^n points. A mismatch is a report outcome, not an error.
EquivalenceReport verify_equivalence(const LayerSpec& layer, const CubeRationalFunction& compiled,
                                     std::uint32_t cap = kDefaultExhaustiveCap);

}  // namespace attnrat
