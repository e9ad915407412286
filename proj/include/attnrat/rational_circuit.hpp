#pragma once

#include "attnrat/high_precision.hpp"
#include "attnrat/newman.hpp"
#include "attnrat/rational.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace attnrat {

// Rational function of d variables kept as an arithmetic circuit instead of
// an expanded quotient. Every node stands for a pair of polynomials
// (numerator, denominator) with tracked formal degrees; evaluation returns
// the values of exactly those polynomials, so the pair can be fed to the
// homogenized lift.
class MultivariateRationalFunction {
public:
    enum class Kind { Input, Constant, Affine, Apply };

    struct Node {
        Kind kind = Kind::Constant;
        std::size_t index = 0;  // Input
        Rational value;         // Constant
        // Affine: sum_j coeffs[j] * node(inputs[j]) + bias
        std::vector<std::size_t> inputs;
        std::vector<Rational> coeffs;
        Rational bias;
        // Apply: fn(node(inputs[0]))
        std::shared_ptr<const UnivariateRational> fn;
        std::uint32_t num_degree = 0;
        std::uint32_t den_degree = 0;
    };

    struct Pair {
        Rational numerator;
        Rational denominator;
    };

    explicit MultivariateRationalFunction(std::size_t arity);

    std::size_t input(std::size_t j);
    std::size_t constant(const Rational& c);
    // Zero coefficients are dropped; all-constant inputs fold to a constant.
    std::size_t affine(std::span<const std::size_t> inputs, std::span<const Rational> coeffs, const Rational& bias);
    // Constant inputs fold through fn exactly.
    std::size_t apply(std::size_t input, std::shared_ptr<const UnivariateRational> fn);
    void set_output(std::size_t node);

    std::size_t arity() const { return arity_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const Node& node(std::size_t id) const { return nodes_.at(id); }
    std::size_t output() const { return output_; }
    bool is_constant(std::size_t id) const { return nodes_.at(id).kind == Kind::Constant; }

    std::uint32_t num_degree() const { return nodes_[output_].num_degree; }
    std::uint32_t den_degree() const { return nodes_[output_].den_degree; }
    std::uint32_t degree() const { return std::max(num_degree(), den_degree()); }

    // Values of the formal numerator and denominator polynomials at y.
    Pair evaluate_pair(std::span<const Rational> y) const;
    // Throws DenominatorVanished when the formal denominator is zero at y.
    Rational evaluate(std::span<const Rational> y) const;
    // Working-precision value. When den_signs is given it receives the sign
    // of every Apply node's denominator, in node order.
    BigFloat evaluate(std::span<const BigFloat> y, std::vector<int>* den_signs = nullptr) const;

private:
    std::size_t push(Node node);

    std::size_t arity_;
    std::vector<Node> nodes_;
    std::size_t output_ = 0;
};

}  // namespace attnrat
