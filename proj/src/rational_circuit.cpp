#include "attnrat/rational_circuit.hpp"

#include "attnrat/errors.hpp"

#include <algorithm>
#include <string>

namespace attnrat {

MultivariateRationalFunction::MultivariateRationalFunction(std::size_t arity) : arity_(arity) {
    output_ = constant(0);
}

std::size_t MultivariateRationalFunction::push(Node node) {
    nodes_.push_back(std::move(node));
    return nodes_.size() - 1;
}

std::size_t MultivariateRationalFunction::input(std::size_t j) {
    if (j >= arity_) throw ValidationError("circuit input index " + std::to_string(j) + " out of range");
    Node node;
    node.kind = Kind::Input;
    node.index = j;
    node.num_degree = 1;
    return push(std::move(node));
}

std::size_t MultivariateRationalFunction::constant(const Rational& c) {
    Node node;
    node.kind = Kind::Constant;
    node.value = c;
    return push(std::move(node));
}

std::size_t MultivariateRationalFunction::affine(std::span<const std::size_t> inputs, std::span<const Rational> coeffs,
                                                 const Rational& bias) {
    if (inputs.size() != coeffs.size()) throw ValidationError("affine node: inputs and coefficients differ in length");
    Node node;
    node.kind = Kind::Affine;
    Rational folded = bias;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        if (coeffs[j] == 0) continue;
        const Node& in = nodes_.at(inputs[j]);
        if (in.kind == Kind::Constant) {
            folded += coeffs[j] * in.value;
        } else {
            node.inputs.push_back(inputs[j]);
            node.coeffs.push_back(coeffs[j]);
        }
    }
    if (node.inputs.empty()) return constant(folded);
    node.bias = folded;
    std::uint32_t den_total = 0;
    for (std::size_t id : node.inputs) den_total += nodes_[id].den_degree;
    std::uint32_t num = node.bias != 0 ? den_total : 0;
    for (std::size_t id : node.inputs) {
        num = std::max(num, nodes_[id].num_degree + den_total - nodes_[id].den_degree);
    }
    node.num_degree = num;
    node.den_degree = den_total;
    return push(std::move(node));
}

std::size_t MultivariateRationalFunction::apply(std::size_t input, std::shared_ptr<const UnivariateRational> fn) {
    const Node& in = nodes_.at(input);
    if (in.kind == Kind::Constant) return constant(fn->evaluate(in.value));
    const std::uint32_t k = fn->degree();
    // sum_i c_i N^i D^(k-i) has degree <= max over nonzero c_i of i dn + (k - i) dd.
    auto bound = [&](const std::vector<Rational>& c) {
        std::uint32_t deg = 0;
        for (std::uint32_t i = 0; i < c.size(); ++i) {
            if (c[i] != 0) deg = std::max(deg, i * in.num_degree + (k - i) * in.den_degree);
        }
        return deg;
    };
    Node node;
    node.kind = Kind::Apply;
    node.inputs = {input};
    node.num_degree = bound(fn->numerator_coefficients());
    node.den_degree = bound(fn->denominator_coefficients());
    node.fn = std::move(fn);
    return push(std::move(node));
}

void MultivariateRationalFunction::set_output(std::size_t node) {
    if (node >= nodes_.size()) throw ValidationError("circuit output node out of range");
    output_ = node;
}

MultivariateRationalFunction::Pair MultivariateRationalFunction::evaluate_pair(std::span<const Rational> y) const {
    if (y.size() != arity_) throw ValidationError("circuit evaluation: point has wrong dimension");
    std::vector<Pair> values(output_ + 1);
    for (std::size_t id = 0; id <= output_; ++id) {
        const Node& node = nodes_[id];
        Pair& out = values[id];
        switch (node.kind) {
            case Kind::Input:
                out = {y[node.index], 1};
                break;
            case Kind::Constant:
                out = {node.value, 1};
                break;
            case Kind::Affine: {
                const std::size_t m = node.inputs.size();
                // prefix[j] = prod_{l<j} D_l, suffix[j] = prod_{l>=j} D_l
                std::vector<Rational> prefix(m + 1, Rational(1));
                std::vector<Rational> suffix(m + 1, Rational(1));
                for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = prefix[j] * values[node.inputs[j]].denominator;
                for (std::size_t j = m; j-- > 0;) suffix[j] = suffix[j + 1] * values[node.inputs[j]].denominator;
                Rational num = node.bias * prefix[m];
                for (std::size_t j = 0; j < m; ++j) {
                    num += node.coeffs[j] * values[node.inputs[j]].numerator * prefix[j] * suffix[j + 1];
                }
                out = {std::move(num), prefix[m]};
                break;
            }
            case Kind::Apply: {
                const Pair& in = values[node.inputs[0]];
                const std::uint32_t k = node.fn->degree();
                std::vector<Rational> n_pow(k + 1, Rational(1));
                std::vector<Rational> d_pow(k + 1, Rational(1));
                for (std::uint32_t i = 1; i <= k; ++i) {
                    n_pow[i] = n_pow[i - 1] * in.numerator;
                    d_pow[i] = d_pow[i - 1] * in.denominator;
                }
                auto lift = [&](const std::vector<Rational>& c) -> Rational {
                    Rational acc = 0;
                    for (std::uint32_t i = 0; i < c.size(); ++i) {
                        if (c[i] != 0) acc += c[i] * n_pow[i] * d_pow[k - i];
                    }
                    return acc;
                };
                out = {lift(node.fn->numerator_coefficients()), lift(node.fn->denominator_coefficients())};
                break;
            }
        }
    }
    return values[output_];
}

Rational MultivariateRationalFunction::evaluate(std::span<const Rational> y) const {
    Pair pair = evaluate_pair(y);
    if (pair.denominator == 0) throw DenominatorVanished("circuit denominator vanishes at the given point");
    return pair.numerator / pair.denominator;
}

BigFloat MultivariateRationalFunction::evaluate(std::span<const BigFloat> y, std::vector<int>* den_signs) const {
    if (y.size() != arity_) throw ValidationError("circuit evaluation: point has wrong dimension");
    const mpfr_prec_t precision = y.empty() ? BigFloat::kDefaultPrecision : y[0].precision();
    std::vector<BigFloat> values;
    values.reserve(output_ + 1);
    BigFloat scratch(precision);
    if (den_signs) den_signs->clear();
    for (std::size_t id = 0; id <= output_; ++id) {
        const Node& node = nodes_[id];
        BigFloat out(precision);
        switch (node.kind) {
            case Kind::Input:
                out = y[node.index];
                break;
            case Kind::Constant:
                out = BigFloat(node.value, precision);
                break;
            case Kind::Affine:
                out = BigFloat(node.bias, precision);
                for (std::size_t j = 0; j < node.inputs.size(); ++j) {
                    out += BigFloat(node.coeffs[j], precision) * values[node.inputs[j]];
                }
                break;
            case Kind::Apply: {
                const int sign = node.fn->evaluate(values[node.inputs[0]].get(), out.get(), scratch.get());
                if (den_signs) den_signs->push_back(sign);
                break;
            }
        }
        values.push_back(std::move(out));
    }
    return values[output_];
}

}  // namespace attnrat
