#include "attnrat/relu_network.hpp"

#include "attnrat/errors.hpp"

#include <algorithm>
#include <string>

namespace attnrat {

Rational AffineGate::norm() const {
    Rational total = abs(b);
    for (const auto& coeff : a) total += abs(coeff);
    return total;
}

Rational AffineGate::apply(std::span<const Rational> z) const {
    Rational value = b;
    for (std::size_t i = 0; i < a.size(); ++i) value += a[i] * z[i];
    return value;
}

namespace {

void check_gate(const AffineGate& gate, std::size_t fan_in, const std::string& where) {
    if (gate.a.size() != fan_in) {
        throw ValidationError(where + ": expected " + std::to_string(fan_in) + " input weights, got " +
                              std::to_string(gate.a.size()));
    }
    Rational norm = gate.norm();
    if (norm > 1) {
        throw ValidationError(where + ": ||a||_1 + |b| = " + format_rational(norm) + " exceeds 1");
    }
}

}  // namespace

ReluNetwork::ReluNetwork(std::size_t input_dim, std::vector<std::vector<AffineGate>> layers, AffineGate readout)
    : input_dim_(input_dim), layers_(std::move(layers)), readout_(std::move(readout)) {
    if (input_dim_ == 0) throw ValidationError("ReLU network input dimension must be positive");
    std::size_t fan_in = input_dim_;
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        if (layers_[l].empty()) throw ValidationError("layer " + std::to_string(l + 1) + " has no gates");
        for (std::size_t g = 0; g < layers_[l].size(); ++g) {
            check_gate(layers_[l][g], fan_in, "layer " + std::to_string(l + 1) + " gate " + std::to_string(g + 1));
        }
        fan_in = layers_[l].size();
    }
    check_gate(readout_, fan_in, "readout");
}

std::size_t ReluNetwork::width() const {
    std::size_t m = 0;
    for (const auto& layer : layers_) m = std::max(m, layer.size());
    return m;
}

Rational ReluNetwork::evaluate(std::span<const Rational> z) const {
    if (z.size() != input_dim_) {
        throw ValidationError("ReLU network expects " + std::to_string(input_dim_) + " inputs, got " +
                              std::to_string(z.size()));
    }
    std::vector<Rational> current(z.begin(), z.end());
    for (const auto& layer : layers_) {
        std::vector<Rational> next;
        next.reserve(layer.size());
        for (const auto& gate : layer) next.push_back(relu(gate.apply(current)));
        current = std::move(next);
    }
    return readout_.apply(current);
}

}  // namespace attnrat
