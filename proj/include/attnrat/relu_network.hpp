#pragma once

#include "attnrat/rational.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace attnrat {

// One affine map z -> a^T z + b. Inside the network it is followed by relu;
// as the readout it is used as is.
struct AffineGate {
    std::vector<Rational> a;
    Rational b;

    // ||a||_1 + |b|
    Rational norm() const;
    Rational apply(std::span<const Rational> z) const;
};

// Normalized feed-forward ReLU network with scalar output. Every gate and
// the readout satisfy ||a||_1 + |b| <= 1; the readout constraint is an
// assumption of this library (the network class only constrains gates).
class ReluNetwork {
public:
    // Throws ValidationError naming the offending gate on dimension or
    // normalization violations.
    ReluNetwork(std::size_t input_dim, std::vector<std::vector<AffineGate>> layers, AffineGate readout);

    std::size_t input_dim() const { return input_dim_; }
    const std::vector<std::vector<AffineGate>>& layers() const { return layers_; }
    const AffineGate& readout() const { return readout_; }

    // Depth l: number of gate layers. Width m: largest gate count in a layer.
    std::size_t depth() const { return layers_.size(); }
    std::size_t width() const;

    Rational evaluate(std::span<const Rational> z) const;

private:
    std::size_t input_dim_;
    std::vector<std::vector<AffineGate>> layers_;
    AffineGate readout_;
};

inline Rational relu(const Rational& t) { return t > 0 ? t : Rational(0); }

}  // namespace attnrat
