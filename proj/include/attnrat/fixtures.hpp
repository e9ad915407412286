#pragma once

#include "attnrat/attention.hpp"
#include "attnrat/relu_network.hpp"

#include <cstdint>

namespace attnrat {

// relu(z) with readout identity.
ReluNetwork single_gate_network();

// Depth-1, width-n piecewise-linear interpolant on [-1, 1] taking the value
// (-1)^(w+1) A at y_w = (2w - n)/n, w = 0..n, built from the gates
// relu((y - y_k)/2), k = 0..n-1. A is the largest amplitude for which the
// readout stays normalized.
ReluNetwork relu_hat_network(std::uint32_t n);
Rational relu_hat_amplitude(std::uint32_t n);

// Uniform head with values v_i(b) = 2b - 1 (output (2w - n)/n for w ones)
// followed by relu_hat_network(n); sign-represents parity with tau = 0 and
// margin A.
LayerSpec relu_hat_layer(std::uint32_t n);

// Width-2, depth-2 net on one input:
// relu(+-y/2), then relu(+-((h1 + h2)/3 - 1/12)), readout -(g1 + g2)/2.
ReluNetwork tent_network();

}  // namespace attnrat
