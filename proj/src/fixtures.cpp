#include "attnrat/fixtures.hpp"

#include "attnrat/errors.hpp"

namespace attnrat {

ReluNetwork single_gate_network() {
    return ReluNetwork(1, {{AffineGate{{Rational(1)}, 0}}}, AffineGate{{Rational(1)}, 0});
}

Rational relu_hat_amplitude(std::uint32_t n) {
    if (n < 1) throw ValidationError("relu hat: n must be at least 1");
    Rational a(1, 2 * n + 4 * n * (n - 1) + 1);
    a.canonicalize();
    return a;
}

ReluNetwork relu_hat_network(std::uint32_t n) {
    const Rational amp = relu_hat_amplitude(n);
    // Slopes alternate +-A n between consecutive knots; gate k contributes
    // (slope_k - slope_{k-1}) (y - y_k)_+ = 2 * that * relu((y - y_k)/2).
    std::vector<AffineGate> gates;
    std::vector<Rational> readout;
    for (std::uint32_t k = 0; k < n; ++k) {
        Rational knot(2 * static_cast<long>(k) - static_cast<long>(n), n);
        knot.canonicalize();
        gates.push_back(AffineGate{{Rational(1, 2)}, -knot / 2});
        const Rational slope = (k % 2 == 0 ? 1 : -1) * amp * n;
        readout.push_back(k == 0 ? Rational(2 * slope) : Rational(4 * slope));
    }
    return ReluNetwork(1, {gates}, AffineGate{readout, -amp});
}

LayerSpec relu_hat_layer(std::uint32_t n) {
    std::vector<WeightTable> weights(n);
    std::vector<ValuePair> values(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (auto& row : weights[i]) row = {Rational(1), Rational(1)};
        values[i] = {std::vector<Rational>{-1}, std::vector<Rational>{1}};
    }
    HeadSpec head(n, 1, std::move(weights), std::move(values));
    return LayerSpec({head}, ReluPost{relu_hat_network(n), 0});
}

ReluNetwork tent_network() {
    const Rational half(1, 2);
    const Rational third(1, 3);
    const Rational twelfth(1, 12);
    std::vector<AffineGate> first{AffineGate{{half}, 0}, AffineGate{{-half}, 0}};
    std::vector<AffineGate> second{AffineGate{{third, third}, -twelfth}, AffineGate{{-third, -third}, twelfth}};
    return ReluNetwork(1, {first, second}, AffineGate{{-half, -half}, 0});
}

}  // namespace attnrat
