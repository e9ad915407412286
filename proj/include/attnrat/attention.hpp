#pragma once

#include "attnrat/cube_polynomial.hpp"
#include "attnrat/polynomial.hpp"
#include "attnrat/rational.hpp"
#include "attnrat/relu_network.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace attnrat {

// Positive attention weights w(a, b) of one position, indexed [a][b] with
// a = last-token bit x_n and b = the position's own bit x_i. Stands in for
// exp(<q(a), k_i(b)>).
using WeightTable = std::array<std::array<Rational, 2>, 2>;
// Value vectors v_i(0), v_i(1).
using ValuePair = std::array<std::vector<Rational>, 2>;

// One self-attention head over binary inputs of length n, producing the
// output at the last position. Validated at construction.
class HeadSpec {
public:
    HeadSpec(std::uint32_t n, std::uint32_t d, std::vector<WeightTable> weights, std::vector<ValuePair> values);

    std::uint32_t n() const { return n_; }
    std::uint32_t d() const { return d_; }
    const Rational& weight(std::uint32_t position, int a, int b) const { return weights_[position][a][b]; }
    const std::vector<Rational>& value(std::uint32_t position, int b) const { return values_[position][b]; }
    const std::vector<WeightTable>& weights() const { return weights_; }
    const std::vector<ValuePair>& values() const { return values_; }

    // Multiplies every weight by a common positive factor.
    HeadSpec rescaled_weights(const Rational& factor) const;
    // Applies y -> scale * y + shift to every value coordinate.
    HeadSpec affine_values(const Rational& scale, const Rational& shift) const;

private:
    std::uint32_t n_;
    std::uint32_t d_;
    std::vector<WeightTable> weights_;
    std::vector<ValuePair> values_;
};

// u = P / Q over d variables, with declared degree bound p.
struct RationalPost {
    Polynomial numerator;
    Polynomial denominator;
    std::uint32_t degree_bound = 0;
};

// u computed by a normalized ReLU network; threshold tau is kept with the
// layer so margin checks are self-contained.
struct ReluPost {
    ReluNetwork network;
    Rational threshold;
};

using PostProcessing = std::variant<RationalPost, ReluPost>;

class LayerSpec {
public:
    LayerSpec(std::vector<HeadSpec> heads, PostProcessing post);

    std::uint32_t n() const { return heads_.front().n(); }
    std::uint32_t d() const { return heads_.front().d(); }
    std::uint32_t h() const { return static_cast<std::uint32_t>(heads_.size()); }
    const std::vector<HeadSpec>& heads() const { return heads_; }
    const PostProcessing& post() const { return post_; }
    bool has_rational_post() const { return std::holds_alternative<RationalPost>(post_); }
    const RationalPost& rational_post() const;
    const ReluPost& relu_post() const;

private:
    std::vector<HeadSpec> heads_;
    PostProcessing post_;
};

using BitVector = std::vector<std::uint8_t>;

// Converts a bit vector (x_1 first) to the cube-point encoding.
CubeMask to_mask(std::span<const std::uint8_t> bits, std::uint32_t n);
std::string bitstring(CubeMask x, std::uint32_t n);

std::vector<Rational> head_eval(const HeadSpec& head, CubeMask x);
std::vector<Rational> head_eval(const HeadSpec& head, std::span<const std::uint8_t> bits);
std::vector<Rational> layer_sum_eval(const LayerSpec& layer, CubeMask x);
std::vector<Rational> layer_sum_eval(const LayerSpec& layer, std::span<const std::uint8_t> bits);
// Throws DenominatorVanished when Q is zero at the head sum.
Rational layer_eval(const LayerSpec& layer, CubeMask x);
Rational layer_eval(const LayerSpec& layer, std::span<const std::uint8_t> bits);

// Approximate converter from numeric query/key embeddings: weights
// exp(<q(a), k_i(b)>) are computed in high precision and rounded to
// rationals with the given relative error. The resulting head is exact,
// but it only approximates the embedding-defined head.
HeadSpec approximate_head_from_embeddings(const std::array<std::vector<double>, 2>& query,
                                          const std::vector<std::array<std::vector<double>, 2>>& keys,
                                          std::vector<ValuePair> values, std::uint32_t d,
                                          const Rational& relative_error);

}  // namespace attnrat
