#include "attnrat/attention.hpp"

#include "attnrat/errors.hpp"
#include "attnrat/high_precision.hpp"

#include <string>

namespace attnrat {

HeadSpec::HeadSpec(std::uint32_t n, std::uint32_t d, std::vector<WeightTable> weights, std::vector<ValuePair> values)
    : n_(n), d_(d), weights_(std::move(weights)), values_(std::move(values)) {
    if (n_ < 1) throw ValidationError("head: n must be at least 1");
    if (d_ < 1) throw ValidationError("head: d must be at least 1");
    if (n_ > kMaxCubeVariables) throw ValidationError("head: n exceeds " + std::to_string(kMaxCubeVariables));
    if (weights_.size() != n_) throw ValidationError("head: expected " + std::to_string(n_) + " weight tables");
    if (values_.size() != n_) throw ValidationError("head: expected " + std::to_string(n_) + " value pairs");
    for (std::uint32_t i = 0; i < n_; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                if (weights_[i][a][b] <= 0) {
                    throw ValidationError("head: weight w_" + std::to_string(i + 1) + "(" + std::to_string(a) + "," +
                                          std::to_string(b) + ") = " + format_rational(weights_[i][a][b]) +
                                          " is not positive");
                }
            }
        }
        for (int b = 0; b < 2; ++b) {
            if (values_[i][b].size() != d_) {
                throw ValidationError("head: value vector v_" + std::to_string(i + 1) + "(" + std::to_string(b) +
                                      ") has length " + std::to_string(values_[i][b].size()) + ", expected " +
                                      std::to_string(d_));
            }
        }
    }
}

HeadSpec HeadSpec::rescaled_weights(const Rational& factor) const {
    std::vector<WeightTable> w = weights_;
    for (auto& table : w) {
        for (auto& row : table) {
            for (auto& entry : row) entry *= factor;
        }
    }
    return HeadSpec(n_, d_, std::move(w), values_);
}

HeadSpec HeadSpec::affine_values(const Rational& scale, const Rational& shift) const {
    std::vector<ValuePair> v = values_;
    for (auto& pair : v) {
        for (auto& vec : pair) {
            for (auto& coord : vec) coord = scale * coord + shift;
        }
    }
    return HeadSpec(n_, d_, weights_, std::move(v));
}

LayerSpec::LayerSpec(std::vector<HeadSpec> heads, PostProcessing post) : heads_(std::move(heads)), post_(std::move(post)) {
    if (heads_.empty()) throw ValidationError("layer: at least one head is required");
    for (const auto& head : heads_) {
        if (head.n() != heads_.front().n() || head.d() != heads_.front().d()) {
            throw ValidationError("layer: all heads must share n and d");
        }
    }
    if (const auto* rational = std::get_if<RationalPost>(&post_)) {
        if (rational->numerator.arity() != d() || rational->denominator.arity() != d()) {
            throw ValidationError("layer: post-processing polynomials must have arity d = " + std::to_string(d()));
        }
        if (total_degree(rational->numerator) > rational->degree_bound ||
            total_degree(rational->denominator) > rational->degree_bound) {
            throw ValidationError("layer: post-processing degree exceeds the declared bound p = " +
                                  std::to_string(rational->degree_bound));
        }
        if (rational->denominator.is_zero()) throw DenominatorVanished("layer: post-processing denominator is zero");
    } else {
        const auto& relu_post = std::get<ReluPost>(post_);
        if (relu_post.network.input_dim() != d()) {
            throw ValidationError("layer: ReLU network input dimension must equal d = " + std::to_string(d()));
        }
    }
}

const RationalPost& LayerSpec::rational_post() const {
    if (const auto* p = std::get_if<RationalPost>(&post_)) return *p;
    throw ValidationError("layer has ReLU post-processing, expected rational");
}

const ReluPost& LayerSpec::relu_post() const {
    if (const auto* p = std::get_if<ReluPost>(&post_)) return *p;
    throw ValidationError("layer has rational post-processing, expected ReLU");
}

CubeMask to_mask(std::span<const std::uint8_t> bits, std::uint32_t n) {
    if (bits.size() != n) {
        throw ValidationError("input has length " + std::to_string(bits.size()) + ", expected " + std::to_string(n));
    }
    CubeMask x = 0;
    for (std::uint32_t j = 0; j < n; ++j) {
        if (bits[j] > 1) throw ValidationError("input entries must be bits");
        if (bits[j]) x |= CubeMask{1} << j;
    }
    return x;
}

std::string bitstring(CubeMask x, std::uint32_t n) {
    std::string s(n, '0');
    for (std::uint32_t j = 0; j < n; ++j) {
        if (x >> j & 1U) s[j] = '1';
    }
    return s;
}

std::vector<Rational> head_eval(const HeadSpec& head, CubeMask x) {
    const std::uint32_t n = head.n();
    const int last = static_cast<int>(x >> (n - 1) & 1U);
    std::vector<Rational> numerator(head.d(), Rational(0));
    Rational denominator = 0;
    for (std::uint32_t i = 0; i < n; ++i) {
        const int bit = static_cast<int>(x >> i & 1U);
        const Rational& w = head.weight(i, last, bit);
        const auto& v = head.value(i, bit);
        for (std::uint32_t k = 0; k < head.d(); ++k) numerator[k] += w * v[k];
        denominator += w;
    }
    for (auto& coord : numerator) coord /= denominator;
    return numerator;
}

std::vector<Rational> head_eval(const HeadSpec& head, std::span<const std::uint8_t> bits) {
    return head_eval(head, to_mask(bits, head.n()));
}

std::vector<Rational> layer_sum_eval(const LayerSpec& layer, CubeMask x) {
    std::vector<Rational> sum(layer.d(), Rational(0));
    for (const auto& head : layer.heads()) {
        auto out = head_eval(head, x);
        for (std::uint32_t k = 0; k < layer.d(); ++k) sum[k] += out[k];
    }
    return sum;
}

std::vector<Rational> layer_sum_eval(const LayerSpec& layer, std::span<const std::uint8_t> bits) {
    return layer_sum_eval(layer, to_mask(bits, layer.n()));
}

Rational layer_eval(const LayerSpec& layer, CubeMask x) {
    const auto s = layer_sum_eval(layer, x);
    if (const auto* rational = std::get_if<RationalPost>(&layer.post())) {
        Rational q = poly_eval(rational->denominator, s);
        if (q == 0) {
            throw DenominatorVanished("post-processing denominator vanishes at x = " + bitstring(x, layer.n()));
        }
        return poly_eval(rational->numerator, s) / q;
    }
    return std::get<ReluPost>(layer.post()).network.evaluate(s);
}

Rational layer_eval(const LayerSpec& layer, std::span<const std::uint8_t> bits) {
    return layer_eval(layer, to_mask(bits, layer.n()));
}

HeadSpec approximate_head_from_embeddings(const std::array<std::vector<double>, 2>& query,
                                          const std::vector<std::array<std::vector<double>, 2>>& keys,
                                          std::vector<ValuePair> values, std::uint32_t d,
                                          const Rational& relative_error) {
    const auto n = static_cast<std::uint32_t>(keys.size());
    std::vector<WeightTable> weights(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                const auto& q = query[a];
                const auto& k = keys[i][b];
                if (q.size() != k.size()) throw ValidationError("query and key embeddings differ in dimension");
                BigFloat score(BigFloat::kDefaultPrecision);
                for (std::size_t t = 0; t < q.size(); ++t) {
                    score += BigFloat::from_double(q[t]) * BigFloat::from_double(k[t]);
                }
                weights[i][a][b] = rationalize(big_exp(score), relative_error);
            }
        }
    }
    return HeadSpec(n, d, std::move(weights), std::move(values));
}

}  // namespace attnrat
