#pragma once

#include "attnrat/json_io.hpp"
#include "attnrat/random.hpp"

#include <cstdint>
#include <string>

namespace attnrat {

struct SweepSettings {
    std::uint64_t seed = 1;
    std::uint32_t cap = kDefaultExhaustiveCap;
};

// Random normalized network of the given shape on d inputs; every gate and
// the readout have ||a||_1 + |b| <= 1.
ReluNetwork random_relu_network(RandomStream& rng, std::size_t d, std::uint32_t m, std::uint32_t l);

// Runs the configurations of a sweep config and returns the CSV text.
//   {"seed": int?, "configurations": [
//      {"family": "relu-hat", "n": int | [int...]},
//      {"family": "random-relu", "n": int | [int...], "m": int, "l": int, "trials": int}]}
// A seed in the config overrides settings.seed.
std::string run_sweep(const io::Json& config, const SweepSettings& settings);

inline constexpr const char* kSweepHeader =
    "family,n,h,m,l,trials,seed,tau,gamma,gamma_decimal,bound_quantity,n_over_4,h_m_pow_l";

}  // namespace attnrat
