#pragma once

#include "attnrat/rational.hpp"

#include <cstdint>
#include <random>

namespace attnrat {

// splitmix64 finalizer; decorrelates (seed, stream) pairs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seeded random stream with distribution code that does not depend on the
// standard library implementation, so outputs are reproducible byte for byte.
class RandomStream {
public:
    RandomStream(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix_seed(seed, stream)) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(engine_() % span);
    }

    // 2^j with j uniform in [-max_exp, max_exp].
    Rational power_of_two(int max_exp) {
        const auto j = integer(-max_exp, max_exp);
        Rational r(1);
        if (j >= 0) {
            mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(j));
        } else {
            mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-j));
        }
        return r;
    }

    Rational small_rational(std::int64_t num_bound, std::int64_t den_bound) {
        Rational r(integer(-num_bound, num_bound), integer(1, den_bound));
        r.canonicalize();
        return r;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace attnrat
