#include "attnrat/kernels.hpp"

#include "attnrat/errors.hpp"

#include <algorithm>
#include <bit>
#include <exception>
#include <string>

namespace attnrat {

namespace {

// Below this size the OpenMP fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 1U << 10;

std::uint32_t log2_size(std::size_t size) {
    if (size == 0 || !std::has_single_bit(size)) {
        throw ValidationError("cube table length must be a power of two");
    }
    return static_cast<std::uint32_t>(std::countr_zero(size));
}

void require_dense(std::uint32_t n) {
    if (n > kDenseCubeLimit) {
        throw ScaleCapExceeded("dense cube table requested for n = " + std::to_string(n) +
                               " (limit " + std::to_string(kDenseCubeLimit) + ")");
    }
}

// Exceptions must not cross an OpenMP region boundary. Keeps the exception
// raised at the smallest index so the rethrown error does not depend on
// scheduling.
class FirstError {
public:
    void record(std::size_t index) {
#pragma omp critical(attnrat_first_error)
        {
            if (!error_ || index < index_) {
                error_ = std::current_exception();
                index_ = index;
            }
        }
    }
    void rethrow() const {
        if (error_) std::rethrow_exception(error_);
    }
    // Matches serial semantics of a scan that stops at the first hit.
    void rethrow_if_before(std::size_t limit) const {
        if (error_ && index_ < limit) std::rethrow_exception(error_);
    }

private:
    std::exception_ptr error_;
    std::size_t index_ = 0;
};

}  // namespace

namespace kernels {

void subset_zeta(std::span<Rational> table) {
    const std::uint32_t n = log2_size(table.size());
    const std::int64_t size = static_cast<std::int64_t>(table.size());
    for (std::uint32_t bit = 0; bit < n; ++bit) {
        const std::int64_t step = std::int64_t{1} << bit;
#pragma omp parallel for schedule(static) if (table.size() >= kParallelThreshold)
        for (std::int64_t i = 0; i < size; ++i) {
            if (i & step) table[static_cast<std::size_t>(i)] += table[static_cast<std::size_t>(i ^ step)];
        }
    }
}

void subset_mobius(std::span<Rational> table) {
    const std::uint32_t n = log2_size(table.size());
    const std::int64_t size = static_cast<std::int64_t>(table.size());
    for (std::uint32_t bit = 0; bit < n; ++bit) {
        const std::int64_t step = std::int64_t{1} << bit;
#pragma omp parallel for schedule(static) if (table.size() >= kParallelThreshold)
        for (std::int64_t i = 0; i < size; ++i) {
            if (i & step) table[static_cast<std::size_t>(i)] -= table[static_cast<std::size_t>(i ^ step)];
        }
    }
}

std::vector<Rational> cube_values(const CubePolynomial& p) {
    require_dense(p.arity());
    std::vector<Rational> table(cube_size(p.arity()), Rational(0));
    for (const auto& [mask, c] : p.terms()) table[mask] = c;
    subset_zeta(table);
    return table;
}

CubePolynomial from_cube_values(std::uint32_t n, std::vector<Rational> values) {
    require_dense(n);
    if (values.size() != cube_size(n)) throw ValidationError("value table length does not match 2^n");
    subset_mobius(values);
    CubePolynomial::TermMap terms;
    for (std::size_t mask = 0; mask < values.size(); ++mask) {
        if (values[mask] != 0) terms.emplace_hint(terms.end(), mask, std::move(values[mask]));
    }
    return CubePolynomial(n, std::move(terms));
}

std::vector<Rational> tabulate(std::uint32_t n, const std::function<Rational(CubeMask)>& fn) {
    require_dense(n);
    std::vector<Rational> out(cube_size(n));
    const std::int64_t size = static_cast<std::int64_t>(out.size());
    FirstError error;
#pragma omp parallel for schedule(dynamic, 64) if (out.size() >= 64)
    for (std::int64_t x = 0; x < size; ++x) {
        try {
            out[static_cast<std::size_t>(x)] = fn(static_cast<CubeMask>(x));
        } catch (...) {
            error.record(static_cast<std::size_t>(x));
        }
    }
    error.rethrow();
    return out;
}

std::size_t first_match(std::uint32_t n, const std::function<bool(CubeMask)>& pred) {
    const std::size_t size = cube_size(n);
    std::size_t best = size;
    const std::int64_t isize = static_cast<std::int64_t>(size);
    FirstError error;
#pragma omp parallel for schedule(dynamic, 64) reduction(min : best) if (size >= 64)
    for (std::int64_t x = 0; x < isize; ++x) {
        try {
            if (static_cast<std::size_t>(x) < best && pred(static_cast<CubeMask>(x))) {
                best = std::min(best, static_cast<std::size_t>(x));
            }
        } catch (...) {
            error.record(static_cast<std::size_t>(x));
        }
    }
    error.rethrow_if_before(best);
    return best;
}

}  // namespace kernels

namespace reference {

std::vector<Rational> cube_values(const CubePolynomial& p) {
    const std::uint32_t n = p.arity();
    require_dense(n);
    Polynomial generic = p.to_polynomial();
    std::vector<Rational> point(n);
    std::vector<Rational> out(cube_size(n));
    for (std::size_t x = 0; x < out.size(); ++x) {
        for (std::uint32_t j = 0; j < n; ++j) point[j] = (x >> j) & 1U;
        out[x] = poly_eval(generic, point);
    }
    return out;
}

CubePolynomial from_cube_values(std::uint32_t n, const std::vector<Rational>& values) {
    require_dense(n);
    if (values.size() != cube_size(n)) throw ValidationError("value table length does not match 2^n");
    // Inclusion-exclusion over subsets: c[A] = sum_{B subset A} (-1)^{|A|-|B|} f(B).
    CubePolynomial out(n);
    for (CubeMask a = 0; a < values.size(); ++a) {
        Rational c = 0;
        for (CubeMask b = a;; b = (b - 1) & a) {
            if ((std::popcount(a ^ b) & 1) == 0) {
                c += values[b];
            } else {
                c -= values[b];
            }
            if (b == 0) break;
        }
        out.add_term(a, c);
    }
    return out;
}

std::vector<Rational> tabulate(std::uint32_t n, const std::function<Rational(CubeMask)>& fn) {
    require_dense(n);
    std::vector<Rational> out(cube_size(n));
    for (std::size_t x = 0; x < out.size(); ++x) out[x] = fn(x);
    return out;
}

std::size_t first_match(std::uint32_t n, const std::function<bool(CubeMask)>& pred) {
    const std::size_t size = cube_size(n);
    for (std::size_t x = 0; x < size; ++x) {
        if (pred(x)) return x;
    }
    return size;
}

CubePolynomial cube_mul(const CubePolynomial& a, const CubePolynomial& b) {
    return multilinear_reduce(poly_mul(a.to_polynomial(), b.to_polynomial()));
}

}  // namespace reference

}  // namespace attnrat
