#include "attnrat/cube_polynomial.hpp"

#include "attnrat/errors.hpp"
#include "attnrat/kernels.hpp"

#include <bit>
#include <string>

namespace attnrat {

namespace {

void check_arity(std::uint32_t n) {
    if (n > kMaxCubeVariables) {
        throw ValidationError("cube polynomials support at most " + std::to_string(kMaxCubeVariables) +
                              " variables, got " + std::to_string(n));
    }
}

void require_same_cube(const CubePolynomial& a, const CubePolynomial& b, const char* op) {
    if (a.arity() != b.arity()) {
        throw ValidationError(std::string(op) + ": arity mismatch (" + std::to_string(a.arity()) + " vs " +
                              std::to_string(b.arity()) + ")");
    }
}

CubePolynomial sparse_mul(const CubePolynomial& a, const CubePolynomial& b) {
    CubePolynomial out(a.arity());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) out.add_term(ma | mb, ca * cb);
    }
    return out;
}

bool prefer_dense(const CubePolynomial& a, const CubePolynomial& b) {
    std::uint32_t n = a.arity();
    if (n > kDenseCubeLimit) return false;
    // Dense costs three transforms of n * 2^n additions each.
    double dense_cost = 3.0 * (n + 1) * static_cast<double>(cube_size(n));
    double sparse_cost = static_cast<double>(a.terms().size()) * static_cast<double>(b.terms().size());
    return sparse_cost > dense_cost;
}

}  // namespace

CubePolynomial::CubePolynomial(std::uint32_t n) : n_(n) { check_arity(n); }

CubePolynomial::CubePolynomial(std::uint32_t n, TermMap terms) : n_(n) {
    check_arity(n);
    CubeMask limit = CubeMask{1} << n;
    for (auto& [mask, c] : terms) {
        if (mask >= limit) throw ValidationError("cube monomial mask out of range");
        if (c != 0) terms_.emplace(mask, std::move(c));
    }
}

CubePolynomial CubePolynomial::constant(std::uint32_t n, const Rational& c) {
    CubePolynomial p(n);
    p.add_term(0, c);
    return p;
}

CubePolynomial CubePolynomial::variable(std::uint32_t n, std::uint32_t index) {
    if (index >= n) throw ValidationError("cube variable index out of range");
    CubePolynomial p(n);
    p.add_term(CubeMask{1} << index, 1);
    return p;
}

Rational CubePolynomial::coefficient(CubeMask mask) const {
    auto it = terms_.find(mask);
    return it == terms_.end() ? Rational(0) : it->second;
}

void CubePolynomial::add_term(CubeMask mask, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(mask, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::uint32_t CubePolynomial::degree() const {
    int d = 0;
    for (const auto& term : terms_) d = std::max(d, std::popcount(term.first));
    return static_cast<std::uint32_t>(d);
}

Rational CubePolynomial::evaluate(CubeMask point) const {
    Rational value = 0;
    for (const auto& [mask, c] : terms_) {
        if ((mask & point) == mask) value += c;
    }
    return value;
}

Polynomial CubePolynomial::to_polynomial() const {
    Polynomial p(n_);
    for (const auto& [mask, c] : terms_) {
        std::vector<Monomial::Factor> factors;
        for (std::uint32_t j = 0; j < n_; ++j) {
            if (mask >> j & 1U) factors.emplace_back(j, 1);
        }
        p.add_term(Monomial(std::move(factors)), c);
    }
    return p;
}

CubePolynomial CubePolynomial::scaled(const Rational& c) const {
    CubePolynomial out(n_);
    if (c == 0) return out;
    for (const auto& [mask, coeff] : terms_) out.terms_.emplace_hint(out.terms_.end(), mask, coeff * c);
    return out;
}

CubePolynomial multilinear_reduce(const Polynomial& p) {
    CubePolynomial out(p.arity());
    for (const auto& [m, c] : p.terms()) {
        CubeMask mask = 0;
        for (const auto& factor : m.factors()) mask |= CubeMask{1} << factor.first;
        out.add_term(mask, c);
    }
    return out;
}

CubePolynomial cube_add(const CubePolynomial& a, const CubePolynomial& b) {
    require_same_cube(a, b, "cube_add");
    CubePolynomial out = a;
    for (const auto& [mask, c] : b.terms()) out.add_term(mask, c);
    return out;
}

CubePolynomial cube_sub(const CubePolynomial& a, const CubePolynomial& b) {
    require_same_cube(a, b, "cube_sub");
    CubePolynomial out = a;
    for (const auto& [mask, c] : b.terms()) out.add_term(mask, -c);
    return out;
}

CubePolynomial cube_mul(const CubePolynomial& a, const CubePolynomial& b) {
    require_same_cube(a, b, "cube_mul");
    if (a.is_zero() || b.is_zero()) return CubePolynomial(a.arity());
    if (!prefer_dense(a, b)) return sparse_mul(a, b);
    std::vector<Rational> va = kernels::cube_values(a);
    std::vector<Rational> vb = kernels::cube_values(b);
    for (std::size_t i = 0; i < va.size(); ++i) va[i] *= vb[i];
    return kernels::from_cube_values(a.arity(), std::move(va));
}

CubePolynomial cube_pow(const CubePolynomial& a, unsigned exponent) {
    CubePolynomial result = CubePolynomial::constant(a.arity(), 1);
    CubePolynomial base = a;
    while (exponent > 0) {
        if (exponent & 1U) result = cube_mul(result, base);
        exponent >>= 1U;
        if (exponent > 0) base = cube_mul(base, base);
    }
    return result;
}

}  // namespace attnrat
