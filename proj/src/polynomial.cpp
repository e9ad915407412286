#include "attnrat/polynomial.hpp"

#include "attnrat/errors.hpp"

#include <algorithm>
#include <string>

namespace attnrat {

Monomial::Monomial(std::initializer_list<Factor> factors) : factors_(factors) { normalize(); }

Monomial::Monomial(std::vector<Factor> factors) : factors_(std::move(factors)) { normalize(); }

Monomial Monomial::variable(std::uint32_t index, std::uint32_t exponent) {
    return Monomial({Factor{index, exponent}});
}

void Monomial::normalize() {
    std::sort(factors_.begin(), factors_.end());
    std::vector<Factor> merged;
    merged.reserve(factors_.size());
    for (const auto& [var, exp] : factors_) {
        if (exp == 0) continue;
        if (!merged.empty() && merged.back().first == var) {
            merged.back().second += exp;
        } else {
            merged.emplace_back(var, exp);
        }
    }
    factors_ = std::move(merged);
}

std::uint32_t Monomial::degree() const {
    std::uint32_t d = 0;
    for (const auto& f : factors_) d += f.second;
    return d;
}

std::uint32_t Monomial::exponent_of(std::uint32_t var) const {
    auto it = std::lower_bound(factors_.begin(), factors_.end(), Factor{var, 0});
    return (it != factors_.end() && it->first == var) ? it->second : 0;
}

bool Monomial::is_multilinear() const {
    return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.second == 1; });
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial out;
    out.factors_.reserve(factors_.size() + other.factors_.size());
    auto a = factors_.begin();
    auto b = other.factors_.begin();
    while (a != factors_.end() || b != other.factors_.end()) {
        if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
            out.factors_.push_back(*a++);
        } else if (a == factors_.end() || b->first < a->first) {
            out.factors_.push_back(*b++);
        } else {
            out.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return out;
}

Monomial Monomial::squarefree() const {
    Monomial out;
    out.factors_.reserve(factors_.size());
    for (const auto& f : factors_) out.factors_.emplace_back(f.first, 1);
    return out;
}

Rational Monomial::evaluate(std::span<const Rational> point) const {
    Rational value = 1;
    for (const auto& [var, exp] : factors_) value *= power(point[var], exp);
    return value;
}

Polynomial::Polynomial(std::uint32_t arity, TermMap terms) : arity_(arity) {
    for (auto& [m, c] : terms) {
        if (m.min_arity() > arity_) {
            throw ValidationError("monomial variable index out of range for arity " + std::to_string(arity_));
        }
        if (c != 0) terms_.emplace(m, std::move(c));
    }
}

Polynomial Polynomial::constant(std::uint32_t arity, const Rational& c) {
    Polynomial p(arity);
    p.add_term(Monomial(), c);
    return p;
}

Polynomial Polynomial::variable(std::uint32_t arity, std::uint32_t index) {
    if (index >= arity) throw ValidationError("variable index out of range");
    Polynomial p(arity);
    p.add_term(Monomial::variable(index), 1);
    return p;
}

Rational Polynomial::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const { return scaled(-1); }

Polynomial Polynomial::scaled(const Rational& c) const {
    Polynomial out(arity_);
    if (c == 0) return out;
    for (const auto& [m, coeff] : terms_) out.terms_.emplace_hint(out.terms_.end(), m, coeff * c);
    return out;
}

namespace {

void require_same_arity(const Polynomial& a, const Polynomial& b, const char* op) {
    if (a.arity() != b.arity()) {
        throw ValidationError(std::string(op) + ": arity mismatch (" + std::to_string(a.arity()) + " vs " +
                              std::to_string(b.arity()) + ")");
    }
}

}  // namespace

Polynomial poly_add(const Polynomial& a, const Polynomial& b) {
    require_same_arity(a, b, "poly_add");
    Polynomial out = a;
    for (const auto& [m, c] : b.terms()) out.add_term(m, c);
    return out;
}

Polynomial poly_sub(const Polynomial& a, const Polynomial& b) {
    require_same_arity(a, b, "poly_sub");
    Polynomial out = a;
    for (const auto& [m, c] : b.terms()) out.add_term(m, -c);
    return out;
}

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    require_same_arity(a, b, "poly_mul");
    Polynomial out(a.arity());
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) out.add_term(ma * mb, ca * cb);
    }
    return out;
}

Polynomial poly_pow(const Polynomial& a, unsigned exponent) {
    Polynomial result = Polynomial::constant(a.arity(), 1);
    Polynomial base = a;
    while (exponent > 0) {
        if (exponent & 1U) result = poly_mul(result, base);
        exponent >>= 1U;
        if (exponent > 0) base = poly_mul(base, base);
    }
    return result;
}

Rational poly_eval(const Polynomial& p, std::span<const Rational> point) {
    if (point.size() != p.arity()) {
        throw ValidationError("poly_eval: point has length " + std::to_string(point.size()) + ", expected " +
                              std::to_string(p.arity()));
    }
    Rational value = 0;
    for (const auto& [m, c] : p.terms()) value += c * m.evaluate(point);
    return value;
}

std::uint32_t total_degree(const Polynomial& p) {
    std::uint32_t d = 0;
    for (const auto& term : p.terms()) d = std::max(d, term.first.degree());
    return d;
}

std::uint32_t univariate_degree(const Polynomial& p) { return total_degree(p); }

std::vector<Rational> univariate_coefficients(const Polynomial& p) {
    if (p.arity() != 1) throw ValidationError("expected a univariate polynomial");
    std::vector<Rational> coeffs(univariate_degree(p) + 1, Rational(0));
    for (const auto& [m, c] : p.terms()) coeffs[m.degree()] = c;
    return coeffs;
}

Polynomial univariate_from_coefficients(std::span<const Rational> coeffs) {
    Polynomial p(1);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        p.add_term(Monomial::variable(0, static_cast<std::uint32_t>(i)), coeffs[i]);
    }
    return p;
}

}  // namespace attnrat
