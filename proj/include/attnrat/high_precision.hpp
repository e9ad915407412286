#pragma once

#include "attnrat/rational.hpp"

#include <mpfr.h>

#include <string>

namespace attnrat {

// Minimal RAII wrapper around an MPFR float with fixed precision. Used only
// for grid error measurements and for computing irrational constants
// before they are rounded to exact rationals.
class BigFloat {
public:
    static constexpr mpfr_prec_t kDefaultPrecision = 192;

    explicit BigFloat(mpfr_prec_t precision = kDefaultPrecision) { mpfr_init2(value_, precision); mpfr_set_zero(value_, 1); }
    explicit BigFloat(const Rational& q, mpfr_prec_t precision = kDefaultPrecision) : BigFloat(precision) {
        mpfr_set_q(value_, q.get_mpq_t(), MPFR_RNDN);
    }
    static BigFloat from_double(double v, mpfr_prec_t precision = kDefaultPrecision) {
        BigFloat r(precision);
        mpfr_set_d(r.value_, v, MPFR_RNDN);
        return r;
    }
    BigFloat(const BigFloat& other) : BigFloat(mpfr_get_prec(other.value_)) { mpfr_set(value_, other.value_, MPFR_RNDN); }
    BigFloat(BigFloat&& other) noexcept : BigFloat(mpfr_get_prec(other.value_)) { mpfr_swap(value_, other.value_); }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) mpfr_set(value_, other.value_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        mpfr_swap(value_, other.value_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(value_); }

    mpfr_ptr get() { return value_; }
    mpfr_srcptr get() const { return value_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(value_, value_, o.value_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(value_, value_, o.value_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(value_, value_, o.value_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(value_, value_, o.value_, MPFR_RNDN); return *this; }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    BigFloat operator-() const {
        BigFloat r(precision());
        mpfr_neg(r.value_, value_, MPFR_RNDN);
        return r;
    }

    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.value_, b.value_) != 0; }

    int sign() const { return mpfr_sgn(value_); }
    BigFloat abs() const {
        BigFloat r(precision());
        mpfr_abs(r.value_, value_, MPFR_RNDN);
        return r;
    }
    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    // Exact rational value of the binary float.
    Rational to_rational() const;
    // Compares against an exact rational without rounding the rational.
    int compare(const Rational& q) const { return mpfr_cmp_q(value_, q.get_mpq_t()); }

private:
    mpfr_t value_;
};

BigFloat big_exp(const BigFloat& x);
BigFloat big_sqrt(const BigFloat& x);
BigFloat big_log(const BigFloat& x);

// Continued-fraction convergent p/q of x with |x - p/q| <= rel_tol * |x|.
// The convergent with the smallest denominator meeting the tolerance.
Rational rationalize(const BigFloat& x, const Rational& rel_tol);

std::string decimal_string(const BigFloat& value, int digits = 12);

}  // namespace attnrat
