#include "attnrat/high_precision.hpp"

#include "attnrat/errors.hpp"

#include <cstdlib>
#include <memory>

namespace attnrat {

Rational BigFloat::to_rational() const {
    if (mpfr_zero_p(value_)) return 0;
    if (!mpfr_number_p(value_)) throw ValidationError("cannot convert a non-finite float to a rational");
    Integer mantissa;
    mpfr_exp_t exp = mpfr_get_z_2exp(mantissa.get_mpz_t(), value_);
    Rational r(mantissa);
    if (exp >= 0) {
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(exp));
    } else {
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-exp));
    }
    return r;
}

BigFloat big_exp(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_exp(r.get(), x.get(), MPFR_RNDN);
    return r;
}

BigFloat big_sqrt(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_sqrt(r.get(), x.get(), MPFR_RNDN);
    return r;
}

BigFloat big_log(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_log(r.get(), x.get(), MPFR_RNDN);
    return r;
}

Rational rationalize(const BigFloat& x, const Rational& rel_tol) {
    const Rational target = x.to_rational();
    if (target == 0) return 0;
    const Rational tolerance = abs(target) * rel_tol;
    // Convergents h_k / k_k of the continued fraction of target.
    Integer h_prev = 1, h_prev2 = 0;
    Integer k_prev = 0, k_prev2 = 1;
    Rational rest = target;
    for (int iter = 0; iter < 4096; ++iter) {
        Integer a;
        mpz_fdiv_q(a.get_mpz_t(), rest.get_num_mpz_t(), rest.get_den_mpz_t());
        Integer h = a * h_prev + h_prev2;
        Integer k = a * k_prev + k_prev2;
        Rational convergent(h, k);
        convergent.canonicalize();
        if (abs(convergent - target) <= tolerance) return convergent;
        Rational frac = rest - Rational(a);
        if (frac == 0) return convergent;
        rest = 1 / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
    }
    return target;
}

std::string decimal_string(const BigFloat& value, int digits) {
    char* buffer = nullptr;
    mpfr_asprintf(&buffer, "%.*Rg", digits, value.get());
    std::unique_ptr<char, decltype(&mpfr_free_str)> holder(buffer, &mpfr_free_str);
    return std::string(buffer);
}

}  // namespace attnrat
