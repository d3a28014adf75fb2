#include "cmrel/bounds.hpp"

#include <cmath>

#include "cmrel/errors.hpp"

namespace cmrel {

namespace {

Ball absd(i64 d, prec_t p) { return Ball::from_si(d < 0 ? -d : d, p); }

Ball rational(long num, long den, prec_t p) {
  return Ball::from_si(num, p) / den;
}

/* x^(num/den) for x > 0 */
Ball rpow(const Ball& x, long num, long den) {
  return exp(log(x) * rational(num, den, x.prec()));
}

}  // namespace

double HugeValue::log10() const {
  return log_value.mid_double() / M_LN10;
}

std::string HugeValue::scientific(int digits) const {
  const prec_t p = log_value.prec();
  Ball l10 = log_value / log(Ball::from_si(10, p));
  double e = l10.mid_double();
  if (std::fabs(e) < 1e15) {
    double ip = std::floor(e);
    Ball frac = l10 - Ball::from_double(ip, p);
    double m = std::pow(10.0, frac.mid_double());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*fe+%.0f", digits - 1, m, ip);
    return buf;
  }
  return "10^(" + l10.mid().to_string(digits) + ")";
}

Ball tatuzawa_lower(i64 d, prec_t p) {
  return rational(37, 50000, p) * rpow(absd(d, p), 5, 12);
}

Ball tatuzawa_inverse(i64 n, prec_t p) {
  return rpow(Ball::from_si(50000 * n, p) / 37, 12, 5);
}

Ball ggz_lower(i64 D, prec_t p) {
  if (!is_fundamental(D)) throw invalid_discriminant(D);
  return sqrt(log(absd(D, p)) / 42000);
}

mpq_class F(i64 D) {
  auto ps = prime_divisors(D);
  mpq_class r = 1;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    i64 q = ps[i];
    i64 s = isqrt(4 * q); /* floor(2 sqrt q) */
    r *= mpq_class(q + 1 - s, q + 1);
  }
  r.canonicalize();
  return r;
}

HugeValue class_floor_disc_cap(i64 k) {
  if (k < 1) throw error("class_floor_disc_cap: k >= 1 required");
  const prec_t p = kBoundsPrec;
  Ball kk = Ball::from_si(k, p);
  /* (2 k^2 e^(21000 k^2))^2 = 4 k^4 e^(42000 k^2) */
  Ball l = log(Ball::from_si(4, p)) + log(kk) * 4 + sqr(kk) * 42000;
  return {l};
}

mpz_class class_floor_disc_cap_exact(i64 k) {
  HugeValue h = class_floor_disc_cap(k);
  prec_t bits = static_cast<prec_t>(h.log_value.mid_double() / M_LN2) + 128;
  for (int attempt = 0; attempt < 4; ++attempt, bits *= 2) {
    Ball kk = Ball::from_si(k, bits);
    Ball v = pow_ui(kk, 4) * 4 * exp(sqr(kk) * 42000);
    mpz_class lo, hi;
    mpfr_get_z(lo.get_mpz_t(), v.lower().get(), MPFR_RNDU);
    mpfr_get_z(hi.get_mpz_t(), v.upper().get(), MPFR_RNDU);
    if (lo == hi) return lo;
  }
  throw precision_error("class_floor_disc_cap_exact: ceiling undecided");
}

Ball paulin_upper(i64 d, prec_t p) {
  Ball x = absd(d, p);
  return sqrt(x) * (log(x) + 2) / Ball::pi(p);
}

Ball class_upper(i64 d, prec_t p) { return rpow(absd(d, p), 2, 3); }

Ball thm_equal_bound(i64 n, prec_t p) {
  Ball nn = Ball::from_si(n, p);
  return ((nn * 2 + 3) * log(nn + 1) - nn * 2 + 4) / Ball::pi(p);
}

Ball thm_field_bound(i64 n, prec_t p) {
  Ball nn = Ball::from_si(n, p);
  return ((nn * 4 + 3) * log(nn * 2 + 1) - nn * 4 + 4) / Ball::pi(p);
}

mpz_class step4_bound(i64 n) {
  if (n < 1) throw error("step4_bound: n >= 1 required");
  mpz_class a, b;
  mpz_ui_pow_ui(a.get_mpz_t(), 21000, static_cast<unsigned long>(n));
  mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(n + 1),
                static_cast<unsigned long>(4 * n + 6));
  return mpz_class("38000000000") * a * b;
}

HugeValue g_bound(i64 n) {
  const prec_t p = kBoundsPrec;
  Ball ls = log(Ball::from_mpz(step4_bound(n), p));
  Ball l = (log(Ball::from_si(2 * n, p)) + ls * (4 * n) / 3) * 2;
  return {l};
}

HugeValue c2_bound(i64 n) {
  HugeValue g = g_bound(n);
  const prec_t p = kBoundsPrec;
  /* log(2 g e^(21000 g)) = log 2 + log g + 21000 g */
  Ball l = log(Ball::from_si(2, p)) + g.log_value + exp(g.log_value) * 21000;
  return {l};
}

Ball stirling_upper(i64 k, prec_t p) {
  Ball kk = Ball::from_si(k, p);
  Ball e = (kk + rational(1, 2, p)) * log(kk) - kk + rational(1, 12, p);
  return sqrt(mul_2si(Ball::pi(p), 1)) * exp(e);
}

}  // namespace cmrel
