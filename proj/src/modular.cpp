#include "cmrel/modular.hpp"

#include <algorithm>
#include <cmath>

#include "cmrel/errors.hpp"

namespace cmrel {

namespace {

constexpr prec_t kMaxWorkingPrec = prec_t(1) << 24;

std::vector<long> sigma3_table(long n) {
  std::vector<long> s(n + 1, 0);
  for (long d = 1; d <= n; ++d) {
    long d3 = d * d * d;
    for (long m = d; m <= n; m += d) s[m] += d3;
  }
  return s;
}

/* upper bound at 64 bits of 240 (N+1)^4 r^(N+1) / (1 - ((N+2)/(N+1))^4 r) */
Real e4_tail(const Real& r, long N) {
  Real t(64), u(64), rho(64);
  mpfr_set_si(t.get(), N + 1, MPFR_RNDU);
  mpfr_pow_ui(t.get(), t.get(), 4, MPFR_RNDU);
  mpfr_mul_ui(t.get(), t.get(), 240, MPFR_RNDU);
  mpfr_pow_ui(u.get(), r.get(), N + 1, MPFR_RNDU);
  mpfr_mul(t.get(), t.get(), u.get(), MPFR_RNDU);
  mpfr_set_si(rho.get(), N + 2, MPFR_RNDU);
  mpfr_div_si(rho.get(), rho.get(), N + 1, MPFR_RNDU);
  mpfr_pow_ui(rho.get(), rho.get(), 4, MPFR_RNDU);
  mpfr_mul(rho.get(), rho.get(), r.get(), MPFR_RNDU);
  mpfr_ui_sub(rho.get(), 1, rho.get(), MPFR_RNDD);
  if (rho.sign() <= 0) {
    mpfr_set_inf(t.get(), 1);
    return t;
  }
  mpfr_div(t.get(), t.get(), rho.get(), MPFR_RNDU);
  return t;
}

/* upper bound of r^(N+1) / (1 - r) */
Real eta_tail(const Real& r, long N) {
  Real t(64), u(64);
  mpfr_pow_ui(t.get(), r.get(), N + 1, MPFR_RNDU);
  mpfr_ui_sub(u.get(), 1, r.get(), MPFR_RNDD);
  mpfr_div(t.get(), t.get(), u.get(), MPFR_RNDU);
  return t;
}

bool is_gen_pentagonal(long n, int& sign) {
  /* n = k(3k-1)/2 for k in Z  <=>  24n + 1 = (6k - 1)^2 */
  long s = 24 * n + 1;
  long r = static_cast<long>(std::llround(std::sqrt(static_cast<double>(s))));
  while (r * r > s) --r;
  while ((r + 1) * (r + 1) <= s) ++r;
  if (r * r != s) return false;
  /* r = |6k - 1|, k = (1 + r)/6 or (1 - r)/6 */
  long k = (r % 6 == 5) ? (1 + r) / 6 : (1 - r) / 6;
  sign = (k % 2 == 0) ? 1 : -1;
  return true;
}

CBall j_at_precision(const CBall& tau, prec_t wp) {
  Ball two_pi = mul_2si(Ball::pi(wp), 1);
  Ball modq = exp(-(two_pi * tau.im.with_prec(wp)));
  Ball ang = two_pi * tau.re.with_prec(wp);
  CBall q(modq * cos(ang), modq * sin(ang));
  Real r = modq.abs_upper();
  Real r64(64);
  mpfr_set(r64.get(), r.get(), MPFR_RNDU);
  if (mpfr_cmp_d(r64.get(), 0.01) > 0) throw error("j_eval: Im tau below sqrt(3)/2");

  /* number of terms: 240 (N+1)^4 r^(N+1) < 2^-(wp + 8) */
  long rexp;
  double rm = mpfr_get_d_2exp(&rexp, r64.get(), MPFR_RNDU);
  const double lr = static_cast<double>(rexp) + std::log2(rm);
  long N = 1;
  while (std::log2(240.0) + 4 * std::log2(N + 1.0) + (N + 1) * lr > -double(wp) - 8) ++N;

  auto s3 = sigma3_table(N);
  CBall e4(Ball::from_si(1, wp), Ball(wp));
  CBall eta(Ball::from_si(1, wp), Ball(wp));
  CBall qn = q;
  for (long n = 1; n <= N; ++n) {
    if (n > 1) qn = qn * q;
    e4 = e4 + qn * (240 * s3[n]);
    int sg;
    if (is_gen_pentagonal(n, sg)) eta = sg > 0 ? eta + qn : eta - qn;
  }
  Real t1 = e4_tail(r64, N), t2 = eta_tail(r64, N);
  e4.re.add_error(t1);
  e4.im.add_error(t1);
  eta.re.add_error(t2);
  eta.im.add_error(t2);
  CBall e4c = e4 * sqr(e4);
  CBall disc = q * pow_ui(eta, 24);
  return e4c / disc;
}

bool radius_ok(const CBall& j, prec_t precision) {
  /* radius <= 2^-precision * max(1, |j|) */
  Real scale = j.abs_lower();
  if (mpfr_cmp_ui(scale.get(), 1) < 0) mpfr_set_ui(scale.get(), 1, MPFR_RNDN);
  Real bound(64), rr(64);
  mpfr_mul_2si(bound.get(), scale.get(), -static_cast<long>(precision), MPFR_RNDD);
  mpfr_max(rr.get(), j.re.rad().get(), j.im.rad().get(), MPFR_RNDU);
  return mpfr_cmp(rr.get(), bound.get()) <= 0;
}

prec_t guard_bits(double im) {
  return 64 + static_cast<prec_t>(std::ceil(2 * M_PI * im / M_LN2));
}

}  // namespace

CBall j_eval(const CBall& tau, prec_t precision) {
  prec_t wp = precision + guard_bits(tau.im.mid_double());
  for (int attempt = 0; attempt < 2; ++attempt, wp *= 2) {
    CBall j = j_at_precision(tau, wp);
    if (radius_ok(j, precision)) return j;
  }
  throw precision_error("j_eval: enclosure too wide (input tau too coarse?)");
}

static CBall j_cm(const QuadForm& f, prec_t precision) {
  prec_t wp = precision + guard_bits(magnitude_bits(f) * M_LN2 / (2 * M_PI));
  for (;;) {
    CBall j = j_at_precision(cm_point(f, wp + 32), wp);
    if (radius_ok(j, precision)) return j;
    wp *= 2;
    if (wp > kMaxWorkingPrec)
      throw precision_error("j_eval: working precision cap exceeded");
  }
}

CBall cm_point(const QuadForm& f, prec_t p) {
  const i64 d = f.disc();
  Ball re = Ball::from_ratio(mpz_class(-f.b), mpz_class(2 * f.a), p);
  Ball im = sqrt(Ball::from_si(-d, p)) / (2 * f.a);
  return CBall(re, im);
}

double magnitude_bits(const QuadForm& f) {
  return M_PI * std::sqrt(static_cast<double>(-f.disc())) / (f.a * M_LN2);
}

SingularModulus singular_modulus(const QuadForm& f, prec_t precision) {
  if (!is_reduced(f)) throw error("singular_modulus: form " + f.str() + " not reduced");
  CBall v = j_cm(f, precision);
  if (f.b == 0 || f.a == f.b || f.a == f.c) v.im = Ball(v.re.prec()); /* real modulus */
  return SingularModulus{f, f.disc(), v, precision};
}

std::vector<CBall> singular_moduli(i64 d, prec_t precision) {
  auto forms = reduced_forms(d);
  std::vector<CBall> out(forms.size());
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const QuadForm& f = forms[i];
    if (f.b < 0) {
      /* conjugate of (a, -b, c), which sorts after this form */
      continue;
    }
    out[i] = singular_modulus(f, precision).value;
  }
  for (std::size_t i = 0; i < forms.size(); ++i) {
    if (forms[i].b >= 0) continue;
    QuadForm g{forms[i].a, -forms[i].b, forms[i].c};
    auto it = std::lower_bound(forms.begin(), forms.end(), g);
    out[i] = conj(out[static_cast<std::size_t>(it - forms.begin())]);
  }
  return out;
}

double bmz_deviation(i64 d) {
  double worst = 0;
  for (const auto& f : reduced_forms(d)) {
    prec_t p = 64 + static_cast<prec_t>(magnitude_bits(f));
    CBall x = singular_modulus(f, p).value;
    Ball e = exp(Ball::pi(p + 64) * sqrt(Ball::from_si(-d, p + 64)) / f.a);
    Ball dev = abs(abs(x) - e);
    Real up = dev.abs_upper();
    double u = mpfr_get_d(up.get(), MPFR_RNDU);
    worst = std::max(worst, u);
  }
  return worst;
}

bool separation_check(i64 d1, i64 d2, prec_t precision) {
  auto f1 = reduced_forms(d1), f2 = reduced_forms(d2);
  auto x = singular_moduli(d1, precision);
  auto y = d1 == d2 ? x : singular_moduli(d2, precision);
  const i64 M = std::max(-d1, -d2);
  Ball bound = Ball::from_si(800, precision) /
               pow_ui(Ball::from_si(M, precision), 4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = (d1 == d2 ? i + 1 : 0); j < y.size(); ++j) {
      CBall diff = x[i] - y[j];
      Real lo = diff.abs_lower();
      if (mpfr_cmp(lo.get(), bound.upper().get()) >= 0) continue;
      Real hi = diff.abs_upper();
      if (mpfr_cmp(hi.get(), bound.lower().get()) < 0) return false;
      throw precision_error("separation_check: undecided at this precision");
    }
  }
  return true;
}

bool dominance_check(i64 d) {
  auto forms = reduced_forms(d);
  if (forms.size() < 2) return true;
  prec_t p = 96 + static_cast<prec_t>(magnitude_bits(forms[0]));
  auto v = singular_moduli(d, p);
  Ball e = exp(Ball::pi(p) * sqrt(Ball::from_si(-d, p)) / 2);
  Ball rhs = abs(v[0]) * 6 / e;
  for (std::size_t i = 1; i < v.size(); ++i) {
    Real hi = v[i].abs_upper();
    if (mpfr_cmp(hi.get(), rhs.lower().get()) > 0) return false;
  }
  return true;
}

}  // namespace cmrel
