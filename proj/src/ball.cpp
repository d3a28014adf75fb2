#include "cmrel/ball.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmrel/errors.hpp"

namespace cmrel {

namespace {

constexpr prec_t kRadPrec = 64;

/* out = |x| rounded up, at radius precision */
void abs_up(Real& out, const Real& x) { mpfr_abs(out.get(), x.get(), MPFR_RNDU); }

}  // namespace

Real::Real(prec_t p) {
  mpfr_init2(v_, p);
  mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) {
  mpfr_init2(v_, o.prec());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
  mpfr_init2(v_, o.prec());
  mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Real& Real::operator=(Real&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Real::~Real() { mpfr_clear(v_); }

std::string Real::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

Ball::Ball(prec_t p) : mid_(p), rad_(kRadPrec) {}

Ball Ball::from_si(long v, prec_t p) {
  Ball r(p);
  r.add_rounding(mpfr_set_si(r.mid_.get(), v, MPFR_RNDN));
  return r;
}

Ball Ball::from_mpz(const mpz_class& v, prec_t p) {
  Ball r(p);
  r.add_rounding(mpfr_set_z(r.mid_.get(), v.get_mpz_t(), MPFR_RNDN));
  return r;
}

Ball Ball::from_ratio(const mpz_class& num, const mpz_class& den, prec_t p) {
  return from_mpz(num, p) / from_mpz(den, p);
}

Ball Ball::from_double(double v, prec_t p) {
  Ball r(p);
  r.add_rounding(mpfr_set_d(r.mid_.get(), v, MPFR_RNDN));
  return r;
}

Ball Ball::pi(prec_t p) {
  Ball r(p);
  r.add_rounding(mpfr_const_pi(r.mid_.get(), MPFR_RNDN));
  return r;
}

Ball Ball::from_interval(const Real& lo, const Real& hi, prec_t p) {
  Ball r(p);
  mpfr_add(r.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(r.mid_.get(), r.mid_.get(), 1, MPFR_RNDN);
  Real t(kRadPrec), u(kRadPrec);
  mpfr_sub(t.get(), hi.get(), r.mid_.get(), MPFR_RNDU);
  mpfr_sub(u.get(), r.mid_.get(), lo.get(), MPFR_RNDU);
  mpfr_max(r.rad_.get(), t.get(), u.get(), MPFR_RNDU);
  if (r.rad_.sign() < 0) mpfr_set_zero(r.rad_.get(), 1);
  return r;
}

void Ball::add_error(const Real& e) {
  mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
}

void Ball::add_error_2exp(long e) {
  Real t(kRadPrec);
  mpfr_set_ui_2exp(t.get(), 1, e, MPFR_RNDU);
  add_error(t);
}

void Ball::add_rounding(int ternary) {
  if (ternary == 0 || mid_.is_zero() || !mpfr_number_p(mid_.get())) return;
  add_error_2exp(mpfr_get_exp(mid_.get()) - mid_.prec());
}

Real Ball::upper() const {
  Real r(prec());
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Real Ball::lower() const {
  Real r(prec());
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

Real Ball::abs_upper() const {
  Real r(prec());
  mpfr_abs(r.get(), mid_.get(), MPFR_RNDU);
  mpfr_add(r.get(), r.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Real Ball::abs_lower() const {
  Real r(prec());
  mpfr_abs(r.get(), mid_.get(), MPFR_RNDD);
  mpfr_sub(r.get(), r.get(), rad_.get(), MPFR_RNDD);
  if (r.sign() < 0) mpfr_set_zero(r.get(), 1);
  return r;
}

bool Ball::contains_zero() const {
  return mpfr_cmpabs(mid_.get(), rad_.get()) <= 0;
}

bool Ball::is_positive() const { return lower().sign() > 0; }
bool Ball::is_negative() const { return upper().sign() < 0; }

bool Ball::contains(const mpz_class& n) const {
  return mpfr_cmp_z(lower().get(), n.get_mpz_t()) <= 0 &&
         mpfr_cmp_z(upper().get(), n.get_mpz_t()) >= 0;
}

bool Ball::overlaps(const Ball& o) const {
  return mpfr_cmp(lower().get(), o.upper().get()) <= 0 &&
         mpfr_cmp(o.lower().get(), upper().get()) <= 0;
}

static double log2_of(const Real& x) {
  if (x.is_zero()) return -std::numeric_limits<double>::infinity();
  long e;
  double d = mpfr_get_d_2exp(&e, x.get(), MPFR_RNDN);
  return static_cast<double>(e) + std::log2(std::fabs(d));
}

double Ball::log2_rad() const { return log2_of(rad_); }
double Ball::log2_abs() const { return log2_of(mid_); }

Ball Ball::with_prec(prec_t p) const {
  Ball r(p);
  r.add_rounding(mpfr_set(r.mid_.get(), mid_.get(), MPFR_RNDN));
  r.add_error(rad_);
  return r;
}

bool Ball::round_to_integer(mpz_class& out) const {
  mpfr_get_z(out.get_mpz_t(), mid_.get(), MPFR_RNDN);
  if (mpfr_cmp_d(rad_.get(), 0.25) >= 0) return false;
  return contains(out);
}

std::string Ball::to_string(int digits) const {
  return mid_.to_string(digits) + " +/- " + rad_.to_string(3);
}

static prec_t pmax(const Ball& a, const Ball& b) { return std::max(a.prec(), b.prec()); }

Ball operator-(const Ball& a) {
  Ball r(a.prec());
  mpfr_neg(r.mid().get(), a.mid().get(), MPFR_RNDN);
  mpfr_set(r.rad().get(), a.rad().get(), MPFR_RNDU);
  return r;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(pmax(a, b));
  int t = mpfr_add(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  mpfr_add(r.rad().get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(pmax(a, b));
  int t = mpfr_sub(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  mpfr_add(r.rad().get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(pmax(a, b));
  int t = mpfr_mul(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  Real u(kRadPrec), v(kRadPrec);
  abs_up(u, a.mid());
  mpfr_mul(u.get(), u.get(), b.rad().get(), MPFR_RNDU);
  abs_up(v, b.mid());
  mpfr_mul(v.get(), v.get(), a.rad().get(), MPFR_RNDU);
  mpfr_add(u.get(), u.get(), v.get(), MPFR_RNDU);
  mpfr_mul(v.get(), a.rad().get(), b.rad().get(), MPFR_RNDU);
  mpfr_add(r.rad().get(), u.get(), v.get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  if (b.contains_zero()) throw precision_error("ball division by a ball containing zero");
  Ball r(pmax(a, b));
  int t = mpfr_div(r.mid().get(), a.mid().get(), b.mid().get(), MPFR_RNDN);
  if (!a.is_exact() || !b.is_exact()) {
    /* (|am| br + |bm| ar) / (|bm| (|bm| - br)) */
    Real num(kRadPrec), v(kRadPrec), den(kRadPrec);
    abs_up(num, a.mid());
    mpfr_mul(num.get(), num.get(), b.rad().get(), MPFR_RNDU);
    abs_up(v, b.mid());
    mpfr_mul(v.get(), v.get(), a.rad().get(), MPFR_RNDU);
    mpfr_add(num.get(), num.get(), v.get(), MPFR_RNDU);
    mpfr_abs(den.get(), b.mid().get(), MPFR_RNDD);
    mpfr_sub(v.get(), den.get(), b.rad().get(), MPFR_RNDD);
    mpfr_mul(den.get(), den.get(), v.get(), MPFR_RNDD);
    mpfr_div(r.rad().get(), num.get(), den.get(), MPFR_RNDU);
  }
  r.add_rounding(t);
  return r;
}

Ball operator+(const Ball& a, long b) {
  Ball r(a.prec());
  int t = mpfr_add_si(r.mid().get(), a.mid().get(), b, MPFR_RNDN);
  mpfr_set(r.rad().get(), a.rad().get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball operator-(const Ball& a, long b) { return a + (-b); }

Ball operator*(const Ball& a, long b) {
  Ball r(a.prec());
  int t = mpfr_mul_si(r.mid().get(), a.mid().get(), b, MPFR_RNDN);
  mpfr_mul_ui(r.rad().get(), a.rad().get(), static_cast<unsigned long>(std::labs(b)),
              MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball operator/(const Ball& a, long b) {
  if (b == 0) throw error("ball division by zero");
  Ball r(a.prec());
  int t = mpfr_div_si(r.mid().get(), a.mid().get(), b, MPFR_RNDN);
  mpfr_div_ui(r.rad().get(), a.rad().get(), static_cast<unsigned long>(std::labs(b)),
              MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball mul_2si(const Ball& a, long e) {
  Ball r(a.prec());
  mpfr_mul_2si(r.mid().get(), a.mid().get(), e, MPFR_RNDN);
  mpfr_mul_2si(r.rad().get(), a.rad().get(), e, MPFR_RNDU);
  return r;
}

Ball sqr(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_sqr(r.mid().get(), a.mid().get(), MPFR_RNDN);
  Real u(kRadPrec), v(kRadPrec);
  abs_up(u, a.mid());
  mpfr_mul(u.get(), u.get(), a.rad().get(), MPFR_RNDU);
  mpfr_mul_2ui(u.get(), u.get(), 1, MPFR_RNDU);
  mpfr_sqr(v.get(), a.rad().get(), MPFR_RNDU);
  mpfr_add(r.rad().get(), u.get(), v.get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball sqrt(const Ball& a) {
  if (a.mid().sign() <= 0 || !a.is_positive()) {
    if (a.upper().sign() < 0) throw error("sqrt of a negative ball");
    /* [0, sqrt(upper)] */
    Real hi(a.prec()), lo(a.prec());
    mpfr_sqrt(hi.get(), a.upper().get(), MPFR_RNDU);
    return Ball::from_interval(lo, hi, a.prec());
  }
  Ball r(a.prec());
  int t = mpfr_sqrt(r.mid().get(), a.mid().get(), MPFR_RNDN);
  if (!a.is_exact()) {
    /* |sqrt x - sqrt m| <= r / sqrt m */
    Real s(kRadPrec);
    mpfr_sqrt(s.get(), a.mid().get(), MPFR_RNDD);
    mpfr_div(r.rad().get(), a.rad().get(), s.get(), MPFR_RNDU);
  }
  r.add_rounding(t);
  return r;
}

Ball exp(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_exp(r.mid().get(), a.mid().get(), MPFR_RNDN);
  if (!a.is_exact()) {
    Real e(kRadPrec), m1(kRadPrec);
    mpfr_exp(e.get(), a.mid().get(), MPFR_RNDU);
    mpfr_expm1(m1.get(), a.rad().get(), MPFR_RNDU);
    mpfr_mul(r.rad().get(), e.get(), m1.get(), MPFR_RNDU);
  }
  r.add_rounding(t);
  return r;
}

Ball log(const Ball& a) {
  if (!a.is_positive()) throw precision_error("log of a ball not certainly positive");
  Ball r(a.prec());
  int t = mpfr_log(r.mid().get(), a.mid().get(), MPFR_RNDN);
  if (!a.is_exact()) {
    Real lo(kRadPrec);
    mpfr_sub(lo.get(), a.mid().get(), a.rad().get(), MPFR_RNDD);
    mpfr_div(r.rad().get(), a.rad().get(), lo.get(), MPFR_RNDU);
  }
  r.add_rounding(t);
  return r;
}

Ball cos(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_cos(r.mid().get(), a.mid().get(), MPFR_RNDN);
  mpfr_set(r.rad().get(), a.rad().get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball sin(const Ball& a) {
  Ball r(a.prec());
  int t = mpfr_sin(r.mid().get(), a.mid().get(), MPFR_RNDN);
  mpfr_set(r.rad().get(), a.rad().get(), MPFR_RNDU);
  r.add_rounding(t);
  return r;
}

Ball abs(const Ball& a) {
  if (a.contains_zero()) {
    Real lo(a.prec());
    return Ball::from_interval(lo, a.abs_upper(), a.prec());
  }
  return a.mid().sign() < 0 ? -a : a;
}

Ball pow_ui(const Ball& a, unsigned long n) {
  Ball acc = Ball::from_si(1, a.prec());
  Ball base = a;
  while (n) {
    if (n & 1) acc = acc * base;
    n >>= 1;
    if (n) base = sqr(base);
  }
  return acc;
}

Ball hull(const Ball& a, const Ball& b) {
  Real lo = a.lower(), hi = a.upper();
  Real lo2 = b.lower(), hi2 = b.upper();
  if (mpfr_cmp(lo2.get(), lo.get()) < 0) lo = lo2;
  if (mpfr_cmp(hi2.get(), hi.get()) > 0) hi = hi2;
  return Ball::from_interval(lo, hi, pmax(a, b));
}

bool certainly_lt(const Ball& a, const Ball& b) {
  return mpfr_cmp(a.upper().get(), b.lower().get()) < 0;
}

bool certainly_gt(const Ball& a, const Ball& b) { return certainly_lt(b, a); }

Real CBall::abs_upper() const {
  Real x = re.abs_upper(), y = im.abs_upper();
  mpfr_sqr(x.get(), x.get(), MPFR_RNDU);
  mpfr_sqr(y.get(), y.get(), MPFR_RNDU);
  mpfr_add(x.get(), x.get(), y.get(), MPFR_RNDU);
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDU);
  return x;
}

Real CBall::abs_lower() const {
  Real x = re.abs_lower(), y = im.abs_lower();
  mpfr_sqr(x.get(), x.get(), MPFR_RNDD);
  mpfr_sqr(y.get(), y.get(), MPFR_RNDD);
  mpfr_add(x.get(), x.get(), y.get(), MPFR_RNDD);
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDD);
  return x;
}

double CBall::log2_rad() const { return std::max(re.log2_rad(), im.log2_rad()); }

std::string CBall::to_string(int digits) const {
  return "(" + re.to_string(digits) + ") + i(" + im.to_string(digits) + ")";
}

CBall operator-(const CBall& a) { return {-a.re, -a.im}; }
CBall operator+(const CBall& a, const CBall& b) { return {a.re + b.re, a.im + b.im}; }
CBall operator-(const CBall& a, const CBall& b) { return {a.re - b.re, a.im - b.im}; }

CBall operator*(const CBall& a, const CBall& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

CBall operator*(const CBall& a, const Ball& b) { return {a.re * b, a.im * b}; }
CBall operator*(const CBall& a, long b) { return {a.re * b, a.im * b}; }
CBall operator+(const CBall& a, long b) { return {a.re + b, a.im}; }

CBall sqr(const CBall& a) {
  return {sqr(a.re) - sqr(a.im), mul_2si(a.re * a.im, 1)};
}

CBall conj(const CBall& a) { return {a.re, -a.im}; }

Ball norm(const CBall& a) { return sqr(a.re) + sqr(a.im); }

Ball abs(const CBall& a) {
  if (a.im.is_exact() && a.im.mid().is_zero()) return abs(a.re);
  return sqrt(norm(a));
}

CBall operator/(const CBall& a, const CBall& b) {
  Ball n = norm(b);
  CBall t = a * conj(b);
  return {t.re / n, t.im / n};
}

CBall pow_ui(const CBall& a, unsigned long n) {
  CBall acc(Ball::from_si(1, a.prec()), Ball(a.prec()));
  CBall base = a;
  while (n) {
    if (n & 1) acc = acc * base;
    n >>= 1;
    if (n) base = sqr(base);
  }
  return acc;
}

}  // namespace cmrel
