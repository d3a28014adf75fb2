#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <string>

namespace cmrel {

using prec_t = mpfr_prec_t;

/* owning wrapper around an mpfr_t */
class Real {
 public:
  explicit Real(prec_t p = 64);
  Real(const Real& o);
  Real(Real&& o) noexcept;
  Real& operator=(const Real& o);
  Real& operator=(Real&& o) noexcept;
  ~Real();

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  std::string to_string(int digits = 20) const;

 private:
  mpfr_t v_;
};

/*
 * Real ball: the exact value lies in [mid - rad, mid + rad].  Radii are
 * kept at 64 bits and always rounded upward.
 */
class Ball {
 public:
  explicit Ball(prec_t p = 64);

  static Ball from_si(long v, prec_t p);
  static Ball from_mpz(const mpz_class& v, prec_t p);
  static Ball from_ratio(const mpz_class& num, const mpz_class& den, prec_t p);
  static Ball from_double(double v, prec_t p);
  static Ball pi(prec_t p);
  /* ball covering [lo, hi] given as mpfr values */
  static Ball from_interval(const Real& lo, const Real& hi, prec_t p);

  prec_t prec() const { return mid_.prec(); }
  const Real& mid() const { return mid_; }
  const Real& rad() const { return rad_; }
  Real& mid() { return mid_; }
  Real& rad() { return rad_; }

  void add_error(const Real& e);
  void add_error_2exp(long e);
  /* account for the rounding of mid to its precision (ternary != 0) */
  void add_rounding(int ternary);

  bool contains_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  bool is_exact() const { return rad_.is_zero(); }
  bool contains(const mpz_class& n) const;
  bool overlaps(const Ball& o) const;

  Real upper() const;
  Real lower() const;
  Real abs_upper() const;
  Real abs_lower() const;

  double mid_double() const { return mid_.to_double(); }
  double rad_double() const { return rad_.to_double(); }
  /* log2 of the radius (very negative for tiny radii); -inf if exact */
  double log2_rad() const;
  /* log2 of |mid| */
  double log2_abs() const;

  Ball with_prec(prec_t p) const;
  /* nearest integer to mid; true iff the ball has radius < 1/4 and contains it */
  bool round_to_integer(mpz_class& out) const;

  std::string to_string(int digits = 20) const;

 private:
  Real mid_, rad_;
};

Ball operator-(const Ball& a);
Ball operator+(const Ball& a, const Ball& b);
Ball operator-(const Ball& a, const Ball& b);
Ball operator*(const Ball& a, const Ball& b);
Ball operator/(const Ball& a, const Ball& b);
Ball operator+(const Ball& a, long b);
Ball operator-(const Ball& a, long b);
Ball operator*(const Ball& a, long b);
Ball operator/(const Ball& a, long b);
Ball mul_2si(const Ball& a, long e);
Ball sqr(const Ball& a);
Ball sqrt(const Ball& a);
Ball exp(const Ball& a);
Ball log(const Ball& a);
Ball cos(const Ball& a);
Ball sin(const Ball& a);
Ball abs(const Ball& a);
Ball pow_ui(const Ball& a, unsigned long n);
/* union hull of two balls */
Ball hull(const Ball& a, const Ball& b);

/* certified comparisons: true only when proven */
bool certainly_lt(const Ball& a, const Ball& b);
bool certainly_gt(const Ball& a, const Ball& b);

/* complex ball, rectangular */
struct CBall {
  Ball re, im;

  CBall() = default;
  explicit CBall(prec_t p) : re(p), im(p) {}
  CBall(Ball r, Ball i) : re(std::move(r)), im(std::move(i)) {}

  prec_t prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
  Real abs_upper() const;
  Real abs_lower() const;
  double log2_rad() const;
  std::string to_string(int digits = 20) const;
};

CBall operator-(const CBall& a);
CBall operator+(const CBall& a, const CBall& b);
CBall operator-(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const CBall& b);
CBall operator*(const CBall& a, const Ball& b);
CBall operator*(const CBall& a, long b);
CBall operator/(const CBall& a, const CBall& b);
CBall operator+(const CBall& a, long b);
CBall sqr(const CBall& a);
CBall conj(const CBall& a);
CBall pow_ui(const CBall& a, unsigned long n);
Ball abs(const CBall& a);
Ball norm(const CBall& a);


}  // namespace cmrel
