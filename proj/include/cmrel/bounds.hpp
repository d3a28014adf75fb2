#pragma once

#include <string>

#include <gmpxx.h>

#include "cmrel/ball.hpp"
#include "cmrel/quadforms.hpp"

namespace cmrel {

/* a positive quantity too large for a float, stored as its natural log */
struct HugeValue {
  Ball log_value;

  double log10() const;
  /* "m.mmmme+N" when N fits, otherwise "10^(x)" */
  std::string scientific(int digits = 6) const;
  bool certainly_less(const HugeValue& o) const { return certainly_lt(log_value, o.log_value); }
};

constexpr prec_t kBoundsPrec = 256;

/*
 * Lower bound for h(d) valid unless Q(sqrt d) is the single possible
 * exceptional field of the effective Siegel bound (eps = 1/12).
 */
Ball tatuzawa_lower(i64 d, prec_t p = kBoundsPrec);
/* |d| at which tatuzawa_lower equals n */
Ball tatuzawa_inverse(i64 n, prec_t p = kBoundsPrec);

/* unconditional lower bound on h(D) for fundamental D */
Ball ggz_lower(i64 D, prec_t p = kBoundsPrec);
/* prod over primes p | D except the largest of (1 - floor(2 sqrt p)/(p + 1)) */
mpq_class F(i64 D);

/* |d|^(1/2) <= 2 k^2 e^(21000 k^2) whenever h(d) <= k; returned as the |d| cap */
HugeValue class_floor_disc_cap(i64 k);
/* the same cap as an exact integer ceiling; feasible for small k */
mpz_class class_floor_disc_cap_exact(i64 k);

Ball paulin_upper(i64 d, prec_t p = kBoundsPrec);
Ball class_upper(i64 d, prec_t p = kBoundsPrec);

/* caps on |d|^(1/2) */
Ball thm_equal_bound(i64 n, prec_t p = kBoundsPrec);
Ball thm_field_bound(i64 n, prec_t p = kBoundsPrec);

/* 3.8e10 * 2.1e4^n * (n+1)^(4n+6), an integer */
mpz_class step4_bound(i64 n);
/* g(n) = (2n step4(n)^(4n/3))^2 and c2(n) = 2 g(n) e^(21000 g(n)) */
HugeValue g_bound(i64 n);
HugeValue c2_bound(i64 n);

Ball stirling_upper(i64 k, prec_t p = kBoundsPrec);

}  // namespace cmrel
