#pragma once

#include <vector>

#include "cmrel/ball.hpp"
#include "cmrel/quadforms.hpp"

namespace cmrel {

struct SingularModulus {
  QuadForm form;
  i64 disc = -4;
  CBall value;
  prec_t precision = 0;
};

/*
 * j(tau) for Im tau >= sqrt(3)/2 as E4^3 / (q prod (1 - q^n)^24).  The
 * radius satisfies rad <= 2^-precision * max(1, |j|).
 */
CBall j_eval(const CBall& tau, prec_t precision);

/* (-b + i sqrt|d|) / (2a) */
CBall cm_point(const QuadForm& f, prec_t p);

/* bits of magnitude of the modulus attached to f: pi sqrt|d| / (a ln 2) */
double magnitude_bits(const QuadForm& f);

SingularModulus singular_modulus(const QuadForm& f, prec_t precision);

/* all moduli of d, in reduced_forms order; conjugate pairs share one evaluation */
std::vector<CBall> singular_moduli(i64 d, prec_t precision);

/* max over T_d of the certified upper bound of | |x| - exp(pi sqrt|d| / a) | */
double bmz_deviation(i64 d);

/*
 * every pair of distinct moduli of d1, d2 is at distance at least
 * 800 max(|d1|, |d2|)^-4; throws precision_error if undecided
 */
bool separation_check(i64 d1, i64 d2, prec_t precision);

/* certified: |y| <= 6 |x| / exp(pi sqrt|d| / 2) for nondominant y, dominant x */
bool dominance_check(i64 d);

}  // namespace cmrel
