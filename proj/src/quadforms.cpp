#include "cmrel/quadforms.hpp"

#include <algorithm>
#include <numeric>

#include "cmrel/errors.hpp"

namespace cmrel {

std::string QuadForm::str() const {
  return "(" + std::to_string(a) + "," + std::to_string(b) + "," +
         std::to_string(c) + ")";
}

bool is_discriminant(i64 n) {
  return n < 0 && (mod(n, 4) == 0 || mod(n, 4) == 1);
}

bool is_fundamental(i64 d) {
  if (!is_discriminant(d)) return false;
  if (mod(d, 4) == 1) return is_squarefree(-d);
  i64 m = d / 4;
  i64 r = mod(m, 4);
  return (r == 2 || r == 3) && is_squarefree(-m);
}

std::pair<i64, i64> fundamental_decomposition(i64 d) {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  /* largest f with f^2 | d and d/f^2 fundamental */
  i64 F = 1;
  for (auto& [p, e] : factor(-d))
    for (int i = 0; i < e / 2; ++i) F *= p;
  i64 f = F;
  for (; f > 1; --f)
    if (F % f == 0 && is_fundamental(d / (f * f))) break;
  return {d / (f * f), f};
}

Discriminant::Discriminant(i64 value) : value_(value) {
  if (!is_discriminant(value) || value > -3) throw invalid_discriminant(value);
  auto [D, f] = fundamental_decomposition(value);
  fundamental_ = D;
  conductor_ = f;
}

bool is_reduced(const QuadForm& f) {
  if (f.a < 1) return false;
  if (-f.a < f.b && f.b <= f.a && f.a < f.c) return true;
  return 0 <= f.b && f.b <= f.a && f.a == f.c;
}

static i64 floor_div(i64 x, i64 y) {
  i64 q = x / y;
  if ((x % y != 0) && ((x < 0) != (y < 0))) --q;
  return q;
}

QuadForm reduce(QuadForm f) {
  const i64 d = f.disc();
  if (f.a <= 0 || d >= 0) throw error("reduce: form is not positive definite");
  for (;;) {
    /* b into (-a, a] */
    i64 k = floor_div(f.a - f.b, 2 * f.a);
    if (k != 0) {
      __int128 nb = (__int128)f.b + (__int128)2 * f.a * k;
      f.b = (i64)nb;
      f.c = (i64)(((__int128)f.b * f.b - d) / (4 * f.a));
    }
    if (f.a > f.c) {
      std::swap(f.a, f.c);
      f.b = -f.b;
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

QuadForm principal_form(i64 d) {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  i64 k = mod(d, 2);
  return QuadForm{1, k, (k * k - d) / 4};
}

std::vector<QuadForm> reduced_forms(i64 d) {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  std::vector<QuadForm> out;
  const i64 amax = isqrt(-d / 3);
  for (i64 a = 1; a <= amax; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      i64 num = b * b - d;
      if (num % (4 * a)) continue;
      i64 c = num / (4 * a);
      if (c < a) continue;
      if (b < 0 && a == c) continue;
      if (gcd(gcd(a, b), c) != 1) continue;
      out.push_back({a, b, c});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

i64 class_number(i64 d) { return static_cast<i64>(reduced_forms(d).size()); }

i64 class_number_formula(i64 D, i64 f) {
  if (!is_fundamental(D) || f < 1) throw invalid_discriminant(D * f * f);
  i64 hD = class_number(D);
  if (f == 1) return hD;
  /* h(f^2 D) = h(D) f / [O^*:O_f^*] prod_{p|f} (1 - (D/p)/p) */
  i64 num = hD * f, den = 1;
  for (i64 p : prime_divisors(f)) {
    num *= (p - kronecker(D, p));
    den *= p;
  }
  if (D == -3) den *= 3;
  if (D == -4) den *= 2;
  return num / den;
}

DenominatorCensus denominator_census(i64 d) {
  DenominatorCensus out;
  for (auto& q : reduced_forms(d)) ++out[q.a];
  return out;
}

int omega(i64 d) {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  return static_cast<int>(prime_divisors(-d).size());
}

int rho2(i64 d) {
  int w = omega(d);
  if (mod(d, 32) == 0) return w;
  if (mod(d, 16) == 4) return w - 2;
  return w - 1;
}

bool is_two_elementary(i64 d, i64 h) { return h == (i64(1) << rho2(d)); }

bool is_almost_two_elementary(i64 d, i64 h) {
  return ((i64(1) << (rho2(d) + 1)) % h) == 0;
}

bool is_two_elementary(i64 d) { return is_two_elementary(d, class_number(d)); }

bool is_almost_two_elementary(i64 d) {
  return is_almost_two_elementary(d, class_number(d));
}

ClassNumberTable::ClassNumberTable(i64 max_abs)
    : max_abs_(max_abs), h_(static_cast<std::size_t>(max_abs + 1), 0) {
  /* reduced: |b| <= a <= c, so |d| = 4ac - b^2 >= 3a^2 */
  for (i64 a = 1; 3 * a * a <= max_abs; ++a) {
    for (i64 b = -a + 1; b <= a; ++b) {
      i64 gab = gcd(a, b);
      for (i64 c = a;; ++c) {
        i64 n = 4 * a * c - b * b;
        if (n > max_abs) break;
        if (b < 0 && a == c) continue;
        if (gcd(gab, c) != 1) continue;
        ++h_[static_cast<std::size_t>(n)];
      }
    }
  }
}

i64 ClassNumberTable::operator()(i64 d) const {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  if (-d > max_abs_) throw error("ClassNumberTable: |d| beyond table");
  return h_[static_cast<std::size_t>(-d)];
}

}  // namespace cmrel
