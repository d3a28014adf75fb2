#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace cmrel {

using i64 = std::int64_t;

/* prime factorization by trial division, primes ascending, n >= 1 */
std::vector<std::pair<i64, int>> factor(i64 n);
std::vector<i64> prime_divisors(i64 n);

i64 gcd(i64 a, i64 b);
i64 isqrt(i64 n);
bool is_squarefree(i64 n);
bool is_prime(i64 n);

/* Kronecker symbol (a/n) for any integers, n may be even or negative */
int kronecker(i64 a, i64 n);

/* Euclid's algorithm: returns g and sets x, y with a*x + b*y = g */
i64 ext_gcd(i64 a, i64 b, i64& x, i64& y);

/* inverse of a modulo m (m > 0, gcd(a, m) = 1) */
i64 inv_mod(i64 a, i64 m);

inline i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

/* list of primes up to n (simple sieve) */
std::vector<i64> primes_up_to(i64 n);

}  // namespace cmrel
