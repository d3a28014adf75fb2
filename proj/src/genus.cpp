#include "cmrel/genus.hpp"

#include <algorithm>
#include <set>

#include "cmrel/errors.hpp"

namespace cmrel {

i64 squarefree_part(i64 n) {
  if (n == 0) throw error("squarefree_part(0)");
  i64 r = n < 0 ? -1 : 1;
  for (auto& [p, e] : factor(n))
    if (e % 2) r *= p;
  return r;
}

i64 square_class_mul(i64 a, i64 b) {
  i64 g = gcd(a, b);
  return (a / g) * (b / g);
}

std::vector<i64> genus_generators(i64 d) {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  std::vector<i64> gens;
  for (i64 p : prime_divisors(-d)) {
    if (p == 2) continue;
    gens.push_back(p % 4 == 1 ? p : -p);
  }
  if (mod(d, 4) == 0) {
    i64 n = -d / 4;
    switch (mod(n, 8)) {
      case 1: case 5: gens.push_back(-1); break;
      case 2: gens.push_back(-2); break;
      case 6: gens.push_back(2); break;
      case 4: gens.push_back(-1); break;
      case 0: gens.push_back(-1); gens.push_back(2); break;
      default: break; /* n = 3 mod 4 */
    }
  }
  return gens;
}

std::vector<i64> genus_square_classes(i64 d) {
  std::set<i64> s{1};
  for (i64 g : genus_generators(d)) {
    std::set<i64> next = s;
    for (i64 x : s) next.insert(square_class_mul(x, g));
    s.swap(next);
  }
  return {s.begin(), s.end()};
}

std::vector<i64> positive_genus_classes(i64 d) {
  std::vector<i64> out;
  for (i64 x : genus_square_classes(d))
    if (x > 0) out.push_back(x);
  return out;
}

std::vector<i64> positive_genus_basis(i64 d) {
  std::vector<i64> basis;
  std::set<i64> span{1};
  for (i64 x : positive_genus_classes(d)) {
    if (span.count(x)) continue;
    basis.push_back(x);
    std::set<i64> next = span;
    for (i64 y : span) next.insert(square_class_mul(x, y));
    span.swap(next);
  }
  return basis;
}

bool is_subset(const std::vector<i64>& a, const std::vector<i64>& b) {
  for (i64 x : a)
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

i64 represented_prime_to(const QuadForm& f, i64 m) {
  for (i64 bound = 1; bound < 1000; ++bound)
    for (i64 u = -bound; u <= bound; ++u)
      for (i64 v = 0; v <= bound; ++v) {
        if (std::max<i64>(u < 0 ? -u : u, v) != bound) continue;
        if (gcd(u, v) != 1) continue;
        i64 n = f.a * u * u + f.b * u * v + f.c * v * v;
        if (n % 2 && gcd(n, m) == 1) return n;
      }
  throw error("represented_prime_to: search exhausted for " + f.str());
}

int genus_character(i64 s, const QuadForm& f) {
  i64 n = represented_prime_to(f, 2 * s * f.disc());
  return kronecker(s, n);
}

std::string field_label(const std::vector<i64>& basis) {
  if (basis.empty()) return "Q";
  std::string s = "Q(";
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (i) s += ",";
    s += "sqrt(" + std::to_string(basis[i]) + ")";
  }
  return s + ")";
}

}  // namespace cmrel
