#include "cmrel/classgroup.hpp"

#include <algorithm>
#include <memory>
#include <numeric>
#include <set>

#include "cmrel/errors.hpp"

namespace cmrel {

FormClass make_class(const QuadForm& f) {
  i64 d = f.disc();
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  return FormClass{reduce(f), d};
}

FormClass identity_class(i64 d) { return FormClass{principal_form(d), d}; }

FormClass compose(const FormClass& f, const FormClass& g) {
  if (f.disc != g.disc)
    throw discriminant_mismatch("compose: " + std::to_string(f.disc) + " vs " +
                                std::to_string(g.disc));
  const i64 D = f.disc;
  QuadForm f1 = f.rep, f2 = g.rep;
  if (f1.a > f2.a) std::swap(f1, f2);
  const i64 s = (f1.b + f2.b) / 2;
  const i64 n = f2.b - s;
  i64 y1, d;
  if (f2.a % f1.a == 0) {
    y1 = 0;
    d = f1.a;
  } else {
    i64 u, v;
    d = ext_gcd(f2.a, f1.a, u, v);
    y1 = u;
  }
  i64 x2, y2, d1;
  if (s % d == 0) {
    y2 = -1;
    x2 = 0;
    d1 = d;
  } else {
    i64 u, v;
    d1 = ext_gcd(s, d, u, v);
    x2 = u;
    y2 = -v;
  }
  const i64 v1 = f1.a / d1, v2 = f2.a / d1;
  __int128 t = (__int128)y1 * y2 * n - (__int128)x2 * f2.c;
  i64 r = (i64)(t % v1);
  if (r < 0) r += v1;
  __int128 b3 = (__int128)f2.b + (__int128)2 * v2 * r;
  __int128 a3 = (__int128)v1 * v2;
  /* reduce b3 modulo 2 a3 before forming c3 to keep magnitudes small */
  __int128 m2 = 2 * a3;
  b3 %= m2;
  if (b3 > a3) b3 -= m2;
  if (b3 <= -a3) b3 += m2;
  __int128 c3 = (b3 * b3 - D) / (4 * a3);
  return FormClass{reduce(QuadForm{(i64)a3, (i64)b3, (i64)c3}), D};
}

FormClass inverse(const FormClass& f) {
  return FormClass{reduce(QuadForm{f.rep.a, -f.rep.b, f.rep.c}), f.disc};
}

FormClass power(const FormClass& f, i64 n) {
  FormClass base = n < 0 ? inverse(f) : f;
  if (n < 0) n = -n;
  FormClass acc = identity_class(f.disc);
  while (n) {
    if (n & 1) acc = compose(acc, base);
    base = compose(base, base);
    n >>= 1;
  }
  return acc;
}

i64 two_torsion_count(i64 d) {
  const QuadForm e = principal_form(d);
  i64 n = 0;
  for (const auto& f : reduced_forms(d)) {
    FormClass c{f, d};
    if (compose(c, c).rep == e) ++n;
  }
  return n;
}

QuadForm representative_prime_to(const QuadForm& f, i64 m) {
  if (gcd(f.a, m) == 1) return f;
  for (i64 bound = 1;; ++bound) {
    for (i64 u = -bound; u <= bound; ++u) {
      for (i64 v = 0; v <= bound; ++v) {
        if (std::max<i64>(u < 0 ? -u : u, v) != bound) continue;
        if (v == 0 && u <= 0) continue;
        if (gcd(u, v) != 1) continue;
        i64 a = f.a * u * u + f.b * u * v + f.c * v * v;
        if (gcd(a, m) != 1) continue;
        /* complete (u, v) to a matrix [[u, s], [v, t]] of determinant 1 */
        i64 x, y;
        ext_gcd(u, v, x, y);
        i64 t = x, s = -y;
        i64 b = 2 * f.a * u * s + f.b * (u * t + s * v) + 2 * f.c * v * t;
        i64 c = f.a * s * s + f.b * s * t + f.c * t * t;
        return QuadForm{a, b, c};
      }
    }
  }
}

FormClass project(const FormClass& f, i64 target) {
  Discriminant src(f.disc), dst(target);
  if (src.fundamental() != dst.fundamental() ||
      src.conductor() % dst.conductor() != 0)
    throw discriminant_mismatch("project: " + std::to_string(f.disc) +
                                " -> " + std::to_string(target));
  const i64 m = src.conductor() / dst.conductor();
  if (m == 1) return f;
  QuadForm g = representative_prime_to(f.rep, m);
  const i64 a = g.a;
  /* b' with m b' = b (mod 2a) and b' = target (mod 2) */
  i64 bp;
  if (a % 2 == 0) {
    bp = mod(inv_mod(m, 2 * a) * mod(g.b, 2 * a), 2 * a);
  } else {
    i64 r = mod(inv_mod(m, a) * mod(g.b, a), a);
    bp = (mod(r, 2) == mod(target, 2)) ? r : r + a;
  }
  __int128 c = ((__int128)bp * bp - target) / (4 * a);
  return FormClass{reduce(QuadForm{a, bp, (i64)c}), target};
}

ClassGroup::ClassGroup(i64 d) : d_(d), forms_(reduced_forms(d)) {
  for (std::size_t i = 0; i < forms_.size(); ++i) index_[forms_[i]] = i;
  inv_.resize(forms_.size());
  for (std::size_t i = 0; i < forms_.size(); ++i)
    inv_[i] = index_of(inverse(FormClass{forms_[i], d_}).rep);
  const std::size_t h = forms_.size();
  if (h > kTableLimit) return;
  table_.assign(h * h, 0);
  for (std::size_t i = 0; i < h; ++i)
    for (std::size_t j = i; j < h; ++j) {
      std::size_t k =
          index_of(compose(FormClass{forms_[i], d_}, FormClass{forms_[j], d_}).rep);
      table_[i * h + j] = table_[j * h + i] = k;
    }
}

std::size_t ClassGroup::index_of(const QuadForm& reduced) const {
  auto it = index_.find(reduced);
  if (it == index_.end())
    throw error("form " + reduced.str() + " not in class group of " +
                std::to_string(d_));
  return it->second;
}

std::size_t ClassGroup::mul(std::size_t i, std::size_t j) const {
  if (table_.empty())
    return index_of(compose(FormClass{forms_[i], d_}, FormClass{forms_[j], d_}).rep);
  return table_[i * forms_.size() + j];
}

std::vector<std::size_t> ClassGroup::projection_to(const ClassGroup& target) const {
  std::vector<std::size_t> out(size());
  for (std::size_t i = 0; i < size(); ++i)
    out[i] = target.index_of(project(FormClass{forms_[i], d_}, target.d_).rep);
  return out;
}

OrbitEngine::OrbitEngine(i64 dx, i64 dy, i64 dz) : disc_{dx, dy, dz} {
  Discriminant x(dx), y(dy), z(dz);
  if (x.fundamental() != y.fundamental() || x.fundamental() != z.fundamental())
    throw discriminant_mismatch("OrbitEngine: mixed fundamental discriminants");
  i64 L = std::lcm(std::lcm(x.conductor(), y.conductor()), z.conductor());
  big_ = L * L * x.fundamental();
  ClassGroup big(big_);
  big_h_ = big.size();
  std::array<std::vector<std::size_t>, 3> proj;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < i; ++j)
      if (disc_[j] == disc_[i]) groups_[i] = groups_[j];
    if (!groups_[i]) groups_[i] = std::make_shared<ClassGroup>(disc_[i]);
    proj[i] = big.projection_to(*groups_[i]);
  }
  std::set<IndexTriple> img;
  for (std::size_t g = 0; g < big.size(); ++g)
    img.insert({proj[0][g], proj[1][g], proj[2][g]});
  image_.assign(img.begin(), img.end());
}

std::vector<IndexTriple> OrbitEngine::orbit(const IndexTriple& base) const {
  std::set<IndexTriple> out;
  for (const auto& s : image_) {
    IndexTriple t;
    for (int i = 0; i < 3; ++i) t[i] = groups_[i]->mul(base[i], s[i]);
    out.insert(t);
    for (int i = 0; i < 3; ++i) t[i] = groups_[i]->inv(t[i]);
    out.insert(t);
  }
  return {out.begin(), out.end()};
}

std::vector<std::array<FormClass, 3>> galois_orbit_triples(
    i64 dx, i64 dy, i64 dz, const std::array<FormClass, 3>& base) {
  OrbitEngine eng(dx, dy, dz);
  const i64 ds[3] = {dx, dy, dz};
  IndexTriple b;
  for (int i = 0; i < 3; ++i) {
    if (base[i].disc != ds[i])
      throw discriminant_mismatch("galois_orbit_triples: base class discriminant");
    b[i] = eng.group(i).index_of(reduce(base[i].rep));
  }
  std::vector<std::array<FormClass, 3>> out;
  for (const auto& t : eng.orbit(b)) {
    std::array<FormClass, 3> row;
    for (int i = 0; i < 3; ++i) row[i] = FormClass{eng.group(i).form(t[i]), ds[i]};
    out.push_back(row);
  }
  return out;
}

}  // namespace cmrel
