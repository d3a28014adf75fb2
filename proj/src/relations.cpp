#include "cmrel/relations.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

#include "cmrel/classgroup.hpp"
#include "cmrel/errors.hpp"
#include "cmrel/genus.hpp"
#include "cmrel/modular.hpp"

namespace cmrel {

std::string to_string(RelStatus s) {
  switch (s) {
    case RelStatus::certified_zero: return "certified-zero";
    case RelStatus::certified_nonzero: return "certified-nonzero";
    default: return "unverified";
  }
}

std::string to_string(Rank4Status s) {
  switch (s) {
    case Rank4Status::no_relation: return "no-relation";
    case Rank4Status::all_minors_vanish: return "all-minors-vanish";
    default: return "indeterminate";
  }
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr long kGuard = 16;

double log2_of(const Real& r) {
  if (r.is_zero()) return kNegInf;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, r.get(), MPFR_RNDU);
  return static_cast<double>(e) + std::log2(std::fabs(m));
}

double log2_of(const mpz_class& z) {
  if (z == 0) return kNegInf;
  long e = 0;
  double m = mpz_get_d_2exp(&e, z.get_mpz_t());
  return static_cast<double>(e) + std::log2(std::fabs(m));
}

mpz_class scaled_integer(const Ball& b, long s) {
  Real t(b.prec() + 64);
  mpfr_mul_2si(t.get(), b.mid().get(), s, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), t.get(), MPFR_RNDN);
  return z;
}

CBall combine(const std::vector<mpz_class>& n, const std::vector<CBall>& v) {
  prec_t p = 64;
  for (const auto& x : v) p = std::max(p, x.prec());
  CBall acc(p);
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (n[i] == 0) continue;
    acc = acc + v[i] * Ball::from_mpz(n[i], p);
  }
  return acc;
}

mpz_class norm2(const std::vector<mpz_class>& v) {
  mpz_class s = 0;
  for (const auto& x : v) s += x * x;
  return s;
}

bool better(const RelationCandidate& a, const RelationCandidate& b) {
  mpz_class na = norm2(a.coeffs), nb = norm2(b.coeffs);
  if (na != nb) return na < nb;
  return a.coeffs < b.coeffs;
}

CBall real_ball(const Ball& b) {
  Ball im(b.prec());
  return CBall(b, im);
}

}  // namespace

RelationCandidate make_candidate(std::vector<mpz_class> coeffs) {
  mpz_class g = 0;
  for (const auto& c : coeffs) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0) throw error("relation candidate: zero vector");
  for (auto& c : coeffs) c /= g;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i] == 0) continue;
    if (coeffs[i] < 0)
      for (auto& c : coeffs) c = -c;
    break;
  }
  RelationCandidate r;
  r.coeffs = std::move(coeffs);
  return r;
}

FindResult find_relation(const std::vector<CBall>& values, const mpz_class& coeff_bound,
                         prec_t precision) {
  const std::size_t n = values.size();
  if (n == 0) throw error("find_relation: no values");
  double err = kNegInf, mag = 0;
  for (const auto& v : values) {
    err = std::max({err, v.re.log2_rad(), v.im.log2_rad()});
    mag = std::max(mag, log2_of(v.abs_upper()));
  }
  double acc = std::max(err, mag - static_cast<double>(precision));
  long S = static_cast<long>(std::floor(-acc)) - kGuard;
  double need = static_cast<double>(n) * log2_of(coeff_bound) + kGuard;
  if (static_cast<double>(S) < need)
    throw precision_error("find_relation: scale 2^" + std::to_string(S) +
                          " too small for coefficient bound 2^" +
                          std::to_string(static_cast<long>(log2_of(coeff_bound))));

  std::vector<mpz_class> re(n), im(n);
  bool use_im = false;
  for (std::size_t i = 0; i < n; ++i) {
    re[i] = scaled_integer(values[i].re, S);
    im[i] = scaled_integer(values[i].im, S);
    if (im[i] != 0) use_im = true;
  }
  const std::size_t cols = use_im ? 2 : 1;
  IntMatrix basis(n, std::vector<mpz_class>(n + cols, 0));
  for (std::size_t i = 0; i < n; ++i) {
    basis[i][i] = 1;
    basis[i][n] = re[i];
    if (use_im) basis[i][n + 1] = im[i];
  }
  LLLResult red = lll_reduce(std::move(basis));

  FindResult out;
  out.scale_bits = S;
  double min_gs = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double l = log2_of(red.gram_dets[i + 1]) - log2_of(red.gram_dets[i]);
    min_gs = std::min(min_gs, l);
  }
  out.norm_lower_log2 =
      0.5 * min_gs - 0.5 * std::log2(1.0 + static_cast<double>(cols * n));
  out.conclusive = out.norm_lower_log2 >
                   log2_of(coeff_bound) + 0.5 * std::log2(static_cast<double>(n));

  for (const auto& row : red.basis) {
    std::vector<mpz_class> c(row.begin(), row.begin() + static_cast<long>(n));
    mpz_class l1 = 0, linf = 0;
    for (const auto& x : c) {
      l1 += abs(x);
      if (abs(x) > linf) linf = abs(x);
    }
    if (linf == 0 || linf > coeff_bound) continue;
    bool small = abs(row[n]) <= l1 && (!use_im || abs(row[n + 1]) <= l1);
    if (!small) continue;
    RelationCandidate cand = make_candidate(c);
    CBall res = combine(cand.coeffs, values);
    cand.residual_log2 = log2_of(res.abs_upper());
    mpz_class cl1 = 0;
    for (const auto& x : cand.coeffs) cl1 += abs(x);
    cand.threshold_log2 = log2_of(mpz_class(cl1 + 1)) - static_cast<double>(S);
    if (cand.residual_log2 > cand.threshold_log2) continue;
    out.relations.push_back(std::move(cand));
  }
  std::sort(out.relations.begin(), out.relations.end(), better);
  if (!out.relations.empty()) out.candidate = out.relations.front();
  return out;
}

FindResult find_relation(const std::vector<Ball>& values, const mpz_class& coeff_bound,
                         prec_t precision) {
  std::vector<CBall> cv;
  cv.reserve(values.size());
  for (const auto& v : values) cv.push_back(real_ball(v));
  return find_relation(cv, coeff_bound, precision);
}

Ball house_bound(i64 d, prec_t p) {
  return exp(Ball::pi(p) * sqrt(Ball::from_si(-d, p))) + 2079;
}

long degree_bound(const std::vector<i64>& discs) {
  std::map<i64, std::vector<i64>> groups;
  for (i64 d : discs) groups[fundamental_decomposition(d).first].push_back(d);
  long total = 1;
  for (auto& [D, ds] : groups) {
    i64 L = 1;
    long prod = 1;
    for (i64 d : ds) {
      i64 f = fundamental_decomposition(d).second;
      L = L / gcd(L, f) * f;
      prod *= class_number(d);
    }
    long ring = 2 * static_cast<long>(class_number_formula(D, L));
    total *= std::min(prod, ring);
  }
  return total;
}

RelStatus liouville_certify(const std::vector<mpz_class>& coeffs, const std::vector<CBall>& values,
                            const std::vector<Ball>& houses, long degree) {
  bool any = false;
  for (const auto& c : coeffs) any = any || c != 0;
  if (!any) throw error("liouville_certify: zero candidate");
  if (coeffs.size() != values.size() || houses.size() != values.size())
    throw error("liouville_certify: size mismatch");
  CBall th = combine(coeffs, values);
  if (!th.contains_zero()) return RelStatus::certified_nonzero;
  Real up = th.abs_upper();
  if (up.is_zero()) return RelStatus::certified_zero;

  Real lhs(128);
  mpfr_log2(lhs.get(), up.get(), MPFR_RNDU);
  if (degree <= 1) return mpfr_sgn(lhs.get()) < 0 ? RelStatus::certified_zero : RelStatus::unverified;
  Ball H(128);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i] != 0) H = H + Ball::from_mpz(abs(coeffs[i]), 128) * houses[i].with_prec(128);
  Real hup = H.upper();
  Real rhs(128);
  mpfr_log2(rhs.get(), hup.get(), MPFR_RNDU);
  mpfr_mul_si(rhs.get(), rhs.get(), degree - 1, MPFR_RNDU);
  mpfr_neg(rhs.get(), rhs.get(), MPFR_RNDN);
  return mpfr_cmp(lhs.get(), rhs.get()) < 0 ? RelStatus::certified_zero : RelStatus::unverified;
}

CBall det4(const std::array<std::array<CBall, 4>, 4>& m) {
  std::array<int, 4> perm{0, 1, 2, 3};
  CBall acc(m[0][0].prec());
  do {
    int inv = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (perm[i] > perm[j]) ++inv;
    CBall t = m[0][perm[0]] * m[1][perm[1]] * m[2][perm[2]] * m[3][perm[3]];
    acc = inv % 2 ? acc - t : acc + t;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

Rank4Result rank4_certify(const std::vector<std::array<CBall, 4>>& rows, std::size_t max_minors) {
  const std::size_t n = rows.size();
  if (n < 4) throw error("rank4_certify: fewer than 4 rows");
  Rank4Result res;
  bool exhaustive = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          if (res.minors_tried == max_minors) {
            exhaustive = false;
            goto done;
          }
          ++res.minors_tried;
          CBall det = det4({rows[a], rows[b], rows[c], rows[d]});
          if (!det.contains_zero()) {
            res.status = Rank4Status::no_relation;
            res.minor = {a, b, c, d};
            return res;
          }
        }
done:
  res.status = exhaustive ? Rank4Status::all_minors_vanish : Rank4Status::indeterminate;
  return res;
}

std::shared_ptr<const std::vector<CBall>> ModuliCache::get(i64 d, prec_t bits) {
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = data_.find({d, bits});
    if (it != data_.end()) return it->second;
  }
  auto v = std::make_shared<const std::vector<CBall>>(singular_moduli(d, bits));
  std::lock_guard<std::mutex> lk(mu_);
  return data_.emplace(std::make_pair(d, bits), v).first->second;
}

mpz_class RelationConfig::coeff_bound() const {
  mpz_class b = 1;
  mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), coeff_bound_bits);
  return b;
}

ModuliCache& RelationConfig::cache() const {
  if (!moduli) throw error("RelationConfig: no moduli cache");
  return *moduli;
}

Membership membership(const CBall& x, i64 dx, const CBall& y, i64 dy, const RelationConfig& cfg) {
  Membership m;
  i64 hx = class_number(dx), hy = class_number(dy);
  if (hy % hx != 0) {
    m.reason = "degree " + std::to_string(hx) + " does not divide " + std::to_string(hy);
    return m;
  }
  prec_t p = std::max(x.prec(), y.prec());
  std::vector<CBall> vals{x};
  std::vector<Ball> houses{house_bound(dx)};
  Ball hy_house = house_bound(dy);
  CBall pw(Ball::from_si(1, p), Ball(p));
  Ball hp = Ball::from_si(1, 128);
  for (i64 k = 0; k < hy; ++k) {
    vals.push_back(pw);
    houses.push_back(hp);
    pw = pw * y;
    hp = hp * hy_house;
  }
  FindResult fr;
  try {
    fr = find_relation(vals, cfg.coeff_bound(), cfg.bits);
  } catch (const precision_error& e) {
    m.reason = e.what();
    return m;
  }
  m.norm_lower_log2 = fr.norm_lower_log2;
  for (const auto& cand : fr.relations) {
    if (cand.coeffs[0] == 0) continue;
    m.status = liouville_certify(cand.coeffs, vals, houses, degree_bound({dx, dy}));
    if (m.status != RelStatus::certified_zero) continue;
    m.found = true;
    m.denom = cand.coeffs[0];
    for (std::size_t k = 1; k < cand.coeffs.size(); ++k) m.coeffs.push_back(-cand.coeffs[k]);
    if (m.denom < 0) {
      m.denom = -m.denom;
      for (auto& c : m.coeffs) c = -c;
    }
    return m;
  }
  m.reason = fr.relations.empty() ? "no relation within the coefficient bound"
                                  : "candidate not certified";
  return m;
}

std::vector<std::size_t> align_by_genus(i64 dx, i64 dy) {
  auto basis = positive_genus_basis(dx);
  auto key = [&](const QuadForm& f) {
    std::vector<int> k;
    for (i64 s : basis) k.push_back(genus_character(s, f));
    return k;
  };
  std::map<std::vector<int>, std::size_t> index;
  auto fx = reduced_forms(dx);
  for (std::size_t i = 0; i < fx.size(); ++i)
    if (!index.emplace(key(fx[i]), i).second)
      throw error("align_by_genus: " + std::to_string(dx) + " is not 2-elementary");
  std::vector<std::size_t> out;
  for (const auto& g : reduced_forms(dy)) {
    auto it = index.find(key(g));
    if (it == index.end()) throw error("align_by_genus: character vector not realised");
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::size_t> align_by_projection(i64 dx, i64 dy) {
  ClassGroup gx(dx), gy(dy);
  if (dy % dx == 0 && is_discriminant(dy)) {
    auto q = dy / dx;
    if (isqrt(q) * isqrt(q) == q) return gy.projection_to(gx);
  }
  if (dx % dy == 0) {
    auto q = dx / dy;
    if (isqrt(q) * isqrt(q) == q) {
      auto down = gx.projection_to(gy);
      if (gx.size() != gy.size()) throw error("align_by_projection: class numbers differ");
      std::vector<std::size_t> out(gy.size());
      for (std::size_t i = 0; i < down.size(); ++i) out[down[i]] = i;
      return out;
    }
  }
  throw error("align_by_projection: discriminant ratio is not a square");
}

ZPoly zpoly_mul(const ZPoly& a, const ZPoly& b) {
  if (a.empty() || b.empty()) return {};
  ZPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

ZPoly zpoly_rem_monic(ZPoly a, const ZPoly& m) {
  const std::size_t h = m.size() - 1;
  for (std::size_t k = a.size(); k-- > h;) {
    if (a[k] == 0) continue;
    mpz_class c = a[k];
    for (std::size_t i = 0; i <= h; ++i) a[k - h + i] -= c * m[i];
  }
  if (a.size() > h) a.resize(h);
  return a;
}

ZPoly zpoly_derivative(const ZPoly& a) {
  ZPoly r;
  for (std::size_t i = 1; i < a.size(); ++i) r.push_back(a[i] * static_cast<long>(i));
  return r;
}

bool zpoly_is_zero(const ZPoly& a) {
  return std::all_of(a.begin(), a.end(), [](const mpz_class& c) { return c == 0; });
}

SubfieldWitness subfield_witness(const HilbertPoly& hx, const HilbertPoly& hy,
                                 const std::vector<std::size_t>& align, int max_retries) {
  SubfieldWitness w;
  w.dx = hx.disc;
  w.dy = hy.disc;
  auto fx = reduced_forms(hx.disc);
  auto fy = reduced_forms(hy.disc);
  const std::size_t h = fy.size();
  if (align.size() != h) throw error("subfield_witness: alignment size");

  double est = 0;
  for (const auto& f : fx) est = std::max(est, magnitude_bits(f) + 1);
  for (const auto& f : fy) est += magnitude_bits(f) + 1;
  prec_t bits = static_cast<prec_t>(est + 2 * std::log2(static_cast<double>(h) + 1) + 96);

  ZPoly P;
  bool rounded = false;
  for (int attempt = 0; attempt <= max_retries && !rounded; ++attempt, bits *= 2) {
    auto xs = singular_moduli(hx.disc, bits);
    auto ys = singular_moduli(hy.disc, bits);
    std::vector<CBall> acc(h, CBall(bits));
    std::vector<Ball> hc;
    for (const auto& c : hy.coeffs) hc.push_back(Ball::from_mpz(c, bits));
    for (std::size_t j = 0; j < h; ++j) {
      /* synthetic division of H_y by (z - y_j) */
      std::vector<CBall> q(h, CBall(bits));
      q[h - 1] = CBall(Ball::from_si(1, bits), Ball(bits));
      for (std::size_t k = h - 1; k > 0; --k) q[k - 1] = CBall(hc[k], Ball(bits)) + ys[j] * q[k];
      const CBall& xv = xs[align[j]];
      for (std::size_t k = 0; k < h; ++k) acc[k] = acc[k] + xv * q[k];
    }
    P.assign(h, 0);
    rounded = true;
    for (std::size_t k = 0; k < h && rounded; ++k)
      rounded = acc[k].im.contains_zero() && acc[k].re.round_to_integer(P[k]);
    w.bits = bits;
  }
  if (!rounded) {
    w.reason = "rounding of the interpolating polynomial failed";
    return w;
  }
  w.P = P;

  const ZPoly& m = hy.coeffs;
  ZPoly W = zpoly_rem_monic(zpoly_derivative(m), m);
  const std::size_t hxd = hx.coeffs.size() - 1;
  ZPoly accp{hx.coeffs[hxd]};
  ZPoly wpow{1};
  for (std::size_t i = hxd; i-- > 0;) {
    wpow = zpoly_rem_monic(zpoly_mul(wpow, W), m);
    accp = zpoly_rem_monic(zpoly_mul(accp, P), m);
    accp.resize(std::max(accp.size(), wpow.size()), 0);
    for (std::size_t k = 0; k < wpow.size(); ++k) accp[k] += hx.coeffs[i] * wpow[k];
  }
  w.certified = zpoly_is_zero(accp);
  if (!w.certified) w.reason = "H_x(P / H_y') is not divisible by H_y";
  return w;
}

mpz_class newton_power_sums(const HilbertPoly& hp, unsigned m) {
  if (m == 0) return hp.degree();
  const long h = hp.degree();
  /* c(k) = coefficient of z^(h-k), so H = sum_k c(k) z^(h-k) with c(0) = 1 */
  auto c = [&](long k) -> mpz_class {
    if (k > h) return 0;
    return hp.coeffs[static_cast<std::size_t>(h - k)];
  };
  std::vector<mpz_class> p(m + 1, 0);
  for (long k = 1; k <= static_cast<long>(m); ++k) {
    mpz_class s = k <= h ? mpz_class(k * c(k)) : mpz_class(0);
    for (long i = 1; i < k && i <= h; ++i) s += c(i) * p[static_cast<std::size_t>(k - i)];
    p[static_cast<std::size_t>(k)] = -s;
  }
  return p[m];
}

PowerExperiment power_relation_experiment(i64 d, unsigned n, unsigned m, const RelationConfig& cfg,
                                          std::size_t max_subsets) {
  PowerExperiment ex;
  ex.disc = d;
  ex.n = n;
  ex.m = m;
  auto forms = reduced_forms(d);
  const std::size_t h = forms.size();
  if (n < 1 || n > h) throw error("power_relation_experiment: need 1 <= n <= h");
  HilbertPoly hp = cfg.hilbert ? cfg.hilbert->get_or_compute(d) : hilbert_class_poly(d);
  ex.power_sum = newton_power_sums(hp, m);

  prec_t bits = cfg.bits + static_cast<prec_t>(m * (magnitude_bits(forms[0]) + 1));
  auto xs = singular_moduli(d, bits);
  std::vector<CBall> pw;
  CBall total(bits);
  for (const auto& x : xs) {
    pw.push_back(pow_ui(x, m));
    total = total + pw.back();
  }
  ex.power_sum_matches = total.im.contains_zero() && total.re.contains(ex.power_sum) &&
                         total.re.rad_double() < 0.25;

  Ball house = pow_ui(house_bound(d), m);
  long deg = std::min<long>(2 * static_cast<long>(h), degree_bound(std::vector<i64>(n, d)));
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (;;) {
    if (ex.subsets_tested == max_subsets) break;
    ++ex.subsets_tested;
    std::vector<CBall> vals{CBall(Ball::from_si(1, bits), Ball(bits))};
    std::vector<Ball> houses{Ball::from_si(1, 128)};
    for (auto i : idx) {
      vals.push_back(pw[i]);
      houses.push_back(house);
    }
    FindResult fr = find_relation(vals, cfg.coeff_bound(), bits);
    for (const auto& cand : fr.relations) {
      bool uses = false;
      for (std::size_t k = 1; k < cand.coeffs.size(); ++k) uses = uses || cand.coeffs[k] != 0;
      if (!uses) continue;
      if (liouville_certify(cand.coeffs, vals, houses, deg) != RelStatus::certified_zero) continue;
      std::vector<mpz_class> a(cand.coeffs.begin() + 1, cand.coeffs.end());
      bool eq = std::all_of(a.begin(), a.end(), [&](const mpz_class& c) { return c == a[0]; });
      ex.all_relations_equal_coeffs = ex.all_relations_equal_coeffs && eq;
      ex.relations.push_back(std::move(a));
    }
    /* next combination */
    std::size_t i = n;
    while (i > 0 && idx[i - 1] == h - n + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < n; ++j) idx[j] = idx[j - 1] + 1;
  }
  return ex;
}

mpq_class certified_ratio(const CBall& num, const CBall& den, const Ball& house, long degree) {
  mpz_class bound = 1;
  mpz_mul_2exp(bound.get_mpz_t(), bound.get_mpz_t(), 64);
  FindResult fr = find_relation(std::vector<CBall>{num, den}, bound, std::max(num.prec(), den.prec()));
  for (const auto& cand : fr.relations) {
    if (cand.coeffs[0] == 0) continue;
    if (liouville_certify(cand.coeffs, {num, den}, {house, house}, degree) !=
        RelStatus::certified_zero)
      continue;
    /* a num + b den = 0 */
    mpq_class r(-cand.coeffs[1], cand.coeffs[0]);
    r.canonicalize();
    return r;
  }
  throw error("certified_ratio: no certified rational ratio");
}

namespace {

/* b = A x + B y + C z, certified rational via its cleared-denominator integer */
mpq_class certified_constant(const mpq_class& A, const mpq_class& B, const mpq_class& C,
                             const CBall& x, const CBall& y, const CBall& z,
                             const std::array<i64, 3>& discs) {
  mpz_class L = 1;
  for (const auto* q : {&A, &B, &C}) mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), q->get_den_mpz_t());
  std::vector<mpz_class> n{mpz_class(A * L), mpz_class(B * L), mpz_class(C * L)};
  std::vector<CBall> v{x, y, z};
  CBall s = combine(n, v);
  mpz_class t;
  if (!s.im.contains_zero() || !s.re.round_to_integer(t))
    throw error("build_case_relation: constant is not rational at this precision");
  n.push_back(-t);
  prec_t p = x.prec();
  v.push_back(CBall(Ball::from_si(1, p), Ball(p)));
  std::vector<Ball> houses{house_bound(discs[0]), house_bound(discs[1]), house_bound(discs[2]),
                           Ball::from_si(1, 128)};
  long deg = degree_bound({discs[0], discs[1], discs[2]});
  if (liouville_certify(n, v, houses, deg) != RelStatus::certified_zero)
    throw error("build_case_relation: constant not certified");
  mpq_class b(t, L);
  b.canonicalize();
  return b;
}

}  // namespace

LinearRelation build_case_relation(const CaseData& d, prec_t bits) {
  (void)bits;
  auto [dx, dy, dz] = d.discs;
  long deg = degree_bound({dx, dx, dy, dy, dz, dz});
  Ball M = house_bound(std::min({dx, dy, dz}));
  LinearRelation r;
  switch (d.case_id) {
    case 2: {
      /* B/C = -(z - z') / (y - y') */
      mpq_class ratio = certified_ratio(d.z1 - d.z, d.y - d.y1, M * 2, deg);
      r.A = 1;
      r.C = 1;
      r.B = ratio;
      break;
    }
    case 3: {
      mpz_class L = 1;
      mpz_lcm(L.get_mpz_t(), d.B.get_den_mpz_t(), d.C.get_den_mpz_t());
      mpz_class bn(mpq_class(d.B * L)), cn(mpq_class(d.C * L));
      prec_t p = d.x.prec();
      CBall num = -((d.y - d.y1) * Ball::from_mpz(bn, p) + (d.z - d.z1) * Ball::from_mpz(cn, p));
      Ball house = M * 2 * Ball::from_mpz(mpz_class(abs(bn) + abs(cn)), 128);
      mpq_class a = certified_ratio(num, d.x - d.x1, house, deg);
      r.A = a / L;
      r.B = d.B;
      r.C = d.C;
      break;
    }
    case 5: {
      /* A/B = A/C = -((y + z) - (v + w)) / (x - x') */
      CBall num = (d.v + d.w) - (d.y + d.z);
      mpq_class a = certified_ratio(num, d.x - d.x1, M * 4, deg);
      r.A = a;
      r.B = 1;
      r.C = 1;
      break;
    }
    default:
      throw error("build_case_relation: case must be 2, 3 or 5");
  }
  r.b = certified_constant(r.A, r.B, r.C, d.x, d.y, d.z, d.discs);
  return r;
}

std::string classify_relation(const std::array<i64, 3>& discs, const std::array<std::size_t, 3>& roots,
                              const LinearRelation& rel) {
  (void)roots;
  if (rel.A == 0 || rel.B == 0 || rel.C == 0) return "outside";
  std::array<i64, 3> h{};
  for (int i = 0; i < 3; ++i) h[i] = class_number(discs[i]);
  std::array<mpq_class, 3> co{rel.A, rel.B, rel.C};
  std::array<int, 3> ord{0, 1, 2};
  std::sort(ord.begin(), ord.end(), [&](int a, int b) { return h[a] < h[b]; });
  i64 h0 = h[ord[0]], h1 = h[ord[1]], h2 = h[ord[2]];
  if (h0 == 1 && h1 == 1 && h2 == 1) return "1";
  if (h0 == 1 && h1 == 2 && h2 == 2) return "2";
  if (h0 == 2 && h1 == 2 && h2 == 2) return "3";
  if (h0 == 3 && h2 == 3 && discs[0] == discs[1] && discs[1] == discs[2] && co[0] == co[1] &&
      co[1] == co[2])
    return "4";
  if (h0 == 2 && h1 == 4 && h2 == 4 && discs[ord[1]] == discs[ord[2]] && co[ord[1]] == co[ord[2]])
    return "5";
  return "outside";
}

namespace {

struct TripleContext {
  std::array<i64, 3> discs;
  std::array<std::shared_ptr<const std::vector<CBall>>, 3> mod;
  std::vector<Ball> houses;
  long degree;
  const RelationConfig* cfg;
};

std::vector<CBall> row_values(const TripleContext& t, const IndexTriple& r) {
  prec_t p = (*t.mod[0])[0].prec();
  return {CBall(Ball::from_si(1, p), Ball(p)), (*t.mod[0])[r[0]], (*t.mod[1])[r[1]],
          (*t.mod[2])[r[2]]};
}

/* smaller (A, B, C) first, then the full vector */
bool smaller_abc(const RelationCandidate& a, const RelationCandidate& b) {
  std::vector<mpz_class> ta(a.coeffs.begin() + 1, a.coeffs.end());
  std::vector<mpz_class> tb(b.coeffs.begin() + 1, b.coeffs.end());
  mpz_class na = norm2(ta), nb = norm2(tb);
  if (na != nb) return na < nb;
  return better(a, b);
}

/* a relation with all three moduli coefficients nonzero, if small combinations give one */
std::optional<RelationCandidate> full_support(const std::vector<RelationCandidate>& found) {
  /* reduce with weight on (A, B, C) so small combinations reach short coefficient vectors */
  const mpz_class W = mpz_class(1) << 64;
  IntMatrix m;
  for (std::size_t i = 0; i < found.size() && i < 3; ++i) {
    const auto& c = found[i].coeffs;
    m.push_back({W * c[1], W * c[2], W * c[3], c[0]});
  }
  std::vector<RelationCandidate> rels;
  for (const auto& row : lll_reduce(m).basis)
    rels.push_back(make_candidate({row[3], row[0] / W, row[1] / W, row[2] / W}));
  const std::size_t k = rels.size();
  std::optional<RelationCandidate> best;
  std::vector<int> c(k, -2);
  for (;;) {
    bool nz = std::any_of(c.begin(), c.end(), [](int v) { return v != 0; });
    if (nz) {
      std::vector<mpz_class> v(4, 0);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < 4; ++j) v[j] += c[i] * rels[i].coeffs[j];
      if (v[1] != 0 && v[2] != 0 && v[3] != 0) {
        auto cand = make_candidate(v);
        if (!best || smaller_abc(cand, *best)) best = cand;
      }
    }
    std::size_t i = 0;
    while (i < k && c[i] == 2) c[i++] = -2;
    if (i == k) break;
    ++c[i];
  }
  return best;
}

RootOutcome relation_search(const TripleContext& t, const IndexTriple& r, std::vector<Witness>& wit) {
  RootOutcome o;
  o.roots = r;
  auto vals = row_values(t, r);
  FindResult fr;
  try {
    fr = find_relation(vals, t.cfg->coeff_bound(), t.cfg->bits);
  } catch (const precision_error& e) {
    o.status = "indeterminate";
    o.detail = e.what();
    return o;
  }
  if (fr.relations.empty()) {
    o.status = t.cfg->certified_only ? "indeterminate" : "eliminated-heuristic";
    o.detail = "relation norm >= 2^" + std::to_string(static_cast<long>(fr.norm_lower_log2));
    return o;
  }
  auto chosen = full_support(fr.relations);
  if (!chosen) {
    /* every detected relation has a zero coefficient among A, B, C */
    const auto& c = fr.candidate->coeffs;
    RelStatus st = liouville_certify(c, vals, t.houses, t.degree);
    o.status = t.cfg->certified_only ? "indeterminate" : "eliminated-heuristic";
    o.detail = "degenerate relation only (" + to_string(st) + "): " + c[0].get_str() + " + " +
               c[1].get_str() + " x + " + c[2].get_str() + " y + " + c[3].get_str() + " z";
    return o;
  }
  RelationCandidate cand = *chosen;
  RelStatus st = liouville_certify(cand.coeffs, vals, t.houses, t.degree);
  if (st == RelStatus::certified_nonzero) {
    o.status = t.cfg->certified_only ? "indeterminate" : "eliminated-heuristic";
    o.detail = "spurious candidate rejected";
    return o;
  }
  if (st == RelStatus::unverified) {
    o.status = "indeterminate";
    o.detail = "candidate could not be certified";
    return o;
  }
  Witness w;
  w.roots = r;
  w.relation.A = cand.coeffs[1];
  w.relation.B = cand.coeffs[2];
  w.relation.C = cand.coeffs[3];
  w.relation.b = -cand.coeffs[0];
  w.case_tag = classify_relation(t.discs, r, w.relation);
  o.status = "relation-found-certified";
  o.detail = "case " + w.case_tag;
  wit.push_back(std::move(w));
  return o;
}

}  // namespace

TripleReport check_triple(i64 dx, i64 dy, i64 dz, const RelationConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  TripleReport rep;
  rep.triple = {dx, dy, dz};
  rep.bits = cfg.bits;
  rep.coeff_bound_bits = cfg.coeff_bound_bits;
  for (i64 d : rep.triple)
    if (!is_discriminant(d)) throw invalid_discriminant(d);

  TripleContext t;
  t.discs = rep.triple;
  t.cfg = &cfg;
  t.houses.push_back(Ball::from_si(1, 128));
  for (int i = 0; i < 3; ++i) {
    t.mod[i] = cfg.cache().get(t.discs[i], cfg.bits);
    t.houses.push_back(house_bound(t.discs[i]));
  }
  t.degree = degree_bound({dx, dy, dz});
  std::array<std::size_t, 3> h{t.mod[0]->size(), t.mod[1]->size(), t.mod[2]->size()};

  auto distinct = [&](const IndexTriple& r) {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (t.discs[i] == t.discs[j] && r[i] == r[j]) return false;
    return true;
  };

  i64 D0 = fundamental_decomposition(dx).first;
  bool same = fundamental_decomposition(dy).first == D0 && fundamental_decomposition(dz).first == D0;
  if (same) {
    rep.mode = "same-D";
    OrbitEngine eng(dx, dy, dz);
    std::set<IndexTriple> seen;
    for (std::size_t i = 0; i < h[0]; ++i)
      for (std::size_t j = 0; j < h[1]; ++j)
        for (std::size_t k = 0; k < h[2]; ++k) {
          IndexTriple r{i, j, k};
          if (!distinct(r) || seen.count(r)) continue;
          auto orb = eng.orbit(r);
          seen.insert(orb.begin(), orb.end());
          RootOutcome o;
          bool settled = false;
          if (orb.size() >= 4) {
            std::vector<std::array<CBall, 4>> rows;
            for (const auto& q : orb) {
              auto v = row_values(t, q);
              rows.push_back({v[0], v[1], v[2], v[3]});
            }
            Rank4Result rk = rank4_certify(rows);
            if (rk.status == Rank4Status::no_relation) {
              o.roots = r;
              o.status = "eliminated-certified";
              o.detail = "nonzero minor after " + std::to_string(rk.minors_tried) + " tried";
              settled = true;
            } else if (rk.status == Rank4Status::all_minors_vanish) {
              o = relation_search(t, r, rep.witnesses);
              /* a relation is known to exist: widen the coefficient bound while precision allows */
              RelationConfig wide = *t.cfg;
              TripleContext tw = t;
              tw.cfg = &wide;
              while (o.status != "relation-found-certified" && o.detail.rfind("degenerate", 0) != 0 &&
                     wide.coeff_bound_bits * 8 <= static_cast<unsigned>(wide.bits)) {
                wide.coeff_bound_bits *= 2;
                o = relation_search(tw, r, rep.witnesses);
              }
              if (wide.coeff_bound_bits != t.cfg->coeff_bound_bits)
                o.detail += " (coefficient bound widened to 2^" + std::to_string(wide.coeff_bound_bits) + ")";
              if (o.status != "relation-found-certified" && o.detail.rfind("degenerate", 0) != 0) {
                o.status = "indeterminate";
                o.detail = "all minors vanish but no relation was found";
              }
              settled = true;
            }
          }
          if (!settled) o = relation_search(t, r, rep.witnesses);
          o.orbit_size = orb.size();
          rep.outcomes.push_back(std::move(o));
        }
  } else {
    rep.mode = "cross-field";
    std::size_t fixed = 0;
    for (std::size_t i = 1; i < 3; ++i)
      if (h[i] > h[fixed]) fixed = i;
    std::array<std::unique_ptr<ClassGroup>, 3> groups;
    for (int i = 0; i < 3; ++i) groups[i] = std::make_unique<ClassGroup>(t.discs[i]);
    std::array<std::size_t, 3> lim = h;
    lim[fixed] = 1;
    for (std::size_t i = 0; i < lim[0]; ++i)
      for (std::size_t j = 0; j < lim[1]; ++j)
        for (std::size_t k = 0; k < lim[2]; ++k) {
          IndexTriple r{i, j, k};
          if (!distinct(r)) continue;
          IndexTriple c{groups[0]->inv(i), groups[1]->inv(j), groups[2]->inv(k)};
          if (c < r) continue;
          RootOutcome o = relation_search(t, r, rep.witnesses);
          o.orbit_size = c == r ? 1 : 2;
          rep.outcomes.push_back(std::move(o));
        }
  }

  bool indet = false, found = false, heur = false;
  for (const auto& o : rep.outcomes) {
    indet = indet || o.status == "indeterminate";
    found = found || o.status == "relation-found-certified";
    heur = heur || o.status == "eliminated-heuristic";
  }
  if (indet)
    rep.status = "indeterminate";
  else if (found)
    rep.status = "relation-found-certified";
  else if (heur)
    rep.status = "eliminated-heuristic";
  else
    rep.status = "eliminated-certified";
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

nlohmann::json to_json(const TripleReport& r, bool with_outcomes) {
  nlohmann::json j;
  j["triple"] = r.triple;
  j["status"] = r.status;
  j["mode"] = r.mode;
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : r.witnesses) {
    j["witnesses"].push_back({{"roots", w.roots},
                              {"A", w.relation.A.get_str()},
                              {"B", w.relation.B.get_str()},
                              {"C", w.relation.C.get_str()},
                              {"b", w.relation.b.get_str()},
                              {"case", w.case_tag}});
  }
  j["parameters"] = {{"bits", r.bits}, {"coeff_bound", "2^" + std::to_string(r.coeff_bound_bits)}};
  std::map<std::string, std::size_t> counts;
  for (const auto& o : r.outcomes) counts[o.status] += 1;
  j["outcome_counts"] = counts;
  if (with_outcomes) {
    j["per_root_outcomes"] = nlohmann::json::array();
    for (const auto& o : r.outcomes)
      j["per_root_outcomes"].push_back(
          {{"roots", o.roots}, {"orbit", o.orbit_size}, {"status", o.status}, {"detail", o.detail}});
  }
  j["seconds"] = r.seconds;
  return j;
}

}  // namespace cmrel
