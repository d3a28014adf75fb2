#include "cmrel/lattice.hpp"

#include "cmrel/errors.hpp"

namespace cmrel {

mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b) {
  mpz_class s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

namespace {

/* nearest integer to a / b, b > 0 */
mpz_class round_div(const mpz_class& a, const mpz_class& b) {
  mpz_class q;
  mpz_class num = 2 * a + b;
  mpz_class den = 2 * b;
  mpz_fdiv_q(q.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return q;
}

struct State {
  IntMatrix& b;
  /* 1-indexed: d[0] = 1, d[i] for row i; lam[k][j] for j < k */
  std::vector<mpz_class> d;
  std::vector<std::vector<mpz_class>> lam;
  std::size_t n;

  void red(std::size_t k, std::size_t l) {
    mpz_class& lk = lam[k][l];
    if (2 * abs(lk) <= d[l]) return;
    mpz_class q = round_div(lk, d[l]);
    auto& bk = b[k - 1];
    const auto& bl = b[l - 1];
    for (std::size_t c = 0; c < bk.size(); ++c) bk[c] -= q * bl[c];
    lk -= q * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  }

  void swap(std::size_t k, std::size_t kmax) {
    std::swap(b[k - 1], b[k - 2]);
    for (std::size_t j = 1; j + 1 < k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    mpz_class l = lam[k][k - 1];
    mpz_class B = (d[k - 2] * d[k] + l * l) / d[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      mpz_class t = lam[i][k];
      lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
      lam[i][k - 1] = (B * t + l * lam[i][k]) / d[k];
    }
    d[k - 1] = B;
  }
};

}  // namespace

LLLResult lll_reduce(IntMatrix basis, long delta_num, long delta_den) {
  LLLResult res;
  const std::size_t n = basis.size();
  State s{basis, std::vector<mpz_class>(n + 1, 0),
          std::vector<std::vector<mpz_class>>(n + 1, std::vector<mpz_class>(n + 1, 0)), n};
  s.d[0] = 1;
  if (n == 0) {
    res.gram_dets = s.d;
    return res;
  }
  s.d[1] = dot(basis[0], basis[0]);
  if (s.d[1] == 0) throw error("lll_reduce: zero row");
  std::size_t k = 2, kmax = 1;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        mpz_class u = dot(basis[k - 1], basis[j - 1]);
        for (std::size_t i = 1; i < j; ++i)
          u = (s.d[i] * u - s.lam[k][i] * s.lam[j][i]) / s.d[i - 1];
        if (j < k)
          s.lam[k][j] = u;
        else
          s.d[k] = u;
      }
      if (s.d[k] == 0) throw error("lll_reduce: rows are dependent");
    }
    for (;;) {
      s.red(k, k - 1);
      const mpz_class& l = s.lam[k][k - 1];
      mpz_class lhs = delta_den * s.d[k] * s.d[k - 2];
      mpz_class rhs = delta_num * s.d[k - 1] * s.d[k - 1] - delta_den * l * l;
      if (lhs < rhs) {
        s.swap(k, kmax);
        ++res.swaps;
        if (k > 2) --k;
        continue;
      }
      break;
    }
    for (std::size_t l = k - 1; l-- > 1;) s.red(k, l);
    ++k;
  }
  res.gram_dets = s.d;
  res.basis = std::move(basis);
  return res;
}

bool is_lll_reduced(const IntMatrix& basis, long delta_num, long delta_den) {
  const std::size_t n = basis.size();
  std::vector<std::vector<mpq_class>> bs;
  std::vector<mpq_class> norm2;
  std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<mpq_class> v(basis[i].begin(), basis[i].end());
    for (std::size_t j = 0; j < i; ++j) {
      mpq_class num = 0;
      for (std::size_t c = 0; c < v.size(); ++c) num += mpq_class(basis[i][c]) * bs[j][c];
      mu[i][j] = num / norm2[j];
      for (std::size_t c = 0; c < v.size(); ++c) v[c] -= mu[i][j] * bs[j][c];
    }
    mpq_class nn = 0;
    for (auto& x : v) nn += x * x;
    if (nn == 0) return false;
    bs.push_back(std::move(v));
    norm2.push_back(nn);
  }
  mpq_class delta(delta_num, delta_den);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (2 * abs(mu[i][j]) > 1) return false;
  for (std::size_t k = 1; k < n; ++k)
    if (norm2[k] < (delta - mu[k][k - 1] * mu[k][k - 1]) * norm2[k - 1]) return false;
  return true;
}

}  // namespace cmrel
