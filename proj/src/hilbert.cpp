#include "cmrel/hilbert.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

#include "cmrel/errors.hpp"
#include "cmrel/modular.hpp"

namespace cmrel {

std::string HilbertPoly::str() const {
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    std::string mag = i == degree() ? "" : mpz_class(abs(c)).get_str();
    if (!s.empty()) s += (c < 0 ? " - " : " + ");
    else if (c < 0) s += "-";
    if (i == 0) {
      s += mpz_class(abs(c)).get_str();
      continue;
    }
    if (abs(c) != 1) s += mag + "*";
    s += i == 1 ? "z" : "z^" + std::to_string(i);
  }
  return s.empty() ? "0" : s;
}

prec_t required_precision(i64 d) {
  double s = 0;
  auto forms = reduced_forms(d);
  for (const auto& f : forms) s += 1.0 / static_cast<double>(f.a);
  double bits = M_PI * std::sqrt(static_cast<double>(-d)) / M_LN2 * s +
                12.0 * static_cast<double>(forms.size()) + 64;
  return static_cast<prec_t>(std::ceil(bits));
}

static std::vector<Ball> poly_mul(const std::vector<Ball>& p, const std::vector<Ball>& q) {
  std::vector<Ball> r(p.size() + q.size() - 1, Ball(p[0].prec()));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = 0; j < q.size(); ++j) r[i + j] = r[i + j] + p[i] * q[j];
  return r;
}

std::vector<Ball> ball_poly_from_roots(const std::vector<CBall>& roots,
                                       const std::vector<QuadForm>& forms) {
  prec_t p = roots.empty() ? 64 : roots[0].prec();
  std::vector<Ball> acc{Ball::from_si(1, p)};
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const QuadForm& f = forms[i];
    if (f.b < 0) continue; /* handled with its conjugate */
    bool real = f.b == 0 || f.a == f.b || f.a == f.c;
    if (real) {
      acc = poly_mul(acc, {-roots[i].re, Ball::from_si(1, p)});
    } else {
      /* z^2 - 2 Re(x) z + |x|^2 */
      acc = poly_mul(acc, {norm(roots[i]), -mul_2si(roots[i].re, 1), Ball::from_si(1, p)});
    }
  }
  return acc;
}

HilbertPoly hilbert_class_poly(i64 d, const PrecisionPolicy& policy) {
  if (!is_discriminant(d)) throw invalid_discriminant(d);
  auto forms = reduced_forms(d);
  prec_t bits = policy.initial_bits ? policy.initial_bits : required_precision(d);
  for (int attempt = 0; attempt <= policy.max_retries; ++attempt, bits *= 2) {
    auto roots = singular_moduli(d, bits);
    auto poly = ball_poly_from_roots(roots, forms);
    HilbertPoly h{d, {}, bits};
    bool ok = true;
    for (const auto& c : poly) {
      mpz_class z;
      if (!c.round_to_integer(z)) {
        ok = false;
        break;
      }
      h.coeffs.push_back(z);
    }
    if (ok && h.coeffs.back() == 1) return h;
  }
  throw precision_error("hilbert_class_poly(" + std::to_string(d) +
                        "): rounding failed; required precision above " +
                        std::to_string(bits / 2) + " bits");
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr))
    throw error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::string serialize(const HilbertPoly& h) {
  std::ostringstream os;
  os << "Δ " << h.disc << "\n";
  os << "deg " << h.degree() << "\n";
  for (const auto& c : h.coeffs) os << c.get_str() << "\n";
  std::string body = os.str();
  return body + "sha256 " + sha256_hex(body) + "\n";
}

HilbertCache::HilbertCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

HilbertCache HilbertCache::from_env(const std::filesystem::path& fallback) {
  if (const char* env = std::getenv("CMREL_CACHE_DIR"); env && *env)
    return HilbertCache(env);
  return HilbertCache(fallback);
}

std::filesystem::path HilbertCache::path_for(i64 d) const {
  return dir_ / ("H_" + std::to_string(-d) + ".txt");
}

std::optional<HilbertPoly> HilbertCache::get(i64 d) const {
  auto path = path_for(d);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cache_io_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();

  auto warn = [&](const std::string& why) {
    std::cerr << "warning: cache entry " << path.string() << " " << why
              << "; recomputing\n";
    return std::nullopt;
  };
  auto pos = text.rfind("sha256 ");
  if (pos == std::string::npos) return warn("has no checksum");
  std::string body = text.substr(0, pos);
  std::string sum = text.substr(pos + 7);
  while (!sum.empty() && (sum.back() == '\n' || sum.back() == '\r')) sum.pop_back();
  if (sha256_hex(body) != sum) return warn("fails its checksum");

  std::istringstream is(body);
  std::string tag;
  HilbertPoly h;
  int deg = -1;
  if (!(is >> tag >> h.disc) || tag != "Δ" || h.disc != d) return warn("has a bad header");
  if (!(is >> tag >> deg) || tag != "deg" || deg < 1) return warn("has a bad degree");
  for (int i = 0; i <= deg; ++i) {
    std::string c;
    if (!(is >> c)) return warn("is truncated");
    h.coeffs.emplace_back(c);
  }
  return h;
}

void HilbertCache::put(const HilbertPoly& h) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw cache_io_error("cannot create " + dir_.string() + ": " + ec.message());
  auto path = path_for(h.disc);
  auto tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw cache_io_error("cannot write " + tmp.string());
    out << serialize(h);
    if (!out) throw cache_io_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw cache_io_error("cannot rename into " + path.string() + ": " + ec.message());
}

HilbertPoly HilbertCache::get_or_compute(i64 d, const PrecisionPolicy& policy) const {
  if (auto h = get(d)) return *h;
  HilbertPoly h = hilbert_class_poly(d, policy);
  put(h);
  return h;
}

}  // namespace cmrel
