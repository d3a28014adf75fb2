#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cmrel/ball.hpp"
#include "cmrel/quadforms.hpp"

namespace cmrel {

struct HilbertPoly {
  i64 disc = -3;
  /* constant term first; the last entry is 1 */
  std::vector<mpz_class> coeffs;
  /* precision at which rounding succeeded */
  prec_t certified_bits = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  bool operator==(const HilbertPoly& o) const {
    return disc == o.disc && coeffs == o.coeffs;
  }
  std::string str() const;
};

struct PrecisionPolicy {
  /* 0 means required_precision(d) */
  prec_t initial_bits = 0;
  int max_retries = 4;
};

prec_t required_precision(i64 d);
HilbertPoly hilbert_class_poly(i64 d, const PrecisionPolicy& policy = {});

/* product of (z - r) over balls r, real coefficients */
std::vector<Ball> ball_poly_from_roots(const std::vector<CBall>& roots,
                                       const std::vector<QuadForm>& forms);

std::string sha256_hex(const std::string& data);

/*
 * One text file per discriminant, H_<|d|>.txt; whole-file replacement via
 * rename so concurrent readers never see a partial file.
 */
class HilbertCache {
 public:
  explicit HilbertCache(std::filesystem::path dir);
  /* directory from CMREL_CACHE_DIR, or the given fallback */
  static HilbertCache from_env(const std::filesystem::path& fallback);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path_for(i64 d) const;
  std::optional<HilbertPoly> get(i64 d) const;
  void put(const HilbertPoly& h) const;
  HilbertPoly get_or_compute(i64 d, const PrecisionPolicy& policy = {}) const;

 private:
  std::filesystem::path dir_;
};

std::string serialize(const HilbertPoly& h);

}  // namespace cmrel
