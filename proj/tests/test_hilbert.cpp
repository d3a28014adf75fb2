#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cmrel/hilbert.hpp"
#include "cmrel/modular.hpp"
#include "cmrel/quadforms.hpp"
#include "oracles.hpp"

using namespace cmrel;
namespace fs = std::filesystem;

namespace {
std::vector<mpz_class> Z(std::initializer_list<const char*> xs) {
  std::vector<mpz_class> v;
  for (auto x : xs) v.emplace_back(x);
  return v;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("cmrel_test_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};
}  // namespace

TEST_SUITE("hilbert") {
  TEST_CASE("known polynomials") {
    CHECK(hilbert_class_poly(-3).coeffs == Z({"0", "1"}));
    CHECK(hilbert_class_poly(-4).coeffs == Z({"-1728", "1"}));
    CHECK(hilbert_class_poly(-15).coeffs == Z({"-121287375", "191025", "1"}));
    CHECK(hilbert_class_poly(-23).coeffs ==
          Z({"12771880859375", "-5151296875", "3491750", "1"}));
    CHECK(hilbert_class_poly(-20).coeffs == Z({"-681472000", "-1264000", "1"}));
  }

  TEST_CASE("product of linear factors from the long double oracle") {
    for (i64 n = 3; n <= 60; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      std::vector<oracle::cld> p{1};
      for (const auto& f : reduced_forms(d)) {
        auto r = oracle::j_of_form(f.a, f.b, f.c);
        std::vector<oracle::cld> q(p.size() + 1, 0);
        for (std::size_t i = 0; i < p.size(); ++i) {
          q[i + 1] += p[i];
          q[i] -= r * p[i];
        }
        p = q;
      }
      auto h = hilbert_class_poly(d);
      REQUIRE(h.degree() == class_number(d));
      for (std::size_t i = 0; i < p.size(); ++i) {
        long double want = std::round(p[i].real());
        // only compare coefficients the oracle can resolve
        if (std::abs(want) > 1e15L) continue;
        REQUIRE(h.coeffs[i] == mpz_class(static_cast<long>(want)));
      }
    }
  }

  TEST_CASE("precision policy") {
    CHECK(required_precision(-4) >= 85);
    CHECK(required_precision(-15) >= 114);
    CHECK(required_precision(-3) >= 84);
    auto a = hilbert_class_poly(-971);
    PrecisionPolicy p;
    p.initial_bits = 2 * required_precision(-971);
    auto b = hilbert_class_poly(-971, p);
    CHECK(a == b);
    CHECK(a.degree() == class_number(-971));
  }

  TEST_CASE("root sum and product") {
    for (i64 n = 3; n <= 300; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto h = hilbert_class_poly(d);
      auto roots = singular_moduli(d, 512);
      CBall s(512), pr(512);
      pr = CBall(Ball::from_si(1, 512), Ball::from_si(0, 512));
      for (const auto& r : roots) {
        s = s + r;
        pr = pr * r;
      }
      int deg = h.degree();
      REQUIRE(s.re.contains(-h.coeffs[deg - 1]));
      mpz_class c0 = deg % 2 ? mpz_class(-h.coeffs[0]) : h.coeffs[0];
      REQUIRE(pr.re.contains(c0));
    }
  }

  TEST_CASE("cache round trip, miss and corruption") {
    TempDir t;
    HilbertCache c(t.path);
    CHECK_FALSE(c.get(-23).has_value());
    auto h = hilbert_class_poly(-15);
    c.put(h);
    auto g = c.get(-15);
    REQUIRE(g.has_value());
    CHECK(*g == h);
    CHECK(c.path_for(-15).filename() == "H_15.txt");

    std::ifstream in(c.path_for(-15));
    std::string text((std::istreambuf_iterator<char>(in)), {});
    CHECK(text.rfind("Δ -15\n", 0) == 0);
    CHECK(text.find("deg 2\n") != std::string::npos);
    CHECK(text.find("sha256 " + sha256_hex(text.substr(0, text.find("sha256 ")))) != std::string::npos);
    in.close();

    {
      std::ofstream out(c.path_for(-15));
      out << "Δ -15\ndeg 2\n-121287375\n191026\n1\nsha256 00\n";
    }
    CHECK_FALSE(c.get(-15).has_value());
    CHECK(c.get_or_compute(-15) == h);
    CHECK(c.get(-15).has_value());
  }

  TEST_CASE("cache directory from environment") {
    TempDir t;
    setenv("CMREL_CACHE_DIR", t.path.c_str(), 1);
    auto c = HilbertCache::from_env("unused");
    CHECK(c.dir() == t.path);
    unsetenv("CMREL_CACHE_DIR");
  }

  TEST_CASE("sha256 known vector") {
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }
}
