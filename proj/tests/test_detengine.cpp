#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "cmrel/detengine.hpp"

#ifndef CMREL_SOURCE_DIR
#define CMREL_SOURCE_DIR "."
#endif

using namespace cmrel;

namespace {

/* plain long double evaluation of lower - sum(uppers) */
long double margin(const Scenario& s, long n) {
  const long double pi = 3.14159265358979323846264338327950288L;
  long double r = std::sqrt(static_cast<long double>(n));
  auto prod = [&](const BoundProduct& p) {
    long double v = p.prefactor.get_d() / std::pow(static_cast<long double>(n), p.inverse_power);
    for (const auto& t : p.terms) v *= std::exp(t.c.get_d() * pi * r) + t.sign * 2079.0L;
    return v;
  };
  long double up = 0;
  for (const auto& u : s.uppers) up += u.multiplicity * prod(u.product);
  return prod(s.lower) - up;
}

long last_failure(const Scenario& s, long upto) {
  long last = 0;
  for (long n = 1; n <= upto; ++n)
    if (margin(s, n) <= 0) last = n;
  return last;
}

}  // namespace

TEST_SUITE("detengine") {
  TEST_CASE("expression evaluation") {
    BoundProduct e;
    e.terms = {{mpq_class(1, 2), -1}};
    CHECK(eval_expr(e, 3, 128).mid_double() == doctest::Approx(std::exp(M_PI * std::sqrt(3.0) / 2) - 2079));
    BoundProduct p;
    p.prefactor = 800;
    p.inverse_power = 4;
    CHECK(eval_expr(p, 16, 128).mid_double() == doctest::Approx(800.0 / 65536));
    CHECK(eval_expr(BoundProduct{}, 50, 128).mid_double() == 1.0);
  }

  TEST_CASE("thresholds agree with a floating point scan") {
    for (const auto& s : default_catalog()) {
      if (!dominance_holds(s)) continue;
      auto r = threshold(s);
      CAPTURE(s.id);
      CHECK(r.certified);
      long last = last_failure(s, std::min<long>(std::max<long>(4 * r.grid_end, 20000), 100000));
      CHECK(r.last_failure == last);
      CHECK(r.value == (s.convention == "claim" ? last + 1 : last));
      // minimality: the inequality is not certified one step below
      if (r.last_failure > 0) CHECK(margin(s, r.last_failure) <= 0);
    }
  }

  TEST_CASE("published thresholds") {
    std::map<std::string, long> got;
    for (const auto& s : default_catalog()) got[s.id] = threshold(s).value;
    CHECK(got.at("mod8-first") == 10);
    CHECK(got.at("mod8-second") <= 32);
    CHECK(got.at("mod8-third") == 29);
    CHECK(got.at("uniform-l2") == 8);
    CHECK(got.at("cell-l2-k5") == 304);
    CHECK(got.at("cell-l3/2-k7") == 5879);
    CHECK(got.at("cell-l3/2-k9") == 1557);
    CHECK(got.at("cell-l3/2-k11") == 790);
    CHECK(got.at("cell-l3/2-k15") == 515);
    CHECK(got.at("cell-l2-k7") == 49);
    CHECK(got.at("cell-l4-k3") == 0);
  }

  TEST_CASE("table cells") {
    auto c = table1(mpq_class(3, 2), 7);
    CHECK(c.a_min == 4);
    CHECK(c.value == 5879);
    CHECK(table1(2, 7).value == 49);
    CHECK(table1(4, 3).value == 0);
    auto empty = table1(2, 3);
    CHECK_FALSE(empty.is_published);
    CHECK_FALSE(empty.value.has_value());
    CHECK_THROWS(table1(5, 3));
    CHECK_THROWS(a_min(4));
  }

  TEST_CASE("a_min consistency") {
    for (int k : table1_rows()) CHECK(a_min_consistency(k));
    CHECK(a_min(3) == 2);
    CHECK(a_min(15) == 7);
  }

  TEST_CASE("thresholds are stable under precision doubling") {
    for (const auto& s : default_catalog()) {
      if (!dominance_holds(s)) continue;
      CHECK(threshold(s, 256).value == threshold(s, 512).value);
    }
  }

  TEST_CASE("catalog round trip and shipped copy") {
    auto cat = default_catalog();
    std::string j = catalog_to_json(cat);
    CHECK(catalog_to_json(catalog_from_json(j)) == j);
    std::ifstream in(std::string(CMREL_SOURCE_DIR) + "/data/scenarios.json");
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string shipped = ss.str();
    auto trim = [](std::string t) {
      while (!t.empty() && t.back() == '\n') t.pop_back();
      return t;
    };
    CHECK(trim(shipped) == trim(j));
  }

  TEST_CASE("dominance failure is an error") {
    Scenario s = cell_scenario(2, 3);
    CHECK_FALSE(dominance_holds(s));
    CHECK_THROWS(threshold(s));
  }
}
