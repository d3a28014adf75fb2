#include <doctest.h>

#include "cmrel/errors.hpp"
#include "cmrel/number_theory.hpp"
#include "cmrel/quadforms.hpp"
#include "oracles.hpp"

using namespace cmrel;

TEST_SUITE("quadforms") {
  TEST_CASE("is_discriminant") {
    CHECK(is_discriminant(-15));
    CHECK_FALSE(is_discriminant(-14));
    CHECK(is_discriminant(-3));
    CHECK_FALSE(is_discriminant(0));
    CHECK_FALSE(is_discriminant(5));
    CHECK_FALSE(is_discriminant(-2));
  }

  TEST_CASE("fundamental decomposition") {
    CHECK(fundamental_decomposition(-7) == std::pair<i64, i64>{-7, 1});
    CHECK(fundamental_decomposition(-12) == std::pair<i64, i64>{-3, 2});
    CHECK(fundamental_decomposition(-48) == std::pair<i64, i64>{-3, 4});
    CHECK(fundamental_decomposition(-60) == std::pair<i64, i64>{-15, 2});
    CHECK_THROWS_AS(fundamental_decomposition(-14), invalid_discriminant);
    for (i64 n = 3; n <= 3000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto [D, f] = fundamental_decomposition(d);
      REQUIRE(D * f * f == d);
      REQUIRE(oracle::is_fundamental(D));
      REQUIRE(is_fundamental(D));
    }
  }

  TEST_CASE("reduced forms, small discriminants") {
    CHECK(reduced_forms(-3) == std::vector<QuadForm>{{1, 1, 1}});
    CHECK(reduced_forms(-15) == std::vector<QuadForm>{{1, 1, 4}, {2, 1, 2}});
    CHECK(reduced_forms(-23) == std::vector<QuadForm>{{1, 1, 6}, {2, -1, 3}, {2, 1, 3}});
    CHECK(class_number(-4) == 1);
    CHECK(class_number(-23) == 3);
    CHECK(class_number(-71) == 7);
    CHECK_THROWS(reduced_forms(-10));
  }

  TEST_CASE("form list properties") {
    for (i64 n = 3; n <= 4000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto fs = reduced_forms(d);
      int ones = 0;
      for (std::size_t i = 0; i < fs.size(); ++i) {
        const auto& f = fs[i];
        REQUIRE(f.disc() == d);
        REQUIRE(is_reduced(f));
        REQUIRE(std::gcd(std::gcd(f.a, f.b), f.c) == 1);
        REQUIRE(3 * f.a * f.a <= n);
        if (i) REQUIRE(fs[i - 1] < f);
        if (f.a == 1) {
          ++ones;
          i64 k = n % 2;
          REQUIRE(f == QuadForm{1, k, (k * k - d) / 4});
        }
      }
      REQUIRE(ones == 1);
      REQUIRE(fs.front().a == 1);
    }
  }

  TEST_CASE("class number against independent oracles") {
    for (i64 n = 3; n <= 5000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      i64 h = class_number(d);
      REQUIRE(h == oracle::brute_class_number(d));
      if (oracle::is_fundamental(d) && n <= 2000) REQUIRE(h == oracle::dirichlet_class_number(d));
    }
  }

  TEST_CASE("class number formula") {
    CHECK(class_number_formula(-3, 2) == 1);
    CHECK(class_number_formula(-4, 2) == 1);
    CHECK(class_number_formula(-7, 1) == 1);
    for (i64 n = 3; n <= 10000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto [D, f] = fundamental_decomposition(d);
      REQUIRE(class_number_formula(D, f) == class_number(d));
    }
  }

  TEST_CASE("class number table agrees with form count") {
    ClassNumberTable t(20000);
    for (i64 n = 3; n <= 20000; n += 7) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      REQUIRE(t(d) == class_number(d));
    }
  }

  TEST_CASE("kronecker") {
    CHECK(kronecker(-3, 3) == 0);
    CHECK(kronecker(-3, 7) == 1);
    CHECK(kronecker(-4, 3) == -1);
    for (i64 a = -200; a <= 200; ++a)
      for (i64 n = 1; n <= 300; ++n) REQUIRE(kronecker(a, n) == oracle::kronecker(a, n));
  }

  TEST_CASE("denominator census") {
    CHECK(denominator_census(-71) == DenominatorCensus{{1, 1}, {2, 2}, {3, 2}, {4, 2}});
    CHECK(denominator_census(-15) == DenominatorCensus{{1, 1}, {2, 1}});
    CHECK(denominator_census(-4) == DenominatorCensus{{1, 1}});
    for (i64 n = 3; n <= 5000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto c = denominator_census(d);
      int total = 0;
      for (auto [a, k] : c) total += k;
      REQUIRE(total == class_number(d));
      REQUIRE(c.at(1) == 1);
    }
  }

  TEST_CASE("omega, rho2, 2-elementary predicates") {
    CHECK(omega(-84) == 3);
    CHECK(rho2(-84) == 2);
    CHECK(omega(-23) == 1);
    CHECK(rho2(-23) == 0);
    CHECK(rho2(-96) == 2);
    CHECK(is_two_elementary(-84));
    CHECK(is_almost_two_elementary(-84));
    CHECK_FALSE(is_two_elementary(-23));
    CHECK_FALSE(is_almost_two_elementary(-23));
    CHECK(is_two_elementary(-15));
    for (i64 n = 3; n <= 4000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      if (is_two_elementary(d)) REQUIRE(is_almost_two_elementary(d));
      REQUIRE(is_two_elementary(d) == (oracle::ambiguous_count(d) == class_number(d)));
    }
  }
}
