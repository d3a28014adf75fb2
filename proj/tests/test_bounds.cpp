#include <doctest.h>

#include <cmath>
#include <set>

#include "cmrel/bounds.hpp"
#include "cmrel/quadforms.hpp"
#include "oracles.hpp"

using namespace cmrel;

TEST_SUITE("bounds") {
  TEST_CASE("F and the unconditional lower bound") {
    CHECK(F(-7) == 1);
    CHECK(F(-84) == mpq_class(1, 12));
    CHECK(ggz_lower(-163).mid_double() == doctest::Approx(std::sqrt(std::log(163.0) / 42000)).epsilon(1e-9));
    for (i64 n = 3; n <= 10000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d) || !is_fundamental(d)) continue;
      REQUIRE(certainly_lt(ggz_lower(d), Ball::from_si(class_number(d), 256)));
    }
  }

  TEST_CASE("Tatuzawa violators come from at most one field") {
    std::set<i64> fields;
    for (i64 n = 3; n <= 10000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      if (certainly_gt(tatuzawa_lower(d), Ball::from_si(class_number(d), 256)))
        fields.insert(fundamental_decomposition(d).first);
    }
    CHECK(fields.size() <= 1);
  }

  TEST_CASE("upper bounds on the class number") {
    CHECK(paulin_upper(-3).mid_double() == doctest::Approx(1.708).epsilon(1e-3));
    CHECK(class_upper(-3).mid_double() == doctest::Approx(2.080).epsilon(1e-3));
    CHECK(class_upper(-166147).mid_double() == doctest::Approx(3020.4).epsilon(1e-3));
    for (i64 n = 3; n <= 20000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      Ball h = Ball::from_si(class_number(d), 256);
      REQUIRE_FALSE(certainly_gt(h, paulin_upper(d)));
      REQUIRE(certainly_lt(paulin_upper(d), class_upper(d)));
    }
  }

  TEST_CASE("theorem constants") {
    CHECK(thm_equal_bound(3).mid_double() == doctest::Approx((9 * std::log(4.0) - 2) / M_PI));
    CHECK(thm_equal_bound(1).mid_double() == doctest::Approx((5 * std::log(2.0) + 2) / M_PI));
    CHECK(thm_field_bound(1).mid_double() == doctest::Approx(7 * std::log(3.0) / M_PI));
    for (i64 n = 1; n < 10; ++n) {
      CHECK(certainly_lt(thm_equal_bound(n), thm_equal_bound(n + 1)));
      CHECK(certainly_lt(thm_field_bound(n), thm_field_bound(n + 1)));
    }
  }

  TEST_CASE("step4 and c2") {
    CHECK(step4_bound(1) == mpz_class("817152000000000000"));
    // ratio formula, exact
    mpq_class r(step4_bound(2), step4_bound(1));
    r.canonicalize();
    mpz_class p3 = 1, p2 = 1;
    for (int i = 0; i < 14; ++i) p3 *= 3;
    for (int i = 0; i < 10; ++i) p2 *= 2;
    mpq_class want = mpq_class(21000) * mpq_class(p3, 1) / mpq_class(p2, 1);
    CHECK(r == want);
    for (i64 n = 1; n <= 10; ++n) {
      HugeValue s4{log(Ball::from_mpz(step4_bound(n), 256))};
      CHECK(s4.certainly_less(c2_bound(n)));
      if (n < 10) {
        CHECK(step4_bound(n) < step4_bound(n + 1));
        CHECK(c2_bound(n).certainly_less(c2_bound(n + 1)));
        CHECK(g_bound(n).certainly_less(g_bound(n + 1)));
      }
    }
  }

  TEST_CASE("class floor cap") {
    // |d|^(1/2) cap 2 e^21000 for k = 1
    double l10 = class_floor_disc_cap(1).log10();
    CHECK(l10 == doctest::Approx(2 * (std::log10(2.0) + 21000 / std::log(10.0))).epsilon(1e-12));
    double l10b = class_floor_disc_cap(2).log10();
    CHECK(l10b == doctest::Approx(2 * (std::log10(8.0) + 84000 / std::log(10.0))).epsilon(1e-12));
    for (i64 k = 1; k < 10; ++k) CHECK(class_floor_disc_cap(k).certainly_less(class_floor_disc_cap(k + 1)));
  }

  TEST_CASE("Stirling upper bound") {
    CHECK(stirling_upper(1).mid_double() == doctest::Approx(std::sqrt(2 * M_PI) * std::exp(-11.0 / 12)));
    for (unsigned k = 1; k <= 20; ++k)
      REQUIRE_FALSE(certainly_lt(stirling_upper(k), Ball::from_mpz(oracle::factorial(k), 256)));
  }
}
