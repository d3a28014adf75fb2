#include <doctest.h>

#include <algorithm>
#include <set>

#include "cmrel/classgroup.hpp"
#include "cmrel/genus.hpp"
#include "cmrel/quadforms.hpp"
#include "oracles.hpp"

using namespace cmrel;

TEST_SUITE("genus") {
  TEST_CASE("square classes") {
    CHECK(squarefree_part(12) == 3);
    CHECK(squarefree_part(-8) == -2);
    CHECK(squarefree_part(1) == 1);
    CHECK(square_class_mul(-3, -7) == 21);
    CHECK(square_class_mul(6, 10) == 15);
  }

  TEST_CASE("positive classes") {
    auto s = positive_genus_classes(-84);
    std::sort(s.begin(), s.end());
    CHECK(s == std::vector<i64>{1, 3, 7, 21});
    CHECK(field_label(positive_genus_basis(-84)) == "Q(sqrt(3),sqrt(7))");
    CHECK(positive_genus_classes(-23) == std::vector<i64>{1});
    CHECK(rho2(-7392) == 4);
  }

  TEST_CASE("genus square classes have the right size") {
    for (i64 n = 3; n <= 6000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto all = genus_square_classes(d);
      REQUIRE(all.size() == (std::size_t{1} << (rho2(d) + 1)));
      REQUIRE(positive_genus_classes(d).size() == (std::size_t{1} << rho2(d)));
    }
  }

  TEST_CASE("characters are homomorphisms whose kernel is the squares") {
    for (i64 d : {-84, -420, -1155, -3315, -5460, -7392, -96, -260, -195}) {
      ClassGroup g(d);
      auto gens = genus_generators(d);
      auto val = [&](std::size_t i) {
        std::vector<int> v;
        for (i64 s : gens) v.push_back(genus_character(s, g.form(i)));
        return v;
      };
      std::set<std::size_t> squares;
      for (std::size_t i = 0; i < g.size(); ++i) squares.insert(g.mul(i, i));
      for (std::size_t i = 0; i < g.size(); ++i) {
        auto vi = val(i);
        bool trivial = std::all_of(vi.begin(), vi.end(), [](int x) { return x == 1; });
        REQUIRE(trivial == (squares.count(i) == 1));
        for (std::size_t j = 0; j < g.size(); ++j) {
          auto vj = val(j), vij = val(g.mul(i, j));
          for (std::size_t k = 0; k < gens.size(); ++k) REQUIRE(vij[k] == vi[k] * vj[k]);
        }
      }
    }
  }

  TEST_CASE("represented integers") {
    QuadForm f{2, 1, 3};
    for (i64 m : {1, 6, 35, 2 * 23 * 3}) {
      i64 r = represented_prime_to(f, m);
      REQUIRE(std::gcd(r, m) == 1);
      bool found = false;
      for (i64 x = -40; x <= 40 && !found; ++x)
        for (i64 y = -40; y <= 40 && !found; ++y) found = f.a * x * x + f.b * x * y + f.c * y * y == r;
      REQUIRE(found);
    }
  }

  TEST_CASE("character matches the kronecker symbol oracle") {
    for (i64 d : {-84, -420, -195}) {
      for (const auto& f : reduced_forms(d))
        for (i64 s : genus_generators(d)) {
          i64 r = represented_prime_to(f, 2 * s * d);
          CHECK(genus_character(s, f) == oracle::kronecker(s, r));
        }
    }
  }

  TEST_CASE("subset") {
    CHECK(is_subset({1, 3}, {1, 3, 7, 21}));
    CHECK_FALSE(is_subset({1, 5}, {1, 3, 7, 21}));
  }
}
