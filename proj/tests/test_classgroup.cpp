#include <doctest.h>

#include <set>

#include "cmrel/classgroup.hpp"
#include "cmrel/errors.hpp"
#include "cmrel/quadforms.hpp"
#include "oracles.hpp"

using namespace cmrel;

namespace {
FormClass fc(i64 a, i64 b, i64 c) { return make_class({a, b, c}); }
}  // namespace

TEST_SUITE("classgroup") {
  TEST_CASE("composition examples") {
    CHECK(compose(fc(2, 1, 3), fc(2, -1, 3)).rep == QuadForm{1, 1, 6});
    CHECK(compose(fc(2, 1, 3), fc(2, 1, 3)).rep == QuadForm{2, -1, 3});
    CHECK(compose(identity_class(-23), fc(2, 1, 3)).rep == QuadForm{2, 1, 3});
    CHECK_THROWS_AS(compose(fc(2, 1, 3), fc(2, 1, 2)), discriminant_mismatch);
  }

  TEST_CASE("inverse examples") {
    CHECK(inverse(fc(2, 1, 3)).rep == QuadForm{2, -1, 3});
    CHECK(inverse(fc(1, 1, 6)).rep == QuadForm{1, 1, 6});
    CHECK(inverse(fc(2, 1, 2)).rep == QuadForm{2, 1, 2});
  }

  TEST_CASE("group axioms hold exhaustively for |d| <= 2000") {
    for (i64 n = 3; n <= 2000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto fs = reduced_forms(d);
      std::vector<FormClass> cls;
      for (const auto& f : fs) cls.push_back(make_class(f));
      auto e = identity_class(d);
      std::size_t h = cls.size();
      // a subsample of triples keeps this under a few seconds
      std::size_t step = h > 12 ? h / 6 : 1;
      for (std::size_t i = 0; i < h; i += 1) {
        REQUIRE(compose(e, cls[i]) == cls[i]);
        REQUIRE(compose(cls[i], inverse(cls[i])) == e);
        REQUIRE(power(cls[i], static_cast<i64>(h)) == e);
        for (std::size_t j = 0; j < h; j += step) {
          auto ij = compose(cls[i], cls[j]);
          REQUIRE(ij == compose(cls[j], cls[i]));
          REQUIRE(is_reduced(ij.rep));
          for (std::size_t k = 0; k < h; k += step)
            REQUIRE(compose(ij, cls[k]) == compose(cls[i], compose(cls[j], cls[k])));
        }
      }
    }
  }

  TEST_CASE("multiplication table is a Latin square") {
    for (i64 d : {-23, -84, -71, -420, -3315, -1155}) {
      ClassGroup g(d);
      for (std::size_t i = 0; i < g.size(); ++i) {
        std::set<std::size_t> row;
        for (std::size_t j = 0; j < g.size(); ++j) row.insert(g.mul(i, j));
        REQUIRE(row.size() == g.size());
        REQUIRE(g.mul(i, g.inv(i)) == g.identity());
      }
    }
  }

  TEST_CASE("two torsion") {
    CHECK(two_torsion_count(-84) == 4);
    CHECK(two_torsion_count(-23) == 1);
    CHECK(two_torsion_count(-4) == 1);
    for (i64 n = 3; n <= 4000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      REQUIRE(two_torsion_count(d) == oracle::ambiguous_count(d));
      REQUIRE(two_torsion_count(d) == (i64{1} << rho2(d)));
      if (is_fundamental(d)) REQUIRE(two_torsion_count(d) == (i64{1} << (omega(d) - 1)));
    }
  }

  TEST_CASE("projection examples") {
    for (const auto& f : reduced_forms(-48)) CHECK(project(make_class(f), -12) == identity_class(-12));
    CHECK(project(identity_class(-60), -15) == identity_class(-15));
    CHECK(project(fc(3, 0, 5), -15).rep == QuadForm{2, 1, 2});
    CHECK_THROWS(project(fc(2, 1, 3), -15));
  }

  TEST_CASE("projection is a surjective homomorphism") {
    for (i64 n = 3; n <= 2000; ++n) {
      i64 d = -n;
      if (!is_discriminant(d)) continue;
      auto [D, f] = fundamental_decomposition(d);
      if (f == 1) continue;
      auto fs = reduced_forms(d);
      for (i64 g = 1; g < f; ++g) {
        if (f % g) continue;
        i64 t = g * g * D;
        std::set<QuadForm> image;
        std::vector<FormClass> img;
        for (const auto& q : fs) {
          auto p = project(make_class(q), t);
          REQUIRE(p.disc == t);
          image.insert(p.rep);
          img.push_back(p);
        }
        REQUIRE(static_cast<i64>(image.size()) == class_number(t));
        std::size_t step = fs.size() > 16 ? fs.size() / 8 : 1;
        for (std::size_t i = 0; i < fs.size(); i += step)
          for (std::size_t j = 0; j < fs.size(); j += step)
            REQUIRE(project(compose(make_class(fs[i]), make_class(fs[j])), t) == compose(img[i], img[j]));
      }
    }
  }

  TEST_CASE("orbit structure") {
    {
      OrbitEngine e(-28, -7, -7);
      CHECK(e.orbit({0, 0, 0}).size() == 1);
    }
    {
      OrbitEngine e(-60, -15, -15);
      CHECK(e.orbit({0, 0, 1}).size() == 2);
    }
    {
      OrbitEngine e(-23, -23, -23);
      CHECK(e.orbit({0, 1, 2}).size() == 6);
    }
    CHECK_THROWS(OrbitEngine(-4, -15, -15));
  }

  TEST_CASE("orbit multiplicities") {
    const std::vector<std::array<i64, 3>> triples{
        {-60, -15, -15}, {-23, -23, -92}, {-84, -84, -21 * 4}, {-135, -15, -60}, {-31, -124, -124}};
    for (const auto& t : triples) {
      OrbitEngine e(t[0], t[1], t[2]);
      std::array<std::size_t, 3> h{e.group(0).size(), e.group(1).size(), e.group(2).size()};
      for (std::size_t i = 0; i < h[0]; ++i)
        for (std::size_t j = 0; j < h[1]; ++j) {
          auto orb = e.orbit({i, j, h[2] - 1});
          std::set<IndexTriple> uniq(orb.begin(), orb.end());
          REQUIRE(uniq.size() == orb.size());
          REQUIRE((2 * e.big_class_number()) % orb.size() == 0);
          for (int c = 0; c < 3; ++c) {
            std::map<std::size_t, std::size_t> count;
            for (const auto& r : orb) ++count[r[c]];
            for (const auto& [k, v] : count) REQUIRE(v * count.size() == orb.size());
            REQUIRE(orb.size() % h[c] == 0);
            REQUIRE(count.size() == h[c]);
          }
        }
    }
  }
}
