#include <doctest.h>

#include <cmath>

#include "cmrel/classgroup.hpp"
#include "cmrel/errors.hpp"
#include "cmrel/hilbert.hpp"
#include "cmrel/modular.hpp"
#include "cmrel/quadforms.hpp"
#include "cmrel/relations.hpp"
#include "oracles.hpp"

using namespace cmrel;

namespace {

constexpr prec_t P = 1024;

CBall one(prec_t p = P) { return CBall(Ball::from_si(1, p), Ball(p)); }

std::vector<mpz_class> Zv(std::initializer_list<long> xs) {
  std::vector<mpz_class> v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

/* A x + B y + C z - b evaluated at fresh high precision */
CBall residual(const std::array<i64, 3>& d, const Witness& w, prec_t p) {
  CBall acc(p);
  const mpq_class* co[3] = {&w.relation.A, &w.relation.B, &w.relation.C};
  for (int i = 0; i < 3; ++i) {
    auto m = singular_moduli(d[i], p);
    CBall t = m[w.roots[i]];
    acc = acc + t * Ball::from_ratio(co[i]->get_num(), co[i]->get_den(), p);
  }
  return acc - CBall(Ball::from_ratio(w.relation.b.get_num(), w.relation.b.get_den(), p), Ball(p));
}

}  // namespace

TEST_SUITE("relations") {
  TEST_CASE("find_relation examples") {
    auto j4 = singular_moduli(-4, P);
    auto r = find_relation(std::vector<CBall>{one(), j4[0]}, mpz_class(1000000), P);
    REQUIRE(r.candidate);
    CHECK(r.candidate->coeffs == Zv({-1728, 1}));

    auto j15 = singular_moduli(-15, P);
    auto none = find_relation(std::vector<CBall>{one(), j15[0]}, mpz_class(1000000), P);
    CHECK_FALSE(none.candidate);
    CHECK(none.conclusive);
    CHECK(none.norm_lower_log2 > std::log2(1e6));

    auto z = find_relation(std::vector<CBall>{one(), CBall(P)}, mpz_class(1000000), P);
    REQUIRE(z.candidate);
    CHECK(z.candidate->coeffs == Zv({0, 1}));
  }

  TEST_CASE("find_relation on real values") {
    Ball s2 = sqrt(Ball::from_si(2, P));
    Ball s3 = sqrt(Ball::from_si(3, P));
    Ball s6 = s2 * s3;
    // (s2 + s3)^2 = 5 + 2 s6
    Ball t = sqr(s2 + s3);
    auto r = find_relation(std::vector<Ball>{Ball::from_si(1, P), s6, t}, mpz_class(1000), P);
    REQUIRE(r.candidate);
    auto c = r.candidate->coeffs;
    CHECK(c == Zv({-5, -2, 1}));
    // residual below its own threshold
    for (const auto& rel : r.relations) CHECK(rel.residual_log2 <= rel.threshold_log2);
  }

  TEST_CASE("precision too low for the bound") {
    auto j4 = singular_moduli(-4, 64);
    CHECK_THROWS_AS(find_relation(std::vector<CBall>{one(64), j4[0]}, mpz_class(1) << 100, 64),
                    precision_error);
  }

  TEST_CASE("Liouville certification") {
    auto x7 = singular_moduli(-7, P);
    std::vector<Ball> houses{Ball::from_si(1, 128), house_bound(-7)};
    CHECK(liouville_certify(Zv({3375, 1}), {one(), x7[0]}, houses, 1) == RelStatus::certified_zero);
    CHECK(liouville_certify(Zv({-1728, 1}), {one(), x7[0]}, houses, 1) == RelStatus::certified_nonzero);
    CHECK_THROWS(make_candidate(Zv({0, 0})));
    auto c = make_candidate(Zv({-4, 6}));
    CHECK(c.coeffs == Zv({-2, 3}));
  }

  TEST_CASE("house and degree bounds") {
    for (i64 n = 3; n <= 400; ++n) {
      if (!is_discriminant(-n)) continue;
      Ball M = house_bound(-n);
      for (const auto& v : singular_moduli(-n, 128)) REQUIRE(certainly_lt(abs(v), M));
    }
    CHECK(degree_bound({-23}) <= 3 * 2);
    CHECK(degree_bound({-23, -23, -23}) >= 3);
    CHECK(degree_bound({-15, -23}) >= 6);
  }

  TEST_CASE("rank-4 certification") {
    auto x = singular_moduli(-23, 512);
    auto row = [&](std::size_t a, std::size_t b, std::size_t c) {
      return std::array<CBall, 4>{one(512), x[a], x[b], x[c]};
    };
    // the 6 permutations of the three roots: x+y+z is constant, rank 3
    std::vector<std::array<CBall, 4>> perm{row(0, 1, 2), row(0, 2, 1), row(1, 0, 2),
                                           row(1, 2, 0), row(2, 0, 1), row(2, 1, 0)};
    CHECK(rank4_certify(perm).status == Rank4Status::all_minors_vanish);
    std::vector<std::array<CBall, 4>> dup{row(0, 1, 2), row(0, 1, 2), row(1, 0, 2), row(1, 0, 2)};
    CHECK(rank4_certify(dup).status == Rank4Status::all_minors_vanish);
    std::vector<std::array<CBall, 4>> gen{row(0, 0, 1), row(1, 1, 2), row(2, 2, 0), row(0, 1, 1),
                                          row(1, 2, 2), row(2, 0, 0)};
    auto r = rank4_certify(gen);
    CHECK(r.status == Rank4Status::no_relation);
    CHECK(r.minors_tried >= 1);
  }

  TEST_CASE("check_triple positive controls") {
    RelationConfig cfg;
    cfg.bits = 2048;
    {
      auto r = check_triple(-4, -15, -15, cfg);
      CHECK(r.status == "relation-found-certified");
      REQUIRE(!r.witnesses.empty());
      const auto& w = r.witnesses[0];
      CHECK(w.relation.A == 1);
      CHECK(w.relation.B == 1);
      CHECK(w.relation.C == 1);
      CHECK(w.relation.b == mpq_class(1728 - 191025));
      CHECK(w.case_tag == "2");
      CHECK(residual({-4, -15, -15}, w, 3000).abs_upper().to_double() < 1e-20);
    }
    {
      auto r = check_triple(-23, -23, -23, cfg);
      CHECK(r.status == "relation-found-certified");
      REQUIRE(!r.witnesses.empty());
      const auto& w = r.witnesses[0];
      CHECK(w.relation.A == w.relation.B);
      CHECK(w.relation.B == w.relation.C);
      CHECK(w.relation.b / w.relation.A == -3491750);
      CHECK(w.case_tag == "4");
      CHECK(residual({-23, -23, -23}, w, 3000).abs_upper().to_double() < 1e-20);
    }
    {
      auto r = check_triple(-15, -15, -20, cfg);
      CHECK(r.status == "relation-found-certified");
      REQUIRE(!r.witnesses.empty());
      CHECK(r.witnesses[0].case_tag == "3");
      CHECK(residual({-15, -15, -20}, r.witnesses[0], 3000).abs_upper().to_double() < 1e-20);
    }
  }

  TEST_CASE("check_triple eliminations") {
    RelationConfig cfg;
    cfg.bits = 2048;
    CHECK(check_triple(-15, -15, -23, cfg).status == "eliminated-heuristic");
    CHECK(check_triple(-28, -7, -7, cfg).status == "eliminated-certified");
    auto r = check_triple(-23, -23, -92, cfg);
    CHECK(r.mode == "same-D");
    CHECK(r.status == "eliminated-certified");
    cfg.certified_only = true;
    CHECK(check_triple(-15, -15, -23, cfg).status == "indeterminate");
  }

  TEST_CASE("relation larger than the requested bound") {
    // the constant of the (0, 2, 3) relation needs about 2^138
    RelationConfig cfg;
    auto r = check_triple(-232, -928, -928, cfg);
    CHECK(r.status == "relation-found-certified");
    bool widened = false;
    for (const auto& o : r.outcomes) {
      CHECK(o.status != "indeterminate");
      widened = widened || o.detail.find("widened") != std::string::npos;
    }
    CHECK(widened);
    for (const auto& w : r.witnesses) CHECK(w.case_tag == "5");
  }

  TEST_CASE("report JSON schema") {
    RelationConfig cfg;
    cfg.bits = 1024;
    cfg.coeff_bound_bits = 64;
    auto j = to_json(check_triple(-4, -15, -15, cfg));
    CHECK(j["triple"] == nlohmann::json::array({-4, -15, -15}));
    CHECK(j["parameters"]["bits"] == 1024);
    CHECK(j["parameters"]["coeff_bound"] == "2^64");
    CHECK(j["witnesses"][0]["b"] == "-189297");
    CHECK(j.contains("per_root_outcomes"));
    CHECK(j.contains("seconds"));
  }

  TEST_CASE("same-field verdicts agree with an exact rank oracle") {
    RelationConfig cfg;
    cfg.bits = 1024;
    for (std::array<i64, 3> t : {std::array<i64, 3>{-15, -15, -60}, {-20, -20, -80}, {-24, -24, -96},
                                 {-31, -31, -31}, {-39, -39, -39}, {-23, -92, -92}}) {
      auto r = check_triple(t[0], t[1], t[2], cfg);
      OrbitEngine eng(t[0], t[1], t[2]);
      const prec_t hp = 10 * cfg.bits;
      std::array<std::vector<CBall>, 3> m{singular_moduli(t[0], hp), singular_moduli(t[1], hp),
                                          singular_moduli(t[2], hp)};
      bool any_rel = false;
      for (std::size_t i = 0; i < eng.group(0).size(); ++i)
        for (std::size_t j = 0; j < eng.group(1).size(); ++j)
          for (std::size_t k = 0; k < eng.group(2).size(); ++k) {
            if ((t[0] == t[1] && i == j) || (t[1] == t[2] && j == k) || (t[0] == t[2] && i == k)) continue;
            auto orb = eng.orbit({i, j, k});
            std::vector<std::array<CBall, 4>> rows;
            for (const auto& o : orb) rows.push_back({one(hp), m[0][o[0]], m[1][o[1]], m[2][o[2]]});
            if (rows.size() < 4 || rank4_certify(rows).status == Rank4Status::all_minors_vanish) any_rel = true;
          }
      CAPTURE(t[0]);
      CAPTURE(t[2]);
      if (!any_rel) CHECK(r.status == "eliminated-certified");
      else CHECK(r.status != "eliminated-certified");
    }
  }

  TEST_CASE("membership for equal fields") {
    RelationConfig cfg;
    {
      auto a = singular_moduli(-23, cfg.bits), b = singular_moduli(-92, cfg.bits);
      auto al = align_by_projection(-23, -92);
      auto m = membership(a[al[0]], -23, b[0], -92, cfg);
      CHECK(m.found);
      CHECK(m.status == RelStatus::certified_zero);
    }
    {
      auto a = singular_moduli(-31, cfg.bits), b = singular_moduli(-124, cfg.bits);
      auto al = align_by_projection(-31, -124);
      auto m = membership(a[al[0]], -31, b[0], -124, cfg);
      CHECK(m.found);
      CHECK(m.status == RelStatus::certified_zero);
    }
    auto a = singular_moduli(-15, 512), b = singular_moduli(-23, 512);
    auto m = membership(a[0], -15, b[0], -23, cfg);
    CHECK_FALSE(m.found);
  }

  TEST_CASE("exact subfield witnesses") {
    auto hx = hilbert_class_poly(-84), hy = hilbert_class_poly(-336);
    auto w = subfield_witness(hx, hy, align_by_genus(-84, -336));
    CHECK(w.certified);
    auto bad = align_by_genus(-84, -336);
    std::swap(bad[0], bad[1]);
    CHECK_FALSE(subfield_witness(hx, hy, bad, 0).certified);
  }

  TEST_CASE("integer polynomial helpers") {
    ZPoly a = Zv({1, 2, 1}), b = Zv({-1, 1});
    CHECK(zpoly_mul(a, b) == Zv({-1, -1, 1, 1}));
    CHECK(zpoly_is_zero(zpoly_rem_monic(zpoly_mul(a, b), b)));
    CHECK(zpoly_derivative(a) == Zv({2, 2}));
  }

  TEST_CASE("Newton power sums") {
    CHECK(newton_power_sums(hilbert_class_poly(-23), 1) == -3491750);
    CHECK(newton_power_sums(hilbert_class_poly(-15), 1) == -191025);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 1728, 5);
    CHECK(newton_power_sums(hilbert_class_poly(-4), 5) == p);
    for (i64 n = 3; n <= 200; ++n) {
      if (!is_discriminant(-n)) continue;
      auto h = hilbert_class_poly(-n);
      auto roots = singular_moduli(-n, 2048);
      for (unsigned m = 1; m <= 10; ++m) {
        CBall s(2048);
        for (const auto& r : roots) s = s + pow_ui(r, m);
        REQUIRE(s.re.contains(newton_power_sums(h, m)));
      }
    }
  }

  TEST_CASE("power relation experiment") {
    RelationConfig cfg;
    cfg.bits = 2048;
    cfg.coeff_bound_bits = 32;
    auto e = power_relation_experiment(-23, 3, 2, cfg);
    CHECK(e.power_sum_matches);
    CHECK(e.all_relations_equal_coeffs);
  }

  TEST_CASE("case constructions") {
    auto j4 = singular_moduli(-4, P), j15 = singular_moduli(-15, P), j20 = singular_moduli(-20, P);
    {
      CaseData d;
      d.case_id = 2;
      d.discs = {-4, -15, -15};
      d.x = d.x1 = j4[0];
      d.y = j15[0];
      d.y1 = j15[1];
      d.z = j15[1];
      d.z1 = j15[0];
      auto r = build_case_relation(d);
      CHECK(r.B / r.C == 1);
      CHECK(r.b == -189297);
    }
    {
      CaseData d;
      d.case_id = 3;
      d.discs = {-15, -15, -20};
      d.x = j15[0];
      d.x1 = j15[1];
      d.y = j15[1];
      d.y1 = j15[0];
      d.z = j20[0];
      d.z1 = j20[1];
      d.B = 1;
      d.C = 1;
      auto r = build_case_relation(d);
      CHECK(r.A != 0);
      // A is rational; the constant is certified by construction
      CBall v = d.x * Ball::from_ratio(r.A.get_num(), r.A.get_den(), P) + d.y + d.z;
      CHECK(v.re.contains(mpz_class(0)) == (r.b == 0));
    }
    {
      CaseData d;
      d.case_id = 7;
      CHECK_THROWS(build_case_relation(d));
    }
  }

  TEST_CASE("classification of relation shapes") {
    LinearRelation r{1, 1, 1, 0};
    CHECK(classify_relation({-4, -15, -15}, {0, 0, 1}, r) == "2");
    CHECK(classify_relation({-23, -23, -23}, {0, 1, 2}, r) == "4");
    CHECK(classify_relation({-4, -7, -8}, {0, 0, 0}, r) == "1");
    CHECK(classify_relation({-15, -15, -20}, {0, 1, 0}, r) == "3");
    CHECK(classify_relation({-23, -23, -23}, {0, 1, 2}, LinearRelation{1, 2, 1, 0}) == "outside");
    CHECK(classify_relation({-4, -15, -15}, {0, 0, 1}, LinearRelation{0, 1, 1, 0}) == "outside");
  }
}
