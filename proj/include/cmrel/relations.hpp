#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "cmrel/ball.hpp"
#include "cmrel/hilbert.hpp"
#include "cmrel/lattice.hpp"

namespace cmrel {

enum class RelStatus { unverified, certified_zero, certified_nonzero };
std::string to_string(RelStatus s);

/* coefficients n_0..n_r for values v_0..v_r; gcd 1, last nonzero entry positive */
struct RelationCandidate {
  std::vector<mpz_class> coeffs;
  RelStatus status = RelStatus::unverified;
  /* log2 of the certified upper bound of |sum n_i v_i| */
  double residual_log2 = 0;
  /* log2 of the detection threshold the residual was compared with */
  double threshold_log2 = 0;
};

/* gcd-normalised with the last nonzero coefficient positive; throws on the zero vector */
RelationCandidate make_candidate(std::vector<mpz_class> coeffs);

struct FindResult {
  std::optional<RelationCandidate> candidate;
  /* every reduced basis vector that passed the threshold, best first */
  std::vector<RelationCandidate> relations;
  /* any integer relation has Euclidean norm >= 2^norm_lower_log2 */
  double norm_lower_log2 = 0;
  /* the bound exceeds sqrt(n) * coeff_bound, so no relation within the bound exists */
  bool conclusive = false;
  long scale_bits = 0;
};

/*
 * Integer relation search by LLL on [I | 2^S Re v | 2^S Im v].  S is taken
 * from the certified accuracy of the values minus a guard, capped by
 * `precision`.  Throws precision_error when 2^S is too small for coeff_bound.
 */
FindResult find_relation(const std::vector<CBall>& values, const mpz_class& coeff_bound,
                         prec_t precision);
FindResult find_relation(const std::vector<Ball>& values, const mpz_class& coeff_bound,
                         prec_t precision);

/* exp(pi sqrt|d|) + 2079, an upper bound for every conjugate of a modulus of d */
Ball house_bound(i64 d, prec_t p = 128);
/* a bound on [Q(x_1, ..., x_n) : Q] for moduli of the given discriminants */
long degree_bound(const std::vector<i64>& discs);

/*
 * Zero test for theta = sum n_i v_i with algebraic-integer v_i whose conjugates
 * are bounded by houses[i], inside a field of degree <= degree.
 */
RelStatus liouville_certify(const std::vector<mpz_class>& coeffs, const std::vector<CBall>& values,
                            const std::vector<Ball>& houses, long degree);

enum class Rank4Status { no_relation, all_minors_vanish, indeterminate };
std::string to_string(Rank4Status s);

struct Rank4Result {
  Rank4Status status = Rank4Status::indeterminate;
  /* rows of the certified nonzero minor */
  std::array<std::size_t, 4> minor{};
  std::size_t minors_tried = 0;
};

CBall det4(const std::array<std::array<CBall, 4>, 4>& m);
Rank4Result rank4_certify(const std::vector<std::array<CBall, 4>>& rows,
                          std::size_t max_minors = 4096);

/* singular moduli in reduced_forms order, shared across threads */
class ModuliCache {
 public:
  std::shared_ptr<const std::vector<CBall>> get(i64 d, prec_t bits);

 private:
  std::mutex mu_;
  std::map<std::pair<i64, prec_t>, std::shared_ptr<const std::vector<CBall>>> data_;
};

struct RelationConfig {
  prec_t bits = 4096;
  unsigned coeff_bound_bits = 128;
  /* certified-only mode: cross-field triples without a certificate become indeterminate */
  bool certified_only = false;
  std::shared_ptr<ModuliCache> moduli = std::make_shared<ModuliCache>();
  std::shared_ptr<HilbertCache> hilbert;

  mpz_class coeff_bound() const;
  ModuliCache& cache() const;
};

/* x = (sum coeffs[k] y^k) / denom */
struct Membership {
  bool found = false;
  RelStatus status = RelStatus::unverified;
  std::vector<mpz_class> coeffs;
  mpz_class denom = 1;
  double norm_lower_log2 = 0;
  std::string reason;
};

/* expansion of x in 1, y, ..., y^(h_y - 1); dx, dy give degree and house bounds */
Membership membership(const CBall& x, i64 dx, const CBall& y, i64 dy, const RelationConfig& cfg);

/* for each class of dy, the index of the modulus of dx lying in the same conjugate field */
std::vector<std::size_t> align_by_genus(i64 dx, i64 dy);
std::vector<std::size_t> align_by_projection(i64 dx, i64 dy);

/*
 * Exact certificate that x_{align[j]} lies in Q(y_j): P in Z[z] with
 * P(y_j) = x_{align[j]} H_y'(y_j), checked by H_x(P / H_y') = 0 mod H_y.
 */
struct SubfieldWitness {
  i64 dx = 0, dy = 0;
  std::vector<mpz_class> P;
  bool certified = false;
  prec_t bits = 0;
  std::string reason;
};
SubfieldWitness subfield_witness(const HilbertPoly& hx, const HilbertPoly& hy,
                                 const std::vector<std::size_t>& align, int max_retries = 4);

/* polynomial arithmetic over Z, constant term first */
using ZPoly = std::vector<mpz_class>;
ZPoly zpoly_mul(const ZPoly& a, const ZPoly& b);
/* remainder modulo a monic polynomial */
ZPoly zpoly_rem_monic(ZPoly a, const ZPoly& m);
ZPoly zpoly_derivative(const ZPoly& a);
bool zpoly_is_zero(const ZPoly& a);

/* p_m of the roots of H by Newton's identities */
mpz_class newton_power_sums(const HilbertPoly& h, unsigned m);

struct PowerExperiment {
  i64 disc = 0;
  unsigned n = 0, m = 0;
  mpz_class power_sum;
  bool power_sum_matches = false;
  std::size_t subsets_tested = 0;
  /* relations a_1 x_1^m + ... + a_n x_n^m in Q found among the tested subsets */
  std::vector<std::vector<mpz_class>> relations;
  bool all_relations_equal_coeffs = true;
};
PowerExperiment power_relation_experiment(i64 d, unsigned n, unsigned m, const RelationConfig& cfg,
                                          std::size_t max_subsets = 64);

/* A x + B y + C z = b */
struct LinearRelation {
  mpq_class A, B, C, b;
};

/*
 * Inputs by case: 2: x, y, y', z, z'; 3: x, x', y, y', z, z' with B, C;
 * 5: x, x', y, z, v, w.  Discriminants give degree and house bounds.
 */
struct CaseData {
  int case_id = 2;
  std::array<i64, 3> discs{};
  CBall x, x1, y, y1, z, z1, v, w;
  mpq_class B = 1, C = 1;
};
LinearRelation build_case_relation(const CaseData& data, prec_t bits = 1024);

/* rational r with r * den = num, certified; throws if not rational */
mpq_class certified_ratio(const CBall& num, const CBall& den, const Ball& house, long degree);

struct Witness {
  std::array<std::size_t, 3> roots{};
  LinearRelation relation;
  /* shape class of the relation: "1".."5", or "outside" */
  std::string case_tag;
};

struct RootOutcome {
  std::array<std::size_t, 3> roots{};
  /* representative of a Galois orbit of this many root triples */
  std::size_t orbit_size = 1;
  std::string status;
  std::string detail;
};

struct TripleReport {
  std::array<i64, 3> triple{};
  std::string mode;
  std::string status = "indeterminate";
  std::vector<Witness> witnesses;
  std::vector<RootOutcome> outcomes;
  prec_t bits = 0;
  unsigned coeff_bound_bits = 0;
  double seconds = 0;
};

std::string classify_relation(const std::array<i64, 3>& discs, const std::array<std::size_t, 3>& roots,
                              const LinearRelation& rel);

TripleReport check_triple(i64 dx, i64 dy, i64 dz, const RelationConfig& cfg);

nlohmann::json to_json(const TripleReport& r, bool with_outcomes = true);

}  // namespace cmrel
