#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cmrel/ball.hpp"

namespace cmrel {

/* exp(c pi |d|^(1/2)) + sign * 2079 */
struct BoundTerm {
  mpq_class c;
  int sign = 1;
};

/* prefactor * |d|^(-power) * prod(terms) */
struct BoundProduct {
  mpq_class prefactor = 1;
  int inverse_power = 0;
  std::vector<BoundTerm> terms;

  mpq_class exponent() const;
};

struct WeightedProduct {
  long multiplicity = 1;
  BoundProduct product;
};

struct Scenario {
  std::string id;
  std::string description;
  BoundProduct lower;
  std::vector<WeightedProduct> uppers;
  /* |d| values kept by the congruence filter: d mod filter_mod in residues */
  long filter_mod = 4;
  std::vector<long> filter_residues{0, 1};
  /* "claim": published value T means |d| >= T suffices; "table": |d| <= b remains */
  std::string convention = "table";
  std::optional<long> published;
};

struct ThresholdResult {
  /* largest integer |d| >= 1 where lower > sum(uppers) is not certified (0: none) */
  long last_failure = 0;
  /* the same restricted to discriminants passing the filter */
  long last_failure_filtered = 0;
  /* value in the scenario's convention: last_failure, or last_failure + 1 for claims */
  long value = 0;
  long grid_end = 0;
  bool certified = false;
};

Ball eval_expr(const BoundProduct& e, long abs_d, prec_t p);
/* sum of multiplicity * product */
Ball eval_uppers(const Scenario& s, long abs_d, prec_t p);
bool dominance_holds(const Scenario& s);
ThresholdResult threshold(const Scenario& s, prec_t p = 256);

std::vector<Scenario> default_catalog();
std::string catalog_to_json(const std::vector<Scenario>& cat);
std::vector<Scenario> catalog_from_json(const std::string& text);
std::vector<Scenario> load_catalog(const std::string& path);

struct Table1Cell {
  mpq_class l;
  int k = 3;
  int a_min = 2;
  /* none where asymptotic dominance fails */
  std::optional<long> value;
  std::optional<long> published;
  bool is_published = false;
};

int a_min(int k);
Scenario cell_scenario(const mpq_class& l, int k);
Table1Cell table1(const mpq_class& l, int k);
bool a_min_consistency(int k);
const std::vector<int>& table1_rows();
const std::vector<mpq_class>& table1_columns();

}  // namespace cmrel
