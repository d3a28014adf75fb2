#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "cmrel/hilbert.hpp"
#include "cmrel/quadforms.hpp"

namespace cmrel {

/* largest |d| <= cap with h(d) <= k, 0 if none */
i64 max_disc_with_class_at_most(i64 k, i64 cap);
/* the same from an existing table; cap must not exceed table.max_abs() */
i64 max_disc_with_class_at_most(const ClassNumberTable& table, i64 k, i64 cap);

/* |d| < 15 gives h = 1 and |d| < 39 gives h <= 3 */
bool lemma21_check();

/* no d with h(d) >= k, |d| <= b and, when l = 3/2, d = 0, 4 mod 16 */
bool grey_cell_check(const mpq_class& l, i64 k, i64 b);

struct FieldPair {
  i64 dx = 0, dy = 0;
  /* "certified" or "indeterminate: <reason>" */
  std::string status;
  prec_t witness_bits = 0;
  bool certified() const { return status == "certified"; }
};

struct PairSearchOptions {
  i64 max_abs = 166147;
  i64 max_hy = 32;
  i64 max_hx = 16;
  /* build and check the exact membership witness for each pair */
  bool certify = true;
  const HilbertCache* cache = nullptr;
  /* progress callback, may be empty */
  void (*progress)(std::size_t done, std::size_t total) = nullptr;
};

/*
 * Pairs with dy almost 2-elementary, dx 2-elementary, D_x != D_y and
 * Q(x) c Q(y) of index 2.  The genus test selects the pairs; each one then
 * carries an exact membership witness.
 */
std::vector<FieldPair> difffundsub_pairs(const PairSearchOptions& opt = {});

struct EqualFieldRow {
  i64 dx = 0, dy = 0;
  std::string label;
};

/* 2-elementary d with h >= min_h grouped by equal real genus field; pairs with D_x != D_y */
std::vector<EqualFieldRow> equal_field_table(i64 min_h = 2, i64 max_abs = 166147);
void write_equal_field_csv(const std::vector<EqualFieldRow>& rows, const std::filesystem::path& out);
std::vector<EqualFieldRow> read_equal_field_csv(const std::filesystem::path& in);
/* problems found in a user-supplied table; empty when it is consistent */
std::vector<std::string> validate_equal_field_table(const std::vector<EqualFieldRow>& rows,
                                                    bool certify = false,
                                                    const HilbertCache* cache = nullptr);

struct CandidateTriple {
  i64 dx = 0, dy = 0, dz = 0;
  /* 1a, 1b, 1c, 2a, 2b, 2c, 2d */
  std::string tag;
  std::string subcase;
  bool operator<(const CandidateTriple& o) const;
  bool operator==(const CandidateTriple& o) const;
};

struct CaseConfig {
  /* external equal-field table; generated when empty */
  std::optional<std::filesystem::path> abm15_table;
  /* empty means all of 1a 1b 1c 2a 2b 2c 2d */
  std::vector<std::string> cases;
  /* supplementary (dx, 9dx, 9dx) list, see README */
  bool include_2d = true;
  const HilbertCache* cache = nullptr;
};

bool in_case(const CandidateTriple& t);
std::vector<CandidateTriple> case_lists(const CaseConfig& cfg);
std::vector<CandidateTriple> case_list(const std::string& tag, const CaseConfig& cfg);

}  // namespace cmrel
