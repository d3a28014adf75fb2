#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cmrel/number_theory.hpp"

namespace cmrel {

/* positive definite binary quadratic form a x^2 + b x y + c y^2 */
struct QuadForm {
  i64 a = 1, b = 0, c = 1;

  i64 disc() const { return b * b - 4 * a * c; }
  auto operator<=>(const QuadForm&) const = default;
  std::string str() const;
};

class Discriminant {
 public:
  explicit Discriminant(i64 value);

  i64 value() const { return value_; }
  i64 fundamental() const { return fundamental_; }
  i64 conductor() const { return conductor_; }

 private:
  i64 value_, fundamental_, conductor_;
};

bool is_discriminant(i64 n);
bool is_fundamental(i64 d);
/* (D, f) with d = f^2 D */
std::pair<i64, i64> fundamental_decomposition(i64 d);

bool is_reduced(const QuadForm& f);
QuadForm reduce(QuadForm f);
QuadForm principal_form(i64 d);

/* the set T_d, sorted by (a, b, c) */
std::vector<QuadForm> reduced_forms(i64 d);
i64 class_number(i64 d);
/* order class number formula h(f^2 D), unit index included */
i64 class_number_formula(i64 D, i64 f);

using DenominatorCensus = std::map<i64, int>;
DenominatorCensus denominator_census(i64 d);

int omega(i64 d);
int rho2(i64 d);
bool is_two_elementary(i64 d);
bool is_almost_two_elementary(i64 d);
/* variants taking a known class number */
bool is_two_elementary(i64 d, i64 h);
bool is_almost_two_elementary(i64 d, i64 h);

/*
 * h(d) for every discriminant with |d| <= max_abs, by one sweep over
 * reduced (a, b, c).  Entry 0 for non-discriminants.
 */
class ClassNumberTable {
 public:
  explicit ClassNumberTable(i64 max_abs);
  i64 max_abs() const { return max_abs_; }
  i64 operator()(i64 d) const;

 private:
  i64 max_abs_;
  std::vector<std::uint32_t> h_;
};

}  // namespace cmrel
