#pragma once

#include <array>
#include <map>
#include <memory>
#include <vector>

#include "cmrel/quadforms.hpp"

namespace cmrel {

struct FormClass {
  QuadForm rep;
  i64 disc = -4;

  auto operator<=>(const FormClass&) const = default;
};

FormClass make_class(const QuadForm& f);
FormClass identity_class(i64 d);
FormClass compose(const FormClass& f, const FormClass& g);
FormClass inverse(const FormClass& f);
FormClass power(const FormClass& f, i64 n);
i64 two_torsion_count(i64 d);

/* an equivalent form (not reduced) whose first coefficient is prime to m */
QuadForm representative_prime_to(const QuadForm& f, i64 m);

/* natural map cl(f^2 D) -> cl(f'^2 D), f' | f */
FormClass project(const FormClass& f, i64 target);

/* class group with elements indexed as in reduced_forms (identity = 0) */
class ClassGroup {
 public:
  explicit ClassGroup(i64 d);

  i64 discriminant() const { return d_; }
  std::size_t size() const { return forms_.size(); }
  const std::vector<QuadForm>& elements() const { return forms_; }
  const QuadForm& form(std::size_t i) const { return forms_[i]; }
  std::size_t identity() const { return 0; }
  std::size_t index_of(const QuadForm& reduced) const;
  std::size_t mul(std::size_t i, std::size_t j) const;
  std::size_t inv(std::size_t i) const { return inv_[i]; }
  /* index map cl(d) -> cl(target) */
  std::vector<std::size_t> projection_to(const ClassGroup& target) const;

 private:
  /* above this size products are composed on demand */
  static constexpr std::size_t kTableLimit = 1024;
  i64 d_;
  std::vector<QuadForm> forms_;
  std::map<QuadForm, std::size_t> index_;
  std::vector<std::size_t> inv_;
  std::vector<std::size_t> table_;
};

using IndexTriple = std::array<std::size_t, 3>;

/*
 * Simultaneous conjugates of root triples for three discriminants sharing
 * a fundamental discriminant: cl(L^2 D) acts through the three projections,
 * complex conjugation inverts all coordinates.
 */
class OrbitEngine {
 public:
  OrbitEngine(i64 dx, i64 dy, i64 dz);

  const ClassGroup& group(int i) const { return *groups_[i]; }
  i64 big_discriminant() const { return big_; }
  std::size_t big_class_number() const { return big_h_; }
  /* orbit of a triple of class indices, sorted */
  std::vector<IndexTriple> orbit(const IndexTriple& base) const;

 private:
  std::array<i64, 3> disc_;
  std::array<std::shared_ptr<ClassGroup>, 3> groups_;
  i64 big_;
  std::size_t big_h_ = 0;
  /* image of cl(L^2 D) in the product group, duplicates removed */
  std::vector<IndexTriple> image_;
};

std::vector<std::array<FormClass, 3>> galois_orbit_triples(
    i64 dx, i64 dy, i64 dz, const std::array<FormClass, 3>& base);

}  // namespace cmrel
