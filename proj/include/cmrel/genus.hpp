#pragma once

#include <vector>

#include "cmrel/quadforms.hpp"

namespace cmrel {

/* squarefree kernel with sign: product of primes to odd powers, times sign(n) */
i64 squarefree_part(i64 n);
/* product of two squarefree classes, as a squarefree class */
i64 square_class_mul(i64 a, i64 b);

/*
 * Generators of the group S(d) of square classes attached to the assigned
 * genus characters of d: p* = (-1)^((p-1)/2) p for odd p | d, and -1, 2, -2
 * according to the 2-adic shape of d.
 */
std::vector<i64> genus_generators(i64 d);
/* all square classes in S(d), sorted */
std::vector<i64> genus_square_classes(i64 d);
/* the positive elements of S(d); 2^rho2(d) of them */
std::vector<i64> positive_genus_classes(i64 d);
/* an F2 basis of positive_genus_classes(d) */
std::vector<i64> positive_genus_basis(i64 d);

bool is_subset(const std::vector<i64>& a, const std::vector<i64>& b);

/* an odd positive integer represented by f, prime to m */
i64 represented_prime_to(const QuadForm& f, i64 m);
/* chi_s(f) = (s / n) for n represented by f, odd and prime to 2 d s */
int genus_character(i64 s, const QuadForm& f);

/* Q(sqrt s1, sqrt s2, ...) */
std::string field_label(const std::vector<i64>& basis);

}  // namespace cmrel
