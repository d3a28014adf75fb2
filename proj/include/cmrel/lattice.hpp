#pragma once

#include <vector>

#include <gmpxx.h>

namespace cmrel {

using IntMatrix = std::vector<std::vector<mpz_class>>;

struct LLLResult {
  IntMatrix basis;
  /* d_i = det of the Gram matrix of the first i rows; d_0 = 1 */
  std::vector<mpz_class> gram_dets;
  /* |b*_i|^2 = d_{i+1} / d_i */
  mpq_class gs_norm2(std::size_t i) const {
    mpq_class q(gram_dets[i + 1], gram_dets[i]);
    q.canonicalize();
    return q;
  }
  std::size_t swaps = 0;
};

/*
 * Integral LLL (de Weger / Cohen 2.6.7) on the rows of `basis`, with
 * delta = delta_num / delta_den.  Rows must be linearly independent.
 */
LLLResult lll_reduce(IntMatrix basis, long delta_num = 99, long delta_den = 100);

/* true iff the rows satisfy size reduction and the Lovasz condition */
bool is_lll_reduced(const IntMatrix& basis, long delta_num = 99, long delta_den = 100);

mpz_class dot(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b);

}  // namespace cmrel
