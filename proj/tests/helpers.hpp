#ifndef SMC_TESTS_HELPERS_HPP
#define SMC_TESTS_HELPERS_HPP

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "smc/matrix.hpp"
#include "smc/rng.hpp"

namespace smc::test {

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.gaussian();
  return m;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

inline double max_abs(const DenseMatrix& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j)));
  return worst;
}

inline double rel_frobenius_error(const DenseMatrix& estimate,
                                  const DenseMatrix& truth) {
  return frobenius_diff(estimate, truth) / frobenius(truth);
}

}  // namespace smc::test

#endif  // SMC_TESTS_HELPERS_HPP
