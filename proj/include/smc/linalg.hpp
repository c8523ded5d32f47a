#ifndef SMC_LINALG_HPP
#define SMC_LINALG_HPP

#include <stdexcept>
#include <vector>

#include "smc/matrix.hpp"

namespace smc::linalg {

inline constexpr double kDefaultRcond = 1e-12;

struct SvdError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thin SVD: U (p x k), sigma (k, nonincreasing, nonnegative), V (n x k),
// k = min(p, n), with M = U diag(sigma) V^T.
struct SvdFactorization {
  DenseMatrix u;
  std::vector<double> sigma;
  DenseMatrix v;

  DenseMatrix reconstruct() const;
};

SvdFactorization svd(const DenseMatrix& m);

// Singular values only (cheaper; no vectors).
std::vector<double> singular_values(const DenseMatrix& m);

double min_singular(const DenseMatrix& m);
double spectral_norm(const DenseMatrix& m);

// Schatten order: a real q >= 1 or the distinguished value infinity.
class SchattenOrder {
 public:
  // q < 1 -> std::domain_error
  explicit SchattenOrder(double q);
  static SchattenOrder nuclear() { return SchattenOrder(1.0); }
  static SchattenOrder frobenius() { return SchattenOrder(2.0); }
  static SchattenOrder spectral() {
    SchattenOrder o(1.0);
    o.infinite_ = true;
    return o;
  }

  bool is_infinite() const { return infinite_; }
  double value() const { return q_; }

 private:
  double q_;
  bool infinite_ = false;
};

// (sum_i sigma_i^q)^(1/q); q=1 nuclear, q=2 Frobenius, q=inf spectral.
double schatten_norm(const DenseMatrix& m, const SchattenOrder& q);

// true iff sigma_min(B) <= rcond * sigma_max(B), or sigma_max(B) == 0.
bool is_numerically_singular(const DenseMatrix& b, double rcond = kDefaultRcond);

// Solves X * B = Y (B square, s x s; Y with s columns) by LU, never by
// explicit inversion. Throws SingularMatrixError when B is singular per LU
// or per the rcond criterion.
DenseMatrix right_divide(const DenseMatrix& y, const DenseMatrix& b);

// Moore-Penrose pseudo-inverse through the SVD; singular values at or below
// rcond * sigma_max are treated as zero.
DenseMatrix pseudo_inverse(const DenseMatrix& m, double rcond = kDefaultRcond);

// Q factor of the QR decomposition of m (p x k, p >= k), with the sign fix
// that makes the R diagonal positive.
DenseMatrix qr_q_positive(const DenseMatrix& m);

}  // namespace smc::linalg

#endif  // SMC_LINALG_HPP
