#ifndef SMC_SYNTH_HPP
#define SMC_SYNTH_HPP

#include <cstdint>
#include <variant>
#include <vector>

#include "smc/completion.hpp"
#include "smc/matrix.hpp"
#include "smc/rng.hpp"

namespace smc::synth {

// Singular-value profiles for generated instances.
struct GapSpectrum {
  std::size_t r;  // rank of the dominant part (leading r values are 1)
  double g;       // gap ratio; tail decays as 1/(g * j)
};
struct PowerSpectrum {
  double alpha;  // j^-alpha decay
};
struct ExplicitSpectrum {
  std::vector<double> values;
};

using SpectrumProfile =
    std::variant<GapSpectrum, PowerSpectrum, ExplicitSpectrum>;

// The n leading singular values of the profile, nonincreasing and
// nonnegative; throws std::invalid_argument on a bad profile.
std::vector<double> spectrum_values(const SpectrumProfile& profile,
                                    std::size_t n);

// How the observed m1 rows and m2 columns are chosen from the full matrix.
enum class SamplingScheme {
  FirstRowsCols,
  UniformWithoutReplacement,
  UniformWithReplacement,
};

// p x k matrix with orthonormal columns, Haar-distributed: Gaussian draw,
// QR, then the column sign fix that makes the R diagonal positive (plain QR
// is not Haar).
DenseMatrix haar_orthonormal(std::size_t p, std::size_t k, Rng& rng);

// A = U diag(sigma) V^T with independent Haar factors; the singular values
// of the result match the profile.
DenseMatrix make_instance(std::size_t p1, std::size_t p2,
                          const SpectrumProfile& spectrum, Rng& rng);

struct SplitResult {
  BlockPartition blocks;       // ground-truth a22 populated
  std::vector<std::size_t> omega1;  // sampled row indices (size m1)
  std::vector<std::size_t> omega2;  // sampled column indices (size m2)
};

// Blocks under the sampled index sets. With replacement, duplicate draws
// repeat rows/columns in the observed blocks and the unobserved part covers
// the never-drawn indices.
SplitResult split_blocks(const DenseMatrix& a, std::size_t m1, std::size_t m2,
                         SamplingScheme scheme, Rng& rng);

// Coherence statistic (p/r) * max_i sum_{j<r} U_ij^2 of the leading-r
// columns; 1 for flat leverage, p/r for a spiked basis.
double coherence(const DenseMatrix& u, std::size_t r);

// Diagnostics for the spectral-gap conditions behind the recovery bounds:
// sigma_{r+1}(A) <= f * sigma_r(A) * sigma_min(U11) * sigma_min(V11)
// with f = 1/2 (known-rank bound) and f = 1/4 (rank-search bound).
struct GapCondition {
  bool holds_half = false;
  bool holds_quarter = false;
  double sigma_min_u11 = 0.0;
  double sigma_min_v11 = 0.0;
  double ratio = 0.0;  // sigma_{r+1} / sigma_r (0 when sigma_r == 0)
  double sigma_r = 0.0;
  double sigma_r1 = 0.0;
};

GapCondition gap_condition(const DenseMatrix& a, std::size_t m1, std::size_t m2,
                           std::size_t r);

// Two-point minimax construction: a pair of matrices with bit-identical
// observed blocks whose unknown blocks differ by 2*eps on r diagonal
// entries. No estimator can recover both.
struct LowerBoundPair {
  DenseMatrix a_plus;   // A22 diagonal d + eps
  DenseMatrix a_minus;  // A22 diagonal d - eps
  std::size_t m1 = 0;
  std::size_t m2 = 0;
  std::size_t r = 0;
};

LowerBoundPair lowerbound_pair(double m1_bound, double m2_bound, std::size_t r,
                               std::size_t m1, std::size_t m2, std::size_t p1,
                               std::size_t p2, double eps, double eta);

}  // namespace smc::synth

#endif  // SMC_SYNTH_HPP
