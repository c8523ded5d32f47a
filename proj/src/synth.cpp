#include "smc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace smc::synth {

std::vector<double> spectrum_values(const SpectrumProfile& profile,
                                    std::size_t n) {
  std::vector<double> s(n);
  if (const auto* gap = std::get_if<GapSpectrum>(&profile)) {
    if (gap->r == 0 || gap->r > n)
      throw std::invalid_argument("GapSpectrum: need 1 <= r <= n");
    if (!(gap->g > 0.0))
      throw std::invalid_argument("GapSpectrum: gap ratio must be positive");
    for (std::size_t j = 0; j < n; ++j)
      s[j] = j < gap->r
                 ? 1.0
                 : 1.0 / (gap->g * static_cast<double>(j - gap->r + 1));
  } else if (const auto* pw = std::get_if<PowerSpectrum>(&profile)) {
    if (!(pw->alpha > 0.0))
      throw std::invalid_argument("PowerSpectrum: alpha must be positive");
    for (std::size_t j = 0; j < n; ++j)
      s[j] = std::pow(static_cast<double>(j + 1), -pw->alpha);
  } else {
    const auto& values = std::get<ExplicitSpectrum>(profile).values;
    if (values.size() != n)
      throw std::invalid_argument("ExplicitSpectrum: length mismatch");
    for (std::size_t j = 0; j < n; ++j) {
      if (!(values[j] >= 0.0) || (j > 0 && values[j] > values[j - 1]))
        throw std::invalid_argument(
            "ExplicitSpectrum: values must be nonincreasing and nonnegative");
      s[j] = values[j];
    }
  }
  return s;
}

DenseMatrix haar_orthonormal(std::size_t p, std::size_t k, Rng& rng) {
  if (k > p) throw std::invalid_argument("haar_orthonormal: need k <= p");
  DenseMatrix g(p, k);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < k; ++j) g(i, j) = rng.gaussian();
  return linalg::qr_q_positive(g);
}

DenseMatrix make_instance(std::size_t p1, std::size_t p2,
                          const SpectrumProfile& spectrum, Rng& rng) {
  const std::size_t n = std::min(p1, p2);
  const std::vector<double> sigma = spectrum_values(spectrum, n);
  DenseMatrix u = haar_orthonormal(p1, n, rng);
  const DenseMatrix v = haar_orthonormal(p2, n, rng);
  for (std::size_t i = 0; i < p1; ++i)
    for (std::size_t j = 0; j < n; ++j) u(i, j) *= sigma[j];
  return matmul_nt(u, v);
}

namespace {

std::vector<std::size_t> sample_indices(std::size_t p, std::size_t m,
                                        SamplingScheme scheme, Rng& rng) {
  std::vector<std::size_t> idx;
  idx.reserve(m);
  switch (scheme) {
    case SamplingScheme::FirstRowsCols:
      for (std::size_t i = 0; i < m; ++i) idx.push_back(i);
      break;
    case SamplingScheme::UniformWithoutReplacement: {
      // partial Fisher-Yates
      std::vector<std::size_t> pool(p);
      std::iota(pool.begin(), pool.end(), std::size_t{0});
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = i + rng.uniform_below(p - i);
        std::swap(pool[i], pool[j]);
        idx.push_back(pool[i]);
      }
      break;
    }
    case SamplingScheme::UniformWithReplacement:
      for (std::size_t i = 0; i < m; ++i)
        idx.push_back(rng.uniform_below(p));
      break;
  }
  return idx;
}

std::vector<std::size_t> complement_of(const std::vector<std::size_t>& idx,
                                       std::size_t p) {
  std::set<std::size_t> taken(idx.begin(), idx.end());
  std::vector<std::size_t> rest;
  rest.reserve(p - taken.size());
  for (std::size_t i = 0; i < p; ++i)
    if (!taken.contains(i)) rest.push_back(i);
  return rest;
}

}  // namespace

SplitResult split_blocks(const DenseMatrix& a, std::size_t m1, std::size_t m2,
                         SamplingScheme scheme, Rng& rng) {
  if (m1 == 0 || m1 >= a.rows() || m2 == 0 || m2 >= a.cols())
    throw std::invalid_argument("split_blocks: need 0 < m1 < p1, 0 < m2 < p2");
  std::vector<std::size_t> omega1 = sample_indices(a.rows(), m1, scheme, rng);
  std::vector<std::size_t> omega2 = sample_indices(a.cols(), m2, scheme, rng);
  const std::vector<std::size_t> rest1 = complement_of(omega1, a.rows());
  const std::vector<std::size_t> rest2 = complement_of(omega2, a.cols());

  const DenseMatrix top = a.rows_at(omega1);
  const DenseMatrix bottom = a.rows_at(rest1);
  BlockPartition blocks(top.cols_at(omega2), top.cols_at(rest2),
                        bottom.cols_at(omega2), bottom.cols_at(rest2));
  return SplitResult{std::move(blocks), std::move(omega1), std::move(omega2)};
}

double coherence(const DenseMatrix& u, std::size_t r) {
  if (r == 0 || r > u.cols())
    throw std::invalid_argument("coherence: need 1 <= r <= cols");
  double max_lev = 0.0;
  for (std::size_t i = 0; i < u.rows(); ++i) {
    double lev = 0.0;
    for (std::size_t j = 0; j < r; ++j) lev += u(i, j) * u(i, j);
    max_lev = std::max(max_lev, lev);
  }
  return static_cast<double>(u.rows()) / static_cast<double>(r) * max_lev;
}

GapCondition gap_condition(const DenseMatrix& a, std::size_t m1, std::size_t m2,
                           std::size_t r) {
  if (r == 0 || r > std::min(m1, m2))
    throw std::invalid_argument("gap_condition: need 1 <= r <= min(m1, m2)");
  if (m1 >= a.rows() || m2 >= a.cols())
    throw std::invalid_argument("gap_condition: m1, m2 must split the matrix");
  const linalg::SvdFactorization f = linalg::svd(a);
  if (r >= f.sigma.size())
    throw std::invalid_argument("gap_condition: r exceeds min(p1, p2) - 1");

  GapCondition out;
  out.sigma_r = f.sigma[r - 1];
  out.sigma_r1 = f.sigma[r];
  out.ratio = out.sigma_r > 0.0 ? out.sigma_r1 / out.sigma_r : 0.0;
  const DenseMatrix u11 = f.u.block(0, 0, m1, r);
  const DenseMatrix v11 = f.v.block(0, 0, m2, r);
  out.sigma_min_u11 = linalg::min_singular(u11);
  out.sigma_min_v11 = linalg::min_singular(v11);
  const double scale =
      out.sigma_r * out.sigma_min_u11 * out.sigma_min_v11;
  out.holds_half = out.sigma_r1 <= 0.5 * scale;
  out.holds_quarter = out.sigma_r1 <= 0.25 * scale;
  return out;
}

namespace {

// diag-embedded c * I_r in an rows x cols block
DenseMatrix scaled_eye_block(std::size_t rows, std::size_t cols, std::size_t r,
                             double c) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < r; ++i) m(i, i) = c;
  return m;
}

}  // namespace

LowerBoundPair lowerbound_pair(double m1_bound, double m2_bound, std::size_t r,
                               std::size_t m1, std::size_t m2, std::size_t p1,
                               std::size_t p2, double eps, double eta) {
  if (!(m1_bound > 0.0 && m1_bound < 1.0 && m2_bound > 0.0 && m2_bound < 1.0))
    throw std::domain_error("lowerbound_pair: bounds must lie in (0, 1)");
  if (r == 0 ||
      r > std::min(std::min(m1, m2), std::min(p1 - m1, p2 - m2)))
    throw std::domain_error(
        "lowerbound_pair: need 1 <= r <= min(m1, m2, p1-m1, p2-m2)");
  if (!(eps > 0.0) || !(eta > 0.0))
    throw std::domain_error("lowerbound_pair: eps and eta must be positive");

  const double a = 1.0;
  const double b = std::sqrt(1.0 - m1_bound * m1_bound) / m1_bound - eta;
  const double c = std::sqrt(1.0 - m2_bound * m2_bound) / m2_bound - eta;
  if (!(b > 0.0 && c > 0.0))
    throw std::domain_error("lowerbound_pair: eta too large for the bounds");
  const double d = b * c / a;

  const DenseMatrix a11 = scaled_eye_block(m1, m2, r, a);
  const DenseMatrix a12 = scaled_eye_block(m1, p2 - m2, r, c);
  const DenseMatrix a21 = scaled_eye_block(p1 - m1, m2, r, b);
  BlockPartition plus(a11, a12, a21,
                      scaled_eye_block(p1 - m1, p2 - m2, r, d + eps));
  BlockPartition minus(a11, a12, a21,
                       scaled_eye_block(p1 - m1, p2 - m2, r, d - eps));
  return LowerBoundPair{plus.assemble(), minus.assemble(), m1, m2, r};
}

}  // namespace smc::synth
