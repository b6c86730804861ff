#ifndef KEDMD_TEST_SUPPORT_HPP
#define KEDMD_TEST_SUPPORT_HPP

// Helpers shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include "kedmd.hpp"

namespace testing_support {

using kedmd::cplx;

// Largest distance under a greedy nearest pairing of two equally long
// multisets. Adequate when the sets are close relative to their spacing.
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(b.size(), false);
  for (const cplx& x : a) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(x - b[j]) < dist) {
        dist = std::abs(x - b[j]);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

inline kedmd::Matrix random_matrix(kedmd::Index rows, kedmd::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  kedmd::Matrix m(rows, cols);
  for (kedmd::Index j = 0; j < cols; ++j)
    for (kedmd::Index i = 0; i < rows; ++i) m(i, j) = dist(rng);
  return m;
}

inline kedmd::CMatrix random_complex_matrix(kedmd::Index rows, kedmd::Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  kedmd::CMatrix m(rows, cols);
  for (kedmd::Index j = 0; j < cols; ++j)
    for (kedmd::Index i = 0; i < rows; ++i) m(i, j) = kedmd::complex_real(dist(rng), dist(rng));
  return m;
}

// Exact infinite-node monomial G for a piecewise-affine map, by expanding
// (1/2) int T(x)^k x^l dx on each branch: with x = alpha y + beta the branch
// contributes (alpha/2) sum_j C(l, j) alpha^j beta^(l-j) int_{-1}^{1} y^(k+j) dy.
inline kedmd::Matrix binomial_cross(const kedmd::IntervalMap& map, kedmd::Index n) {
  using kedmd::real;
  auto choose = [](kedmd::Index top, kedmd::Index k) {
    real c = 1;
    for (kedmd::Index i = 1; i <= k; ++i) c = c * static_cast<real>(top - k + i) / static_cast<real>(i);
    return c;
  };
  kedmd::Matrix g = kedmd::Matrix::Zero(n, n);
  for (const auto& b : map.branches()) {
    const real alpha = b.affine->slope;
    const real beta = b.affine->offset;
    for (kedmd::Index k = 0; k < n; ++k)
      for (kedmd::Index l = 0; l < n; ++l) {
        real sum = 0;
        for (kedmd::Index j = 0; j <= l; ++j) {
          const kedmd::Index p = k + j;
          if (p % 2 != 0) continue;
          sum += choose(l, j) * std::pow(alpha, static_cast<real>(j)) * std::pow(beta, static_cast<real>(l - j)) * 2 /
                 static_cast<real>(p + 1);
        }
        g(k, l) += alpha / 2 * sum;
      }
  }
  return g;
}

// Distinct-value check on a spectrum prefix: max |values[i] - expected[i]|.
inline double prefix_error(const kedmd::Spectrum& s, const std::vector<double>& expected) {
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, std::abs(s[i] - cplx(expected[i], 0.0)));
  return worst;
}

}  // namespace testing_support

#endif  // KEDMD_TEST_SUPPORT_HPP
