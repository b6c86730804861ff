#ifndef KEDMD_QUADRATURE_HPP
#define KEDMD_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "kedmd/error.hpp"
#include "kedmd/spectral.hpp"

namespace kedmd {

/// Gauss-Legendre rule on [-1, 1].
template <typename T>
struct BasicGaussRule {
  std::vector<T> nodes;
  std::vector<T> weights;
};

using GaussRule = BasicGaussRule<real>;

/// Nodes and weights of the order-q Gauss-Legendre rule, by Newton iteration
/// on the three-term recurrence, in precision T.
template <typename T = real>
BasicGaussRule<T> gauss_legendre(std::size_t q) {
  using std::abs;
  if (q == 0) throw parameter_error("gauss_legendre: order must be >= 1");
  BasicGaussRule<T> rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const T n = static_cast<T>(q);
  auto legendre = [q](const T& x, T& p0, T& p1) {
    p0 = 1;
    p1 = x;
    for (std::size_t k = 2; k <= q; ++k) {
      const T kk = static_cast<T>(k);
      const T p2 = ((2 * kk - 1) * x * p1 - (kk - 1) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
  };
  const T tol = 4 * std::numeric_limits<T>::epsilon();
  for (std::size_t i = 0; i < (q + 1) / 2; ++i) {
    // Tricomi's initial guess for the i-th largest root; Newton refines it.
    T x = static_cast<T>(std::cos(std::numbers::pi_v<real> * (static_cast<real>(i) + real(0.75)) /
                                  (static_cast<real>(q) + real(0.5))));
    T p0 = 0;
    T p1 = 0;
    for (int iter = 0; iter < 100; ++iter) {
      legendre(x, p0, p1);
      const T step = p1 / (n * (x * p1 - p0) / (x * x - 1));
      x -= step;
      if (abs(step) < tol) break;
    }
    legendre(x, p0, p1);
    const T dp = n * (x * p1 - p0) / (x * x - 1);
    const T w = 2 / ((1 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[q - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[q - 1 - i] = w;
  }
  if (q % 2 == 1) rule.nodes[q / 2] = 0;
  return rule;
}

/// Integral of f over [lo, hi] with the given rule.
template <typename F>
auto integrate(const F& f, real lo, real hi, const GaussRule& rule) {
  const real half = (hi - lo) / 2;
  const real mid = (hi + lo) / 2;
  decltype(f(mid)) sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return sum * half;
}

}  // namespace kedmd

#endif  // KEDMD_QUADRATURE_HPP
