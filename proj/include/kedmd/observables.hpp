#ifndef KEDMD_OBSERVABLES_HPP
#define KEDMD_OBSERVABLES_HPP

///
/// \file observables.hpp
///
/// Observable dictionaries (monomials x^k or Fourier modes exp(i pi (k-K) x))
/// and their closed-form infinite-node Gram data.
///
/// Matrices always use indices 0..N-1; for Fourier bases the mode number of
/// index k is k - K with N = 2K + 1.
///

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "kedmd/error.hpp"
#include "kedmd/spectral.hpp"

namespace kedmd {

enum class BasisKind { monomials, fourier };

inline std::string to_string(BasisKind kind) { return kind == BasisKind::monomials ? "monomials" : "fourier"; }

struct ObservableBasis {
  BasisKind kind = BasisKind::monomials;
  Index size = 0;
  /// Conjugate the second factor in the Gram sums. Default for Fourier modes,
  /// where it turns H into the identity; has no effect on monomials.
  bool conjugate_second_slot = false;

  static ObservableBasis monomials(Index n) {
    if (n < 1) throw parameter_error("monomials: N must be >= 1");
    return {BasisKind::monomials, n, false};
  }

  static ObservableBasis fourier(Index n, bool conjugate = true) {
    if (n < 1 || n % 2 == 0) throw parameter_error("fourier: N must be odd and >= 1");
    return {BasisKind::fourier, n, conjugate};
  }

  /// K with N = 2K + 1 (0 for monomials).
  Index mode_offset() const noexcept { return kind == BasisKind::fourier ? (size - 1) / 2 : 0; }

  bool real_valued() const noexcept { return kind == BasisKind::monomials; }
};

/// sin(pi u) / (pi u) with the removable singularity filled in.
inline real sinc(real u) {
  const real x = std::numbers::pi_v<real> * u;
  if (std::abs(u) < real(1e-10)) return 1 - x * x / 6;
  return std::sin(x) / x;
}

/// (psi_0(x), ..., psi_{N-1}(x)).
inline CVector eval_basis(const ObservableBasis& basis, real x) {
  if (!(x >= -1 && x <= 1)) throw domain_error("eval_basis: x outside [-1, 1]");
  CVector out(basis.size);
  if (basis.kind == BasisKind::monomials) {
    real p = 1;
    for (Index k = 0; k < basis.size; ++k, p *= x) out(k) = p;
  } else {
    const Index offset = basis.mode_offset();
    for (Index k = 0; k < basis.size; ++k)
      out(k) = std::polar(real(1), std::numbers::pi_v<real> * static_cast<real>(k - offset) * x);
  }
  return out;
}

/// Exact monomial Gram matrix (1/2) int x^(k+l) dx: 1/(k+l+1) for even k+l, else 0.
template <typename T = real>
Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> monomial_gram(Index n) {
  Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> h(n, n);
  for (Index k = 0; k < n; ++k)
    for (Index l = 0; l < n; ++l) h(k, l) = ((k + l) % 2 == 0) ? T(1) / T(k + l + 1) : T(0);
  return h;
}

/// Infinite-node Gram matrix H_N of the basis.
inline CMatrix gram_infinite(const ObservableBasis& basis) {
  const Index n = basis.size;
  if (basis.kind == BasisKind::monomials) return monomial_gram<real>(n).cast<complex_real>();
  if (basis.conjugate_second_slot) return CMatrix::Identity(n, n);
  // Without conjugation mode k pairs with mode -k: the anti-diagonal.
  CMatrix h = CMatrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) h(k, n - 1 - k) = 1.0;
  return h;
}

/// Closed-form infinite-node G for the skewed doubling map observed through
/// N Fourier modes with the conjugated second slot.
inline CMatrix fourier_cross_closed(double a, Index n) {
  if (!(std::abs(a) < 1.0)) throw parameter_error("fourier_cross_closed: |a| must be < 1");
  if (n < 1 || n % 2 == 0) throw parameter_error("fourier_cross_closed: N must be odd");
  constexpr real pi = std::numbers::pi_v<real>;
  const Index offset = (n - 1) / 2;
  const real wl = (1 + static_cast<real>(a)) / 2;
  const real wr = (1 - static_cast<real>(a)) / 2;
  CMatrix g(n, n);
  for (Index row = 0; row < n; ++row) {
    const real k = static_cast<real>(row - offset);
    for (Index col = 0; col < n; ++col) {
      const real l = static_cast<real>(col - offset);
      g(row, col) = wl * std::polar(real(1), pi * l * wr) * sinc(k - l * wl) +
                    wr * std::polar(real(1), -pi * l * wl) * sinc(k - l * wr);
    }
  }
  return g;
}

}  // namespace kedmd

#endif  // KEDMD_OBSERVABLES_HPP
