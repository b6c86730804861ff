#ifndef KEDMD_TRANSFER_HPP
#define KEDMD_TRANSFER_HPP

///
/// \file transfer.hpp
///
/// Finite sections of the transfer operator
///
///   (L f)(z) = sum_l sigma_l phi_l'(z) f(phi_l(z))
///
/// in the basis e_n(z) = (z / rho)^n, i.e. L_kn = (L e_n, e_k), together with
/// the Taylor-truncation error bound for analytic full-branch maps.
///
/// If c_kn is the z^k Taylor coefficient of L(z^n), then L_kn = rho^(k-n) c_kn.
/// The spectrum of the N x N section does not depend on rho.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "kedmd/error.hpp"
#include "kedmd/maps.hpp"
#include "kedmd/spectral.hpp"

namespace kedmd {

enum class TransferMethod { affine_closed_form, cauchy };

struct TransferMatrix {
  CMatrix L;
  double rho = 1.0;
  TransferMethod method = TransferMethod::affine_closed_form;
  double sample_radius = 0.0;  ///< cauchy only
  std::size_t samples = 0;     ///< cauchy only
};

namespace detail {

inline real binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0;
  real out = 1;
  for (Index i = 1; i <= k; ++i) out = out * static_cast<real>(n - k + i) / static_cast<real>(i);
  return out;
}

}  // namespace detail

/// Exact section for maps whose inverse branches are all affine,
/// phi(z) = alpha z + beta, by binomial expansion of alpha (alpha z + beta)^n.
inline TransferMatrix transfer_matrix_affine(const IntervalMap& map, Index n, double rho = 1.0) {
  if (!map.piecewise_affine()) throw unsupported_map_error(map.name() + ": transfer_matrix_affine needs affine branches");
  if (n < 1) throw parameter_error("transfer_matrix_affine: N must be >= 1");
  if (!(rho > 0.0)) throw parameter_error("transfer_matrix_affine: rho must be positive");
  TransferMatrix out;
  out.rho = rho;
  out.method = TransferMethod::affine_closed_form;
  Matrix l = Matrix::Zero(n, n);
  for (const Branch& b : map.branches()) {
    const real alpha = b.affine->slope;
    const real beta = b.affine->offset;
    const real weight = b.sign * alpha;
    for (Index col = 0; col < n; ++col)
      for (Index row = 0; row <= col; ++row)
        l(row, col) += weight * detail::binomial(col, row) * std::pow(alpha, static_cast<real>(row)) *
                       std::pow(beta, static_cast<real>(col - row));
  }
  for (Index col = 0; col < n; ++col)
    for (Index row = 0; row <= col; ++row)
      l(row, col) *= std::pow(static_cast<real>(rho), static_cast<real>(row - col));
  out.L = l.cast<complex_real>();
  return out;
}

/// First `count` Taylor coefficients of g from `samples` equispaced values on
/// |z| = radius: c_k = mean_j g(z_j) z_j^(-k).
inline CVector taylor_coefficients(const std::function<complex_real(complex_real)>& g, Index count, double radius,
                                   std::size_t samples) {
  if (!(radius > 0.0)) throw parameter_error("taylor_coefficients: radius must be positive");
  if (samples < static_cast<std::size_t>(count)) throw parameter_error("taylor_coefficients: too few samples");
  const real two_pi = 2 * std::numbers::pi_v<real>;
  const real ns = static_cast<real>(samples);
  std::vector<complex_real> values(samples);
  for (std::size_t j = 0; j < samples; ++j)
    values[j] = g(std::polar(static_cast<real>(radius), two_pi * static_cast<real>(j) / ns));
  CVector c = CVector::Zero(count);
  for (Index k = 0; k < count; ++k) {
    complex_real sum = 0;
    for (std::size_t j = 0; j < samples; ++j)
      sum += values[j] * std::polar(real(1), -two_pi * static_cast<real>(static_cast<std::size_t>(k) * j % samples) / ns);
    c(k) = sum / (ns * std::pow(static_cast<real>(radius), static_cast<real>(k)));
  }
  return c;
}

namespace detail {

// Taylor coefficients c_kn of L(z^n), n < count, from one set of contour samples.
inline CMatrix cauchy_coefficients(const IntervalMap& map, Index count, double radius, std::size_t samples) {
  const real two_pi = 2 * std::numbers::pi_v<real>;
  const real ns = static_cast<real>(samples);
  // g_n(z_j) for all n at once: sum_l sigma_l phi_l'(z) phi_l(z)^n.
  CMatrix values = CMatrix::Zero(static_cast<Index>(samples), count);
  for (std::size_t j = 0; j < samples; ++j) {
    const complex_real z = std::polar(static_cast<real>(radius), two_pi * static_cast<real>(j) / ns);
    for (const Branch& b : map.branches()) {
      const complex_real phi = b.inverse(z);
      complex_real term = static_cast<real>(b.sign) * b.inverse_derivative(z);
      for (Index n = 0; n < count; ++n) {
        values(static_cast<Index>(j), n) += term;
        term *= phi;
      }
    }
  }
  CMatrix c(count, count);
  for (Index k = 0; k < count; ++k) {
    CVector twiddle(static_cast<Index>(samples));
    for (std::size_t j = 0; j < samples; ++j)
      twiddle(static_cast<Index>(j)) =
          std::polar(real(1), -two_pi * static_cast<real>(static_cast<std::size_t>(k) * j % samples) / ns);
    c.row(k) = (twiddle.transpose() * values) / (ns * std::pow(static_cast<real>(radius), static_cast<real>(k)));
  }
  return c;
}

}  // namespace detail

inline constexpr std::size_t default_cauchy_samples = 4096;
inline constexpr double default_sample_radius = 1.1;
inline constexpr double aliasing_tolerance = 1e-10;

/// Section of the transfer operator for analytic inverse branches, from
/// Cauchy integrals on |z| = sample_radius. The inverse branches are checked
/// for continuity on the contour, and the coefficients are recomputed with
/// twice the samples as an aliasing guard.
inline TransferMatrix transfer_matrix_analytic(const IntervalMap& map, Index n, double rho = 1.0,
                                               double sample_radius = default_sample_radius,
                                               std::size_t samples = default_cauchy_samples) {
  if (n < 1) throw parameter_error("transfer_matrix_analytic: N must be >= 1");
  if (!(rho > 0.0)) throw parameter_error("transfer_matrix_analytic: rho must be positive");
  if (!(sample_radius > 0.0)) throw parameter_error("transfer_matrix_analytic: sample radius must be positive");
  if (samples < 4 * static_cast<std::size_t>(n) || (samples & (samples - 1)) != 0)
    throw parameter_error("transfer_matrix_analytic: samples must be a power of two and >= 4N");

  check_branch_continuity(map, sample_radius, samples);
  CMatrix c = detail::cauchy_coefficients(map, n, sample_radius, samples);
  const CMatrix check = detail::cauchy_coefficients(map, n, sample_radius, 2 * samples);
  const double change = static_cast<double>((check - c).cwiseAbs().maxCoeff());
  if (!(change < aliasing_tolerance))
    throw aliasing_error("transfer_matrix_analytic: coefficients moved by " + std::to_string(change) +
                         " when doubling the contour samples");

  for (Index col = 0; col < n; ++col)
    for (Index row = 0; row < n; ++row) c(row, col) *= std::pow(static_cast<real>(rho), static_cast<real>(row - col));

  TransferMatrix out;
  out.L = std::move(c);
  out.rho = rho;
  out.method = TransferMethod::cauchy;
  out.sample_radius = sample_radius;
  out.samples = samples;
  return out;
}

/// Eigenvalues of the section.
inline Spectrum transfer_spectrum(const TransferMatrix& t) { return eigenvalues(t.L); }

/// Estimate of sup_{|z| <= s} sum_l |phi_l'(z)|: maximum over `points` samples
/// of the circle |z| = s (maximum principle), times `safety`. Not certified.
inline double estimate_deriv_sum_sup(const IntervalMap& map, double s, std::size_t points = 720,
                                     double safety = 1.05) {
  double sup = 0.0;
  for (std::size_t j = 0; j < points; ++j) {
    const complex_real z =
        std::polar(static_cast<real>(s), 2 * std::numbers::pi_v<real> * static_cast<real>(j) / static_cast<real>(points));
    double sum = 0.0;
    for (const Branch& b : map.branches()) sum += static_cast<double>(std::abs(b.inverse_derivative(z)));
    sup = std::max(sup, sum);
  }
  return safety * sup;
}

/// Bound C ((rho/R)^N + (r/rho)^N) on ||L - P_N L P_N|| in H^2(D_rho), with
/// C = rho / sqrt(rho^2 - r^2) * sup_{D_R} sum_l |phi_l'|.
inline double projection_error_bound(double r, double r_outer, double rho, Index n, double deriv_sum_sup) {
  if (!(r < rho && rho < r_outer)) throw parameter_error("projection_error_bound: need r < rho < R");
  const double c = rho / std::sqrt(rho * rho - r * r) * deriv_sum_sup;
  const double nn = static_cast<double>(n);
  return c * (std::pow(rho / r_outer, nn) + std::pow(r / rho, nn));
}

/// rho = sqrt(r R), which balances the two terms of projection_error_bound.
inline double balanced_rho(double r, double r_outer) { return std::sqrt(r * r_outer); }

/// rho = sqrt(r R / gamma), the balancing radius once the Gram inverse growth
/// gamma^N is taken into account.
inline double edmd_balanced_rho(double r, double r_outer) { return std::sqrt(r * r_outer / gamma_constant); }

/// True when r / R < 1 / gamma, the expansion regime in which exponential
/// convergence of EDMD eigenvalues is guaranteed.
inline bool in_convergence_regime(double r, double r_outer) { return r / r_outer < 1.0 / gamma_constant; }

/// N-dependent factor (gamma r / R)^(N/2) of the infinite-node EDMD error,
/// up to an unspecified constant.
inline double edmd_galerkin_rate(double r, double r_outer, Index n) {
  return std::pow(gamma_constant * r / r_outer, 0.5 * static_cast<double>(n));
}

/// N- and M-dependent factor (gamma r R)^(N/2) N^2 / M + (gamma r / R)^(N/2) of
/// the finite-node EDMD error, up to an unspecified constant.
inline double edmd_total_rate(double r, double r_outer, Index n, double m) {
  const double nn = static_cast<double>(n);
  return std::pow(gamma_constant * r * r_outer, 0.5 * nn) * nn * nn / m + edmd_galerkin_rate(r, r_outer, n);
}

}  // namespace kedmd

#endif  // KEDMD_TRANSFER_HPP
