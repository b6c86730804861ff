#ifndef KEDMD_EDMD_HPP
#define KEDMD_EDMD_HPP

///
/// \file edmd.hpp
///
/// EDMD matrix pairs and their spectra.
///
/// For observables psi_k and nodes x_m the finite-node pair is
///
///   H_kl = (1/M) sum_m psi_k(x_m)    c(psi_l(x_m))
///   G_kl = (1/M) sum_m psi_k(T(x_m)) c(psi_l(x_m))
///
/// where c is complex conjugation for Fourier bases and the identity for
/// monomials. The infinite-node pair replaces the averages by
/// (1/2) int_{-1}^{1} dx. EDMD eigenvalues solve lambda H u = G u, computed
/// here as the eigenvalues of pinv_eps(H) G.
///

#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "kedmd/error.hpp"
#include "kedmd/maps.hpp"
#include "kedmd/observables.hpp"
#include "kedmd/quadrature.hpp"
#include "kedmd/spectral.hpp"

namespace kedmd {

/// Equidistant nodes x_m = -1 + delta + 2m/M, m = 0..M-1.
struct NodeSet {
  std::size_t M = 0;
  double delta = 0.0;
  std::vector<real> nodes;
};

inline NodeSet nodes_equidistant(std::size_t m, double delta) {
  if (m < 1) throw parameter_error("nodes_equidistant: M must be >= 1");
  const double spacing = 2.0 / static_cast<double>(m);
  if (!(delta >= 0.0 && delta <= spacing)) throw parameter_error("nodes_equidistant: delta must lie in [0, 2/M]");
  NodeSet out{m, delta, std::vector<real>(m)};
  const real mm = static_cast<real>(m);
  // For the midpoint rule (delta = 1/M, stored rounded) use 2i + 1 directly.
  const bool midpoint = delta == 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const real shift = midpoint ? real(1) : static_cast<real>(delta) * mm;
    out.nodes[i] = std::min(real(1), -1 + (2 * static_cast<real>(i) + shift) / mm);
  }
  return out;
}

/// Midpoint nodes, delta = 1/M.
inline NodeSet nodes_midpoint(std::size_t m) {
  if (m < 1) throw parameter_error("nodes_midpoint: M must be >= 1");
  return nodes_equidistant(m, 1.0 / static_cast<double>(m));
}

enum class Provenance { finite, infinite, closed_form };

inline std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::finite: return "finite";
    case Provenance::infinite: return "infinite";
    case Provenance::closed_form: return "closed_form";
  }
  return "unknown";
}

struct EdmdPair {
  CMatrix H;
  CMatrix G;
  /// Monomial bases only: the same pair in quad precision, which is what
  /// edmd_spectrum solves. Left empty, it is taken from H and G.
  WideMatrix H_wide;
  WideMatrix G_wide;
  Provenance provenance = Provenance::finite;
  std::size_t M = 0;          ///< finite provenance only
  double delta = 0.0;         ///< finite provenance only
  std::size_t quad_order = 0; ///< infinite provenance only
  ObservableBasis basis;
  std::string map_name;
  double map_parameter = 0.0;

  /// Both matrices are real (monomial bases).
  bool real_valued() const noexcept { return basis.real_valued(); }
};

namespace detail {

// Real Gram sums over the nodes in working precision.
inline void accumulate_monomial(const IntervalMap& map, const std::vector<real>& nodes, Index n, Matrix& h,
                                Matrix& g) {
  const std::size_t m = nodes.size();
  Matrix px(n, static_cast<Index>(m));
  Matrix pt(n, static_cast<Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const real x = nodes[j];
    const real t = map(x);
    real a = 1;
    real b = 1;
    for (Index k = 0; k < n; ++k) {
      px(k, static_cast<Index>(j)) = a;
      pt(k, static_cast<Index>(j)) = b;
      a *= x;
      b *= t;
    }
  }
  h = px * px.transpose() / static_cast<real>(m);
  g = pt * px.transpose() / static_cast<real>(m);
}

inline void accumulate_fourier(const IntervalMap& map, const std::vector<real>& nodes,
                               const ObservableBasis& basis, CMatrix& h, CMatrix& g) {
  const Index n = basis.size;
  const std::size_t m = nodes.size();
  CMatrix px(n, static_cast<Index>(m));
  CMatrix pt(n, static_cast<Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    const real x = nodes[j];
    px.col(static_cast<Index>(j)) = eval_basis(basis, x);
    pt.col(static_cast<Index>(j)) = eval_basis(basis, map(x));
  }
  const CMatrix second = basis.conjugate_second_slot ? CMatrix(px.conjugate()) : px;
  h = px * second.transpose() / static_cast<real>(m);
  g = pt * second.transpose() / static_cast<real>(m);
}

// (1/2) int T(x)^k x^l dx for piecewise-affine maps in quad precision. On a
// branch with inverse alpha z + beta the substitution x = alpha y + beta gives
// (alpha / 2) int_{-1}^{1} y^k (alpha y + beta)^l dy.
inline WideMatrix quadrature_cross_affine(const IntervalMap& map, Index n, std::size_t q) {
  const BasicGaussRule<wide> rule = gauss_legendre<wide>(q);
  WideMatrix g = WideMatrix::Zero(n, n);
  std::vector<wide> py(static_cast<std::size_t>(n));
  std::vector<wide> px(static_cast<std::size_t>(n));
  for (const Branch& b : map.branches()) {
    const wide alpha = b.affine->slope;
    const wide beta = b.affine->offset;
    const wide scale = b.sign * alpha / 2;
    for (std::size_t i = 0; i < q; ++i) {
      const wide y = rule.nodes[i];
      const wide x = alpha * y + beta;
      wide a = 1;
      wide c = 1;
      for (Index k = 0; k < n; ++k) {
        py[static_cast<std::size_t>(k)] = a;
        px[static_cast<std::size_t>(k)] = c;
        a *= y;
        c *= x;
      }
      const wide w = scale * rule.weights[i];
      for (Index k = 0; k < n; ++k)
        for (Index l = 0; l < n; ++l) g(k, l) += w * py[static_cast<std::size_t>(k)] * px[static_cast<std::size_t>(l)];
    }
  }
  return g;
}

// (1/2) int psi_k(T(x)) c(psi_l(x)) dx, per-branch Gauss-Legendre of order q.
inline CMatrix quadrature_cross(const IntervalMap& map, const ObservableBasis& basis, std::size_t q) {
  const Index n = basis.size;
  const GaussRule rule = gauss_legendre(q);
  CMatrix g = CMatrix::Zero(n, n);
  for (const Branch& b : map.branches()) {
    const real half = (static_cast<real>(b.domain_hi) - b.domain_lo) / 2;
    const real mid = (static_cast<real>(b.domain_hi) + b.domain_lo) / 2;
    for (std::size_t i = 0; i < q; ++i) {
      const real x = mid + half * rule.nodes[i];
      const real w = half * rule.weights[i] / 2;
      const real t = std::clamp(b.forward(x), real(-1), real(1));
      CVector first = eval_basis(basis, t);
      CVector second = eval_basis(basis, x);
      if (basis.conjugate_second_slot) second = second.conjugate();
      g.noalias() += w * first * second.transpose();
    }
  }
  return g;
}

}  // namespace detail

/// EDMD pair from finitely many nodes.
inline EdmdPair build_finite(const IntervalMap& map, const ObservableBasis& basis, const NodeSet& nodes) {
  EdmdPair out;
  out.provenance = Provenance::finite;
  out.M = nodes.M;
  out.delta = nodes.delta;
  out.basis = basis;
  out.map_name = map.name();
  out.map_parameter = map.kind_parameter();
  if (basis.kind == BasisKind::monomials) {
    Matrix h;
    Matrix g;
    detail::accumulate_monomial(map, nodes.nodes, basis.size, h, g);
    out.H = h.cast<complex_real>();
    out.G = g.cast<complex_real>();
    out.H_wide = h.cast<wide>();
    out.G_wide = g.cast<wide>();
  } else {
    detail::accumulate_fourier(map, nodes.nodes, basis, out.H, out.G);
  }
  return out;
}

inline constexpr std::size_t default_quad_order = 64;
inline constexpr double quadrature_tolerance = 1e-10;

/// EDMD pair in the infinite-node limit. H is the closed-form Gram matrix; G
/// uses the closed Fourier form for the skewed doubling map and per-branch
/// Gauss-Legendre otherwise, verified against the rule of twice the order.
/// Monomial G for piecewise-affine maps is integrated in quad precision.
inline EdmdPair build_infinite(const IntervalMap& map, const ObservableBasis& basis,
                               std::size_t quad_order = default_quad_order) {
  if (quad_order < 1) throw parameter_error("build_infinite: quadrature order must be >= 1");
  EdmdPair out;
  out.basis = basis;
  out.map_name = map.name();
  out.map_parameter = map.kind_parameter();
  out.H = gram_infinite(basis);
  if (basis.kind == BasisKind::fourier && basis.conjugate_second_slot &&
      map.exact_spectrum_kind() == ExactSpectrumKind::skewed_doubling) {
    out.provenance = Provenance::closed_form;
    out.G = fourier_cross_closed(map.kind_parameter(), basis.size);
    return out;
  }
  out.provenance = Provenance::infinite;
  out.quad_order = quad_order;
  double change = 0.0;
  if (basis.real_valued() && map.piecewise_affine()) {
    out.G_wide = detail::quadrature_cross_affine(map, basis.size, quad_order);
    const WideMatrix check = detail::quadrature_cross_affine(map, basis.size, 2 * quad_order);
    change = static_cast<double>((check - out.G_wide).cwiseAbs().maxCoeff());
    out.G = out.G_wide.cast<real>().cast<complex_real>();
  } else {
    out.G = detail::quadrature_cross(map, basis, quad_order);
    const CMatrix check = detail::quadrature_cross(map, basis, 2 * quad_order);
    change = static_cast<double>((check - out.G).cwiseAbs().maxCoeff());
    if (basis.real_valued()) {
      out.G = out.G.real().cast<complex_real>();
      out.G_wide = out.G.real().cast<wide>();
    }
  }
  if (change > quadrature_tolerance)
    throw quadrature_error("build_infinite: entries moved by " + std::to_string(change) +
                           " when doubling the Gauss-Legendre order");
  if (basis.real_valued()) out.H_wide = monomial_gram<wide>(basis.size);
  return out;
}

namespace detail {

inline std::pair<WideMatrix, WideMatrix> wide_pair(const EdmdPair& pair) {
  if (pair.H_wide.size() == pair.H.size() && pair.G_wide.size() == pair.G.size())
    return {pair.H_wide, pair.G_wide};
  return {pair.H.real().cast<wide>(), pair.G.real().cast<wide>()};
}

}  // namespace detail

/// Default relative cut for the epsilon-pseudoinverse of H.
inline constexpr double default_eps_pinv = 1e-12;

/// Eigenvalues of pinv_eps(H) G, sorted by the spectrum convention.
/// Spectrum::rank_deficient flags that the truncation dropped directions.
inline Spectrum edmd_spectrum(const EdmdPair& pair, double eps = default_eps_pinv) {
  if (!(eps >= 0.0)) throw parameter_error("edmd_spectrum: eps must be non-negative");
  const Index n = pair.H.rows();
  Spectrum out;
  if (pair.real_valued()) {
    const auto [h, g] = detail::wide_pair(pair);
    const auto pinv = truncated_pseudoinverse(h, eps);
    out = eigenvalues(WideMatrix(pinv.matrix * g));
    out.eps_rank = pinv.rank;
  } else {
    const auto pinv = truncated_pseudoinverse(pair.H, eps);
    out = eigenvalues(CMatrix(pinv.matrix * pair.G));
    out.eps_rank = pinv.rank;
  }
  out.rank_deficient = out.eps_rank < n;
  return out;
}

/// The EDMD matrix pinv_eps(H) G itself.
inline CMatrix edmd_matrix(const EdmdPair& pair, double eps = default_eps_pinv) {
  if (pair.real_valued()) {
    const auto [h, g] = detail::wide_pair(pair);
    return WideMatrix(pseudoinverse(h, eps) * g).cast<real>().cast<complex_real>();
  }
  return pseudoinverse(pair.H, eps) * pair.G;
}

/// Node count ceil(N^2 R^N) sufficient for exponential convergence.
inline std::uint64_t node_schedule(std::size_t n, double r_outer) {
  if (!(r_outer > 1.0)) throw parameter_error("node_schedule: R must be > 1");
  const double nn = static_cast<double>(n);
  const double m = std::ceil(nn * nn * std::pow(r_outer, nn));
  if (!std::isfinite(m) || m >= 9.2e18) throw overflow_error("node_schedule: M exceeds the count range");
  return static_cast<std::uint64_t>(m);
}

/// max(sup|T'|, 2(d - 1)), the prefactor of the G collocation bounds.
inline double collocation_factor(const IntervalMap& map) {
  return std::max(map.deriv_sup(), 2.0 * static_cast<double>(map.branch_count() - 1));
}

/// Entrywise collocation bound |(H_N - H_N^(M))_kl| <= (k + l) / M.
inline double h_entry_bound(Index k, Index l, std::size_t m) {
  return static_cast<double>(k + l) / static_cast<double>(m);
}

/// Entrywise collocation bound for G: factor * (k + l + 1) / M.
inline double g_entry_bound(const IntervalMap& map, Index k, Index l, std::size_t m) {
  return collocation_factor(map) * static_cast<double>(k + l + 1) / static_cast<double>(m);
}

/// ||H_N - H_N^(M)||_2 <= (3/2) N^2 / M.
inline double h_norm_bound(Index n, std::size_t m) {
  return 1.5 * static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(m);
}

/// ||G_N - G_N^(M)||_2 <= (3/2) factor N^2 / M.
inline double g_norm_bound(const IntervalMap& map, Index n, std::size_t m) {
  return collocation_factor(map) * h_norm_bound(n, m);
}

}  // namespace kedmd

#endif  // KEDMD_EDMD_HPP
