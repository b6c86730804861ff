#ifndef KEDMD_MAPS_HPP
#define KEDMD_MAPS_HPP

///
/// \file maps.hpp
///
/// Analytic full-branch maps of [-1, 1]. A map is an ordered list of branches;
/// each branch stores the forward map on its interval and the inverse branch
/// continued to the complex plane, which is what the transfer operator needs.
///

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kedmd/error.hpp"
#include "kedmd/spectral.hpp"

namespace kedmd {

/// Inverse branch of the form phi(z) = slope * z + offset.
struct AffineInverse {
  real slope = 0;
  real offset = 0;
};

/// Branch functions are evaluated in the working precision `real`.
struct Branch {
  double domain_lo = -1.0;
  double domain_hi = 1.0;
  std::function<real(real)> forward;
  std::function<real(real)> forward_derivative;
  std::function<complex_real(complex_real)> inverse;
  std::function<complex_real(complex_real)> inverse_derivative;
  /// sgn(phi'(0)): +1 for increasing branches, -1 for decreasing ones.
  int sign = 1;
  /// Present when the inverse branch is affine; enables closed forms.
  std::optional<AffineInverse> affine;
};

/// Radii 1 < r < R with phi_l(D_R) contained in D_r for every branch.
struct ExpansionParams {
  double r = 0.0;
  double R = 0.0;
};

enum class ExactSpectrumKind { none, skewed_doubling, blaschke };

class IntervalMap {
 public:
  IntervalMap(std::string name, std::vector<Branch> branches, double deriv_sup,
              ExactSpectrumKind kind = ExactSpectrumKind::none, double kind_parameter = 0.0,
              std::optional<ExpansionParams> expansion = std::nullopt)
      : name_(std::move(name)),
        branches_(std::move(branches)),
        deriv_sup_(deriv_sup),
        kind_(kind),
        kind_parameter_(kind_parameter),
        expansion_(expansion) {
    if (branches_.empty()) throw parameter_error("IntervalMap: at least one branch required");
    if (branches_.front().domain_lo != -1.0 || branches_.back().domain_hi != 1.0)
      throw parameter_error("IntervalMap: branch domains must cover [-1, 1]");
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      const Branch& b = branches_[i];
      if (!(b.domain_lo < b.domain_hi)) throw parameter_error("IntervalMap: empty branch domain");
      if (!b.forward || !b.inverse || !b.inverse_derivative)
        throw parameter_error("IntervalMap: branch functions missing");
      if (b.sign != 1 && b.sign != -1) throw parameter_error("IntervalMap: branch sign must be +1 or -1");
      if (i + 1 < branches_.size()) {
        if (b.domain_hi != branches_[i + 1].domain_lo)
          throw parameter_error("IntervalMap: branch domains must be contiguous");
        critical_points_.push_back(b.domain_hi);
      }
    }
    if (!(deriv_sup_ >= 1.0)) throw parameter_error("IntervalMap: map must be expanding (sup|T'| >= 1)");
    if (expansion_ && !(1.0 < expansion_->r && expansion_->r < expansion_->R))
      throw parameter_error("IntervalMap: expansion parameters need 1 < r < R");
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<Branch>& branches() const noexcept { return branches_; }
  std::size_t branch_count() const noexcept { return branches_.size(); }
  /// Interior branch endpoints, strictly increasing.
  const std::vector<double>& critical_points() const noexcept { return critical_points_; }
  /// sup of |T'| away from the critical points.
  double deriv_sup() const noexcept { return deriv_sup_; }
  ExactSpectrumKind exact_spectrum_kind() const noexcept { return kind_; }
  /// a for the skewed doubling map, mu for the Blaschke map.
  double kind_parameter() const noexcept { return kind_parameter_; }
  const std::optional<ExpansionParams>& expansion_params() const noexcept { return expansion_; }

  IntervalMap with_expansion_params(ExpansionParams p) const {
    return IntervalMap(name_, branches_, deriv_sup_, kind_, kind_parameter_, p);
  }

  bool piecewise_affine() const {
    return std::all_of(branches_.begin(), branches_.end(), [](const Branch& b) { return b.affine.has_value(); });
  }

  /// Branch index used for forward evaluation at x; critical points go left.
  std::size_t branch_index(real x) const {
    for (std::size_t i = 0; i + 1 < branches_.size(); ++i)
      if (x <= branches_[i].domain_hi) return i;
    return branches_.size() - 1;
  }

  /// T(x).
  real operator()(real x) const {
    if (!(x >= -1 && x <= 1)) throw domain_error("IntervalMap: x outside [-1, 1]");
    const real y = branches_[branch_index(x)].forward(x);
    return std::clamp(y, real(-1), real(1));
  }

 private:
  std::string name_;
  std::vector<Branch> branches_;
  std::vector<double> critical_points_;
  double deriv_sup_;
  ExactSpectrumKind kind_;
  double kind_parameter_;
  std::optional<ExpansionParams> expansion_;
};

inline real eval(const IntervalMap& map, real x) { return map(x); }

/// Skewed doubling map with critical point a; two increasing affine branches.
inline IntervalMap make_skewed_doubling(double a) {
  if (!(std::abs(a) < 1.0)) throw parameter_error("skewed doubling: |a| must be < 1");
  const real ar = a;
  const real left_slope = (1 + ar) / 2;   // phi_1'
  const real right_slope = (1 - ar) / 2;  // phi_2'

  Branch left;
  left.domain_lo = -1.0;
  left.domain_hi = a;
  left.forward = [ar](real x) { return -1 + 2 * (x + 1) / (1 + ar); };
  left.forward_derivative = [ar](real) { return 2 / (1 + ar); };
  left.inverse = [left_slope](complex_real z) { return -real(1) + left_slope * (z + real(1)); };
  left.inverse_derivative = [left_slope](complex_real) { return complex_real(left_slope, 0); };
  left.affine = AffineInverse{left_slope, (ar - 1) / 2};

  Branch right;
  right.domain_lo = a;
  right.domain_hi = 1.0;
  right.forward = [ar](real x) { return 1 + 2 * (x - 1) / (1 - ar); };
  right.forward_derivative = [ar](real) { return 2 / (1 - ar); };
  right.inverse = [right_slope](complex_real z) { return real(1) + right_slope * (z - real(1)); };
  right.inverse_derivative = [right_slope](complex_real) { return complex_real(right_slope, 0); };
  right.affine = AffineInverse{right_slope, (1 + ar) / 2};

  return IntervalMap("skewed_doubling", {std::move(left), std::move(right)}, 2.0 / (1.0 - std::abs(a)),
                     ExactSpectrumKind::skewed_doubling, a);
}

namespace detail {

// Principal arccos written through the logarithm:
// acos(w) = -i log(w + i sqrt(1 - w^2)).
inline complex_real acos_principal(complex_real w) {
  const complex_real i(0, 1);
  return -i * std::log(w + i * std::sqrt(real(1) - w * w));
}

}  // namespace detail

/// Largest |mu| for which the Blaschke inverse branches are known to extend
/// to a disk of radius > 1.
inline constexpr double blaschke_mu_limit = 0.3;

/// Symmetric nonlinear deformation of the doubling map (interval Blaschke map).
inline IntervalMap make_blaschke(double mu) {
  if (!(std::abs(mu) <= blaschke_mu_limit)) throw parameter_error("blaschke: |mu| must be <= 0.3");

  const real m = mu;
  auto correction = [m](real x) {
    const real pi = std::numbers::pi_v<real>;
    return (2 / pi) * std::atan(m * std::sin(pi * x) / (1 - m * std::cos(pi * x)));
  };
  auto derivative = [m](real x) {
    const real c = std::cos(std::numbers::pi_v<real> * x);
    return 2 + 2 * m * (c - m) / (1 - 2 * m * c + m * m);
  };

  std::vector<Branch> branches(2);
  for (int l = 1; l <= 2; ++l) {
    const real parity = (l % 2 == 0) ? 1 : -1;  // (-1)^l
    Branch& b = branches[static_cast<std::size_t>(l - 1)];
    b.domain_lo = (l == 1) ? -1.0 : 0.0;
    b.domain_hi = (l == 1) ? 0.0 : 1.0;
    const real shift = (l == 1) ? 1 : -1;
    b.forward = [correction, shift](real x) { return 2 * x + shift + correction(x); };
    b.forward_derivative = derivative;
    b.inverse = [m, parity](complex_real z) {
      const real pi = std::numbers::pi_v<real>;
      return z / real(2) + parity * detail::acos_principal(m * std::cos(pi * z / real(2))) / pi;
    };
    b.inverse_derivative = [m, parity](complex_real z) {
      const real pi = std::numbers::pi_v<real>;
      const complex_real w = m * std::cos(pi * z / real(2));
      return real(0.5) + parity * m * std::sin(pi * z / real(2)) / (real(2) * std::sqrt(real(1) - w * w));
    };
    b.sign = b.inverse_derivative(complex_real(0, 0)).real() >= 0 ? 1 : -1;
  }

  double sup = 0.0;
  constexpr int grid = 10000;
  for (const Branch& b : branches)
    for (int i = 0; i <= grid; ++i) {
      const real x = b.domain_lo + (b.domain_hi - b.domain_lo) * i / grid;
      sup = std::max(sup, static_cast<double>(std::abs(b.forward_derivative(x))));
    }

  return IntervalMap("blaschke", std::move(branches), 1.01 * sup, ExactSpectrumKind::blaschke, mu);
}

/// Samples every inverse branch on the circle |z| = radius and throws
/// branch_cut_error when adjacent samples jump by 0.5 or more (or go
/// non-finite), which signals that the continuation crossed a cut.
inline void check_branch_continuity(const IntervalMap& map, double radius, std::size_t samples = 720) {
  constexpr double jump_limit = 0.5;
  for (std::size_t l = 0; l < map.branch_count(); ++l) {
    const Branch& b = map.branches()[l];
    complex_real prev;
    for (std::size_t j = 0; j <= samples; ++j) {
      const real t = 2 * std::numbers::pi_v<real> * static_cast<real>(j % samples) / static_cast<real>(samples);
      const complex_real z = std::polar(static_cast<real>(radius), t);
      const complex_real v = b.inverse(z);
      const complex_real dv = b.inverse_derivative(z);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()) || !std::isfinite(dv.real()) ||
          !std::isfinite(dv.imag()))
        throw branch_cut_error(map.name() + ": inverse branch not finite on |z| = " + std::to_string(radius));
      if (j > 0 && std::abs(v - prev) >= jump_limit) {
        throw branch_cut_error(map.name() + ": inverse branch " + std::to_string(l + 1) +
                               " jumps on |z| = " + std::to_string(radius));
      }
      prev = v;
    }
  }
}

/// Leading part of the known transfer-operator spectrum, sorted by the
/// spectrum convention and truncated to n_max values.
inline Spectrum exact_spectrum(const IntervalMap& map, std::size_t n_max) {
  Spectrum out;
  switch (map.exact_spectrum_kind()) {
    case ExactSpectrumKind::skewed_doubling: {
      const double a = map.kind_parameter();
      for (std::size_t n = 0; n < n_max; ++n) {
        const double p = static_cast<double>(n + 1);
        out.values.emplace_back(std::pow((1.0 + a) / 2.0, p) + std::pow((1.0 - a) / 2.0, p), 0.0);
      }
      break;
    }
    case ExactSpectrumKind::blaschke: {
      const double mu = map.kind_parameter();
      if (n_max > 0) out.values.emplace_back(1.0, 0.0);
      for (std::size_t n = 1; n <= n_max; ++n) {
        const double p = static_cast<double>(n);
        const double doubled = std::pow(mu, p);
        out.values.emplace_back(doubled, 0.0);
        out.values.emplace_back(doubled, 0.0);
        out.values.emplace_back(std::pow((mu + 1.0) / 2.0, p), 0.0);
      }
      sort_spectrum(out.values);
      out.values.resize(std::min(out.values.size(), n_max));
      break;
    }
    case ExactSpectrumKind::none:
      throw unsupported_map_error(map.name() + ": no exact spectrum known");
  }
  out.eps_rank = static_cast<Index>(out.values.size());
  return out;
}

}  // namespace kedmd

#endif  // KEDMD_MAPS_HPP
