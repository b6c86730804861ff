#ifndef KEDMD_BENCH_ANALYSIS_HPP
#define KEDMD_BENCH_ANALYSIS_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kedmd/error.hpp"
#include "kedmd/spectral.hpp"

namespace kedmd::bench {

/// Errors Delta_n between the leading exact eigenvalues and their approximants.
struct SpectrumMatch {
  /// Greedy nearest pairing.
  std::vector<double> delta;
  /// Approximant paired with exact value n by the greedy pass.
  std::vector<cplx> matched;
  /// Pairing by rank in the modulus sort (index n with index n).
  std::vector<double> delta_rank;
};

/// For n = 0..k_max-1 pairs exact[n] with the unused approximant nearest to
/// it. Both inputs are expected in the spectrum sort order.
inline SpectrumMatch match_spectra(const Spectrum& approx, const Spectrum& exact, std::size_t k_max) {
  if (k_max > approx.size() || k_max > exact.size())
    throw parameter_error("match_spectra: k_max exceeds a spectrum length");
  SpectrumMatch out;
  std::vector<bool> used(approx.size(), false);
  for (std::size_t n = 0; n < k_max; ++n) {
    std::size_t best = approx.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < approx.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(approx[j] - exact[n]);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    used[best] = true;
    out.delta.push_back(best_dist);
    out.matched.push_back(approx[best]);
    out.delta_rank.push_back(std::abs(approx[n] - exact[n]));
  }
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw parameter_error("fit_line: size mismatch");
  if (x.size() < 2) throw parameter_error("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw parameter_error("fit_line: degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

enum class DecayMode {
  algebraic,   ///< log Delta against log M
  exponential  ///< log Delta against N
};

/// A (N, M, Delta) sample for decay fitting.
struct DecayPoint {
  double N = 0.0;
  double M = 0.0;
  double delta = 0.0;
};

/// Least-squares slope and intercept of log Delta against log M (algebraic)
/// or against N (exponential). Needs at least three points with Delta > 0.
inline LineFit fit_decay(const std::vector<DecayPoint>& points, DecayMode mode) {
  std::vector<double> x;
  std::vector<double> y;
  for (const auto& p : points) {
    if (!(p.delta > 0.0) || !std::isfinite(p.delta)) continue;
    const double abscissa = mode == DecayMode::algebraic ? std::log(p.M) : p.N;
    if (!std::isfinite(abscissa)) continue;
    x.push_back(abscissa);
    y.push_back(std::log(p.delta));
  }
  if (x.size() < 3) throw parameter_error("fit_decay: need at least three records with positive Delta");
  return fit_line(x, y);
}

}  // namespace kedmd::bench

#endif  // KEDMD_BENCH_ANALYSIS_HPP
