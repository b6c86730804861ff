#ifndef KEDMD_BENCH_FIGURES_HPP
#define KEDMD_BENCH_FIGURES_HPP

///
/// \file figures.hpp
///
/// Built-in experiment recipes. Each writes one CSV:
///
///   fig1.1L  eigenvalue clouds, Fourier modes, skewed doubling a = 1/sqrt 2
///   fig1.1R  eigenvalue clouds, monomials, same map, plus the exact values
///   fig2.1   Delta_1, Delta_2 against M, skewed doubling, N = 5, 6
///   fig2.2   Delta_1..5 against N, Blaschke mu = 0.3, infinite nodes
///   fig2.3   Delta_1..5 against M, Blaschke mu = 0.3, N = 15
///   fig2.4   Delta_1, Delta_2 over an (N, M) grid, Blaschke mu = 0.3
///   fig2.5   |lambda_1| of Fourier EDMD against the skew a
///
/// Cloud files have columns series,N,M,k,re,im; fig2.5 has
/// a,N,abs_lambda1,ess_radius,log_product; the rest use the sweep format.
///

#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "kedmd/bench/config.hpp"
#include "kedmd/bench/sweep.hpp"
#include "kedmd/edmd.hpp"
#include "kedmd/maps.hpp"
#include "kedmd/observables.hpp"

namespace kedmd::bench {

inline const std::vector<std::string>& figure_names() {
  static const std::vector<std::string> names = {"fig1.1L", "fig1.1R", "fig2.1", "fig2.2",
                                                 "fig2.3",  "fig2.4",  "fig2.5"};
  return names;
}

/// 10^(lo + i/per_decade) for i = 0..(hi-lo)*per_decade, rounded to the
/// nearest even count so that midpoint nodes never land on x = 0.
inline std::vector<std::optional<std::size_t>> log_spaced_nodes(int lo_decade, int hi_decade, int per_decade) {
  std::vector<std::optional<std::size_t>> out;
  for (int i = 0; i <= (hi_decade - lo_decade) * per_decade; ++i)
    out.emplace_back(static_cast<std::size_t>(
        2 * std::llround(std::pow(10.0, lo_decade + static_cast<double>(i) / per_decade) / 2)));
  return out;
}

struct RadiusRecord {
  double a = 0.0;
  Index N = 0;
  double abs_lambda1 = 0.0;
  /// (1 + |a|) / 2
  double ess_radius = 0.0;
  /// ln|lambda_1| ln N
  double log_product = 0.0;
};

/// Modulus of the subleading eigenvalue of the closed-form infinite-node
/// Fourier EDMD matrix (H = identity) for each (a, N).
inline std::vector<RadiusRecord> fourier_radius_study(const std::vector<double>& a_list,
                                                      const std::vector<Index>& n_list) {
  std::vector<RadiusRecord> out;
  for (const double a : a_list)
    for (const Index n : n_list) {
      const IntervalMap map = make_skewed_doubling(a);
      const EdmdPair pair = build_infinite(map, ObservableBasis::fourier(n));
      const Spectrum spec = edmd_spectrum(pair, 0.0);
      RadiusRecord r;
      r.a = a;
      r.N = n;
      r.abs_lambda1 = spec.size() > 1 ? std::abs(spec[1]) : 0.0;
      r.ess_radius = (1.0 + std::abs(a)) / 2.0;
      r.log_product = std::log(r.abs_lambda1) * std::log(static_cast<double>(n));
      out.push_back(r);
    }
  return out;
}

inline void write_radius_csv(std::ostream& os, const std::vector<RadiusRecord>& records) {
  os << "a,N,abs_lambda1,ess_radius,log_product\n";
  for (const auto& r : records)
    os << format_real(r.a) << ',' << r.N << ',' << format_real(r.abs_lambda1) << ',' << format_real(r.ess_radius)
       << ',' << format_real(r.log_product) << '\n';
}

struct CloudPoint {
  std::string series;  ///< "edmd" or "exact"
  Index N = 0;
  std::optional<std::size_t> M;
  std::size_t k = 0;
  cplx value;
};

inline void write_cloud_csv(std::ostream& os, const std::vector<CloudPoint>& points) {
  os << "series,N,M,k,re,im\n";
  for (const auto& p : points)
    os << p.series << ',' << p.N << ',' << (p.M ? std::to_string(*p.M) : std::string("inf")) << ',' << p.k << ','
       << format_real(p.value.real()) << ',' << format_real(p.value.imag()) << '\n';
}

/// Full EDMD spectra for finite-node cells, plus the first `exact_count`
/// exact eigenvalues when the map has them.
inline std::vector<CloudPoint> eigenvalue_cloud(const IntervalMap& map, BasisKind basis,
                                                const std::vector<std::pair<Index, std::size_t>>& cells,
                                                std::size_t exact_count, double eps = default_eps_pinv) {
  std::vector<CloudPoint> out;
  for (const auto& [n, m] : cells) {
    const ObservableBasis b = basis == BasisKind::monomials ? ObservableBasis::monomials(n) : ObservableBasis::fourier(n);
    const Spectrum spec = edmd_spectrum(build_finite(map, b, nodes_midpoint(m)), eps);
    for (std::size_t k = 0; k < spec.size(); ++k) out.push_back({"edmd", n, m, k, spec[k]});
  }
  if (exact_count > 0 && map.exact_spectrum_kind() != ExactSpectrumKind::none) {
    const Spectrum ex = exact_spectrum(map, exact_count);
    for (std::size_t k = 0; k < ex.size(); ++k) out.push_back({"exact", 0, std::nullopt, k, ex[k]});
  }
  return out;
}

/// Sweep configuration behind the sweep-format figures.
inline SweepConfig figure_config(const std::string& name) {
  SweepConfig cfg;
  if (name == "fig2.1") {
    cfg.map = {"skewed_doubling", 1.0 / std::numbers::sqrt2, std::nullopt};
    cfg.N = {5, 6};
    cfg.M = log_spaced_nodes(2, 5, 4);
    cfg.eigen_indices = {1, 2};
  } else if (name == "fig2.2") {
    cfg.map = {"blaschke", 0.3, std::nullopt};
    for (Index n = 6; n <= 25; ++n) cfg.N.push_back(n);  // five nontrivial indices need N >= 6
    cfg.M = {std::nullopt};
    cfg.eigen_indices = {1, 2, 3, 4, 5};
  } else if (name == "fig2.3") {
    cfg.map = {"blaschke", 0.3, std::nullopt};
    cfg.N = {15};
    cfg.M = log_spaced_nodes(2, 5, 4);
    cfg.eigen_indices = {1, 2, 3, 4, 5};
  } else if (name == "fig2.4") {
    cfg.map = {"blaschke", 0.3, std::nullopt};
    for (Index n = 3; n <= 20; ++n) cfg.N.push_back(n);
    cfg.M = log_spaced_nodes(2, 5, 3);
    cfg.eigen_indices = {1, 2};
  } else {
    throw config_error("no sweep recipe for figure '" + name + "'");
  }
  return cfg;
}

/// Runs a built-in recipe and writes its CSV. Returns false when some sweep
/// cells failed (the file is still complete).
inline bool run_figure(const std::string& name, std::ostream& os, unsigned threads = 1) {
  const double a = 1.0 / std::numbers::sqrt2;
  if (name == "fig1.1L") {
    // Fourier bases need odd N; 51 modes stand in for 50.
    write_cloud_csv(os, eigenvalue_cloud(make_skewed_doubling(a), BasisKind::fourier, {{51, 10000}, {21, 5000}}, 0));
    return true;
  }
  if (name == "fig1.1R") {
    write_cloud_csv(os, eigenvalue_cloud(make_skewed_doubling(a), BasisKind::monomials, {{5, 10000}, {10, 10000}}, 5));
    return true;
  }
  if (name == "fig2.5") {
    std::vector<double> skews;
    for (int i = 1; i <= 19; ++i) skews.push_back(0.05 * i);
    auto records = fourier_radius_study(skews, {21, 41, 81});
    const auto inset = fourier_radius_study({1e-16}, {9, 17, 33, 65, 129});
    records.insert(records.end(), inset.begin(), inset.end());
    write_radius_csv(os, records);
    return true;
  }
  const auto records = run_sweep(figure_config(name), threads);
  write_csv(os, records);
  return !any_failed(records);
}

}  // namespace kedmd::bench

#endif  // KEDMD_BENCH_FIGURES_HPP
