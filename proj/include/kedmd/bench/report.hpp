#ifndef KEDMD_BENCH_REPORT_HPP
#define KEDMD_BENCH_REPORT_HPP

///
/// \file report.hpp
///
/// Bound values next to the measured quantities they control, for one
/// (N, M) cell of a configuration.
///

#include <cmath>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kedmd/bench/config.hpp"
#include "kedmd/bench/sweep.hpp"
#include "kedmd/edmd.hpp"
#include "kedmd/transfer.hpp"

namespace kedmd::bench {

struct BoundsReport {
  Index N = 0;
  std::size_t M = 0;

  // Collocation (finite vs infinite nodes).
  double h_entry_worst_ratio = 0.0;  ///< max |dH_kl| / ((k+l)/M) over nonzero bounds
  double g_entry_worst_ratio = 0.0;  ///< max |dG_kl| / (factor (k+l+1)/M)
  double h_diff_norm = 0.0;
  double h_diff_schur = 0.0;
  double h_norm_bound = 0.0;
  double g_diff_norm = 0.0;
  double g_diff_schur = 0.0;
  double g_norm_bound = 0.0;

  // Gram matrix.
  double gram_norm = 0.0;           ///< ||H_N||_2, at most pi
  double gram_pinv_log_norm = 0.0;  ///< log ||H_N^+||_2 (diagnostic)
  bool finite_gram_cholesky = false;

  // Taylor truncation and rates; only with (r, R).
  std::optional<double> deriv_sum_sup;
  std::optional<double> projection_bound;  ///< at rho = sqrt(r R)
  std::optional<double> galerkin_rate;     ///< (gamma r / R)^(N/2), up to a constant
  std::optional<double> total_rate;        ///< finite-node rate, up to a constant
  std::optional<bool> convergence_regime;  ///< r / R < 1 / gamma
  std::optional<std::uint64_t> schedule_M; ///< ceil(N^2 R^N)
  std::string notes;
};

/// Bounds for the first N of the configuration and the first finite M
/// (1000 when the configuration only has infinite nodes).
inline BoundsReport compute_bounds(const SweepConfig& cfg) {
  const IntervalMap map = make_map(cfg.map);
  BoundsReport rep;
  rep.N = cfg.N.front();
  rep.M = 1000;
  for (const auto& m : cfg.nodes_for(rep.N))
    if (m) {
      rep.M = *m;
      break;
    }
  const ObservableBasis basis = cfg.make_basis(rep.N);
  const NodeSet nodes =
      cfg.node_rule == NodeRule::midpoint ? nodes_midpoint(rep.M) : nodes_equidistant(rep.M, cfg.delta);
  const EdmdPair fin = build_finite(map, basis, nodes);
  const EdmdPair inf = build_infinite(map, basis, cfg.quad_order);
  const CMatrix dh = inf.H - fin.H;
  const CMatrix dg = inf.G - fin.G;
  for (Index k = 0; k < rep.N; ++k)
    for (Index l = 0; l < rep.N; ++l) {
      const double hb = h_entry_bound(k, l, rep.M);
      if (hb > 0.0) rep.h_entry_worst_ratio = std::max(rep.h_entry_worst_ratio, static_cast<double>(std::abs(dh(k, l))) / hb);
      rep.g_entry_worst_ratio =
          std::max(rep.g_entry_worst_ratio, static_cast<double>(std::abs(dg(k, l))) / g_entry_bound(map, k, l, rep.M));
    }
  rep.h_diff_norm = spectral_norm(dh);
  rep.h_diff_schur = schur_bound(dh);
  rep.h_norm_bound = h_norm_bound(rep.N, rep.M);
  rep.g_diff_norm = spectral_norm(dg);
  rep.g_diff_schur = schur_bound(dg);
  rep.g_norm_bound = g_norm_bound(map, rep.N, rep.M);

  rep.gram_norm = spectral_norm(inf.H);
  rep.gram_pinv_log_norm = std::log(spectral_norm(pseudoinverse(inf.H, 0.0)));
  if (basis.kind == BasisKind::monomials) {
    Eigen::LLT<Matrix> llt(fin.H.real());
    rep.finite_gram_cholesky = llt.info() == Eigen::Success;
  } else {
    Eigen::LLT<CMatrix> llt(fin.H);
    rep.finite_gram_cholesky = llt.info() == Eigen::Success;
  }
  if (basis.kind == BasisKind::monomials && rep.M < static_cast<std::size_t>(rep.N))
    rep.notes += "M < N: finite-node Gram matrix is singular. ";

  if (const auto& e = map.expansion_params()) {
    rep.convergence_regime = in_convergence_regime(e->r, e->R);
    rep.galerkin_rate = edmd_galerkin_rate(e->r, e->R, rep.N);
    rep.total_rate = edmd_total_rate(e->r, e->R, rep.N, static_cast<double>(rep.M));
    try {
      rep.schedule_M = node_schedule(static_cast<std::size_t>(rep.N), e->R);
    } catch (const overflow_error&) {
      rep.notes += "node schedule overflows. ";
    }
    try {
      check_branch_continuity(map, e->R);
      rep.deriv_sum_sup = estimate_deriv_sum_sup(map, e->R);
      rep.projection_bound = projection_error_bound(e->r, e->R, balanced_rho(e->r, e->R), rep.N, *rep.deriv_sum_sup);
    } catch (const branch_cut_error& ex) {
      rep.notes += std::string("no Taylor bound: ") + ex.what() + ". ";
    }
  } else {
    rep.notes += "set r and R for Taylor-truncation bounds. ";
  }
  return rep;
}

inline void print_bounds(std::ostream& os, const BoundsReport& r) {
  auto line = [&](const std::string& name, const std::string& value) { os << name << " = " << value << '\n'; };
  line("N", std::to_string(r.N));
  line("M", std::to_string(r.M));
  line("collocation.H.entry_worst_ratio", format_real(r.h_entry_worst_ratio));
  line("collocation.G.entry_worst_ratio", format_real(r.g_entry_worst_ratio));
  line("collocation.H.norm", format_real(r.h_diff_norm));
  line("collocation.H.schur_bound", format_real(r.h_diff_schur));
  line("collocation.H.norm_bound", format_real(r.h_norm_bound));
  line("collocation.G.norm", format_real(r.g_diff_norm));
  line("collocation.G.schur_bound", format_real(r.g_diff_schur));
  line("collocation.G.norm_bound", format_real(r.g_norm_bound));
  line("gram.norm", format_real(r.gram_norm));
  line("gram.norm_limit", format_real(std::numbers::pi));
  line("gram.log_pinv_norm", format_real(r.gram_pinv_log_norm));
  line("gram.log_pinv_norm_reference_slope", format_real(2.0 * std::log(1.0 + std::numbers::sqrt2)));
  line("gram.finite_cholesky", r.finite_gram_cholesky ? "true" : "false");
  if (r.convergence_regime) line("regime.r_over_R_below_inverse_gamma", *r.convergence_regime ? "true" : "false");
  if (r.schedule_M) line("schedule.M_min", std::to_string(*r.schedule_M));
  if (r.deriv_sum_sup) line("taylor.deriv_sum_sup_estimate", format_real(*r.deriv_sum_sup));
  if (r.projection_bound) line("taylor.projection_bound", format_real(*r.projection_bound));
  if (r.galerkin_rate) line("rate.galerkin_up_to_constant", format_real(*r.galerkin_rate));
  if (r.total_rate) line("rate.total_up_to_constant", format_real(*r.total_rate));
  if (!r.notes.empty()) line("notes", r.notes);
}

}  // namespace kedmd::bench

#endif  // KEDMD_BENCH_REPORT_HPP
