#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kedmd.hpp"

using namespace kedmd;
using namespace kedmd::bench;

namespace {

Spectrum make_spectrum(std::vector<cplx> v) {
  Spectrum s;
  s.values = std::move(v);
  return s;
}

bool same_except_timing(SweepRecord a, SweepRecord b) {
  a.wall_ms = 0;
  b.wall_ms = 0;
  return a == b;
}

}  // namespace

TEST(MatchSpectra, GreedyAndRankPairing) {
  const Spectrum exact = make_spectrum({{1, 0}, {0.5, 0}, {0.45, 0}});
  const Spectrum approx = make_spectrum({{1.001, 0}, {0.449, 0}, {0.3, 0}});
  const SpectrumMatch m = match_spectra(approx, exact, 3);
  EXPECT_NEAR(m.delta[0], 0.001, 1e-15);
  // 0.5 takes 0.449 first, leaving 0.3 for 0.45.
  EXPECT_NEAR(m.delta[1], 0.051, 1e-15);
  EXPECT_NEAR(m.delta[2], 0.15, 1e-15);
  EXPECT_EQ(m.matched[1], cplx(0.449, 0));
  EXPECT_NEAR(m.delta_rank[1], 0.051, 1e-15);
  EXPECT_NEAR(m.delta_rank[2], 0.15, 1e-15);
  EXPECT_THROW(match_spectra(approx, exact, 4), parameter_error);
}

TEST(MatchSpectra, ComplexPairsMatchConjugates) {
  const Spectrum exact = make_spectrum({{0, 0.5}, {0, -0.5}});
  const Spectrum approx = make_spectrum({{0.01, -0.5}, {0.01, 0.5}});
  const SpectrumMatch m = match_spectra(approx, exact, 2);
  EXPECT_NEAR(m.delta[0], 0.01, 1e-15);
  EXPECT_NEAR(m.delta[1], 0.01, 1e-15);
  EXPECT_NEAR(m.delta_rank[0], std::hypot(0.01, 1.0), 1e-15);
}

TEST(FitDecay, SyntheticData) {
  std::vector<DecayPoint> algebraic;
  for (double m : {100.0, 1000.0, 10000.0, 1e5}) algebraic.push_back({5, m, 3.0 * std::pow(m, -2.0)});
  const LineFit a = fit_decay(algebraic, DecayMode::algebraic);
  EXPECT_NEAR(a.slope, -2.0, 1e-12);
  EXPECT_NEAR(a.intercept, std::log(3.0), 1e-10);

  std::vector<DecayPoint> exponential;
  for (int n = 3; n <= 10; ++n) exponential.push_back({static_cast<double>(n), 0, std::exp(-0.7 * n + 1.0)});
  EXPECT_NEAR(fit_decay(exponential, DecayMode::exponential).slope, -0.7, 1e-12);
}

TEST(FitDecay, InsufficientData) {
  std::vector<DecayPoint> pts = {{1, 10, 0.1}, {1, 100, 0.0}, {1, 1000, std::nan("")}, {1, 1e4, 1e-4}};
  EXPECT_THROW(fit_decay(pts, DecayMode::algebraic), parameter_error);
  EXPECT_THROW(fit_line({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), parameter_error);
  EXPECT_THROW(fit_line({1.0}, {1.0}), parameter_error);
}

TEST(Config, ParsesFullExample) {
  const SweepConfig cfg = parse_config_string(
      "# sample\n"
      "map = skewed_doubling\n"
      "a = 0.5\n"
      "basis = monomials\n"
      "N = 4, 6\n"
      "M = 100, 1e3, inf\n"
      "node_rule = offset\n"
      "delta = 0.001\n"
      "eps_pinv = 1e-10\n"
      "quad_order = 32\n"
      "n = 1, 2\n"
      "out = result.csv   # trailing comment\n"
      "threads = 2\n");
  EXPECT_EQ(cfg.map.kind, "skewed_doubling");
  EXPECT_DOUBLE_EQ(cfg.map.parameter, 0.5);
  EXPECT_EQ(cfg.N, (std::vector<Index>{4, 6}));
  ASSERT_EQ(cfg.M.size(), 3u);
  EXPECT_EQ(cfg.M[1], std::optional<std::size_t>(1000));
  EXPECT_FALSE(cfg.M[2].has_value());
  EXPECT_EQ(cfg.node_rule, NodeRule::offset);
  EXPECT_DOUBLE_EQ(cfg.delta, 0.001);
  EXPECT_DOUBLE_EQ(cfg.eps_pinv, 1e-10);
  EXPECT_EQ(cfg.quad_order, 32u);
  EXPECT_EQ(cfg.eigen_indices, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(cfg.out, "result.csv");
  EXPECT_EQ(cfg.threads, 2u);
  EXPECT_EQ(sweep_cells(cfg).size(), 6u);
}

TEST(Config, Defaults) {
  const SweepConfig cfg = parse_config_string("map = blaschke\nmu = 0.2\nN = 3\n");
  EXPECT_EQ(cfg.M.size(), 1u);
  EXPECT_FALSE(cfg.M[0].has_value());
  EXPECT_EQ(cfg.eigen_indices, (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_EQ(cfg.node_rule, NodeRule::midpoint);
  EXPECT_EQ(cfg.quad_order, default_quad_order);
  EXPECT_DOUBLE_EQ(cfg.eps_pinv, default_eps_pinv);
}

TEST(Config, Schedules) {
  const SweepConfig c1 = parse_config_string("map = skewed_doubling\nN = 3, 4\nschedule = corollary1(2)\n");
  EXPECT_EQ(c1.nodes_for(3), (std::vector<std::optional<std::size_t>>{72}));
  EXPECT_EQ(c1.nodes_for(4), (std::vector<std::optional<std::size_t>>{256}));
  const SweepConfig q = parse_config_string("map = skewed_doubling\nN = 3\nschedule = quadratic(10)\n");
  EXPECT_EQ(q.nodes_for(3), (std::vector<std::optional<std::size_t>>{90}));
}

TEST(Config, Errors) {
  const std::vector<std::string> bad = {
      "N = 3\n",                                              // no map
      "map = tent\nN = 3\n",                                  // unknown map
      "map = skewed_doubling\n",                              // no N
      "map = skewed_doubling\nN = 3\ncolour = red\n",         // unknown key
      "map = skewed_doubling\nmu = 0.1\nN = 3\n",             // wrong parameter
      "map = blaschke\nmu = 0.5\nN = 3\n",                    // out of range
      "map = skewed_doubling\na = 1\nN = 3\n",                // out of range
      "map = skewed_doubling\nbasis = fourier\nN = 4\n",      // even Fourier size
      "map = skewed_doubling\nN = 3\nM = 10\nschedule = corollary1(2)\n",
      "map = skewed_doubling\nN = 3\nschedule = corollary1(1)\n",
      "map = skewed_doubling\nN = 3\nschedule = cubic(2)\n",
      "map = skewed_doubling\nN = 3\nnode_rule = offset\n",  // offset needs delta
      "map = skewed_doubling\nN = 3\nnode_rule = midpoint\ndelta = 0.1\n",
      "map = skewed_doubling\nN = 3\nn = 3\n",                // index >= N
      "map = skewed_doubling\nN = 3, x\n",
      "map = skewed_doubling\nN = 3\nN = 4\n",                // duplicate
      "map = skewed_doubling\nN 3\n",                         // no '='
      "map = skewed_doubling\nN = 3\nr = 2\n",                // R missing
      "map = skewed_doubling\nN = 3\nr = 3\nR = 2\n",         // r > R
      "map = skewed_doubling\nN = 3\nM = 0\n",
      "map = skewed_doubling\nN = 3\nconjugate = maybe\n",
  };
  for (const auto& text : bad) EXPECT_THROW(parse_config_string(text), config_error) << text;
  EXPECT_THROW(load_config("/nonexistent/path.conf"), config_error);
}

TEST(Sweep, SingleBasisFunction) {
  const SweepConfig cfg = parse_config_string("map = blaschke\nmu = 0.3\nN = 1\nM = 37\n");
  const auto records = run_sweep(cfg);
  ASSERT_EQ(records.size(), 1u);
  const auto pair = build_finite(make_blaschke(0.3), ObservableBasis::monomials(1), nodes_midpoint(37));
  EXPECT_NEAR(records[0].delta, std::abs(1.0 - static_cast<double>(pair.G(0, 0).real())), 1e-15);
  EXPECT_TRUE(records[0].ok());
  EXPECT_EQ(records[0].eps_rank, 1);
}

TEST(Sweep, ExactForAffineInfiniteNodes) {
  const SweepConfig cfg = parse_config_string("map = skewed_doubling\na = 0.4\nN = 6, 8\nn = 0, 1, 2, 3\n");
  for (const auto& r : run_sweep(cfg)) {
    EXPECT_TRUE(r.ok());
    EXPECT_LT(r.delta, 1e-12) << r.N << " " << r.n;
  }
}

TEST(Sweep, CsvRoundTrip) {
  const SweepConfig cfg =
      parse_config_string("map = skewed_doubling\na = 0.3\nN = 3, 5\nM = 50, inf\nn = 1, 2\n");
  const auto records = run_sweep(cfg);
  std::stringstream ss;
  write_csv(ss, records);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')), sweep_csv_header);
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_TRUE(back[i] == records[i]) << i;

  std::stringstream bad_header("N,M\n");
  EXPECT_THROW(read_csv(bad_header), config_error);
  std::stringstream bad_row(std::string(sweep_csv_header) + "\n1,2,3\n");
  EXPECT_THROW(read_csv(bad_row), config_error);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
  const SweepConfig cfg =
      parse_config_string("map = blaschke\nmu = 0.3\nN = 4, 6, 8\nM = 100, 1000, inf\nn = 1, 2\n");
  const auto one = run_sweep(cfg, 1);
  const auto four = run_sweep(cfg, 4);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_TRUE(same_except_timing(one[i], four[i])) << i;
}

TEST(Sweep, FailedCellsAreReported) {
  const SweepConfig cfg = parse_config_string("map = blaschke\nmu = 0.3\nN = 3, 20\nquad_order = 2\nn = 1\n");
  const auto records = run_sweep(cfg);
  ASSERT_EQ(records.size(), 2u);
  EXPECT_TRUE(any_failed(records));
  EXPECT_FALSE(records[1].ok());
  EXPECT_EQ(records[1].status.rfind("failed: ", 0), 0u);
  EXPECT_EQ(records[1].status.find(','), std::string::npos);
  EXPECT_TRUE(std::isnan(records[1].delta));
  // A failed row still survives the CSV round trip.
  std::stringstream ss;
  write_csv(ss, records);
  EXPECT_EQ(read_csv(ss)[1].status, records[1].status);
}

TEST(Sweep, AlgebraicDecayRates) {
  // Midpoint nodes converge like M^-2 once the Blaschke discontinuity at 0
  // sits on a cell boundary (even M). Left endpoints put a node on the jump
  // and carry a much larger error at every M.
  const SweepConfig mid =
      parse_config_string("map = blaschke\nmu = 0.3\nN = 15\nM = 1000, 2000, 4000, 8000\nn = 1\n");
  const auto mid_records = run_sweep(mid);
  EXPECT_NEAR(fit_decay(mid_records, 1, DecayMode::algebraic).slope, -2.0, 0.2);
  const SweepConfig left =
      parse_config_string("map = blaschke\nmu = 0.3\nN = 15\nM = 1000, 2000, 4000, 8000\ndelta = 0\nn = 1\n");
  const auto left_records = run_sweep(left);
  ASSERT_EQ(left_records.size(), mid_records.size());
  for (std::size_t i = 0; i < mid_records.size(); ++i) EXPECT_GT(left_records[i].delta, 10 * mid_records[i].delta);
}

TEST(Sweep, DoublingMTenfoldReducesError) {
  const SweepConfig cfg = parse_config_string("map = blaschke\nmu = 0.3\nN = 8\nM = 300, 3000\nn = 1\n");
  const auto r = run_sweep(cfg);
  EXPECT_LT(r[1].delta, r[0].delta / 10);
}

TEST(Figures, LogSpacedNodes) {
  const auto m = log_spaced_nodes(2, 3, 2);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_EQ(*m[0], 100u);
  EXPECT_EQ(*m[1], 316u);
  EXPECT_EQ(*m[2], 1000u);
  EXPECT_EQ(figure_names().size(), 7u);
  EXPECT_THROW(figure_config("fig9"), config_error);
  EXPECT_EQ(figure_config("fig2.2").N.front(), 6);
}

TEST(Figures, FourierRadiusStudy) {
  // For the doubling map G is nilpotent apart from the constant mode. The
  // chain 1 -> 2 -> 4 -> 8 is a Jordan block of size 4, so round-off moves
  // its eigenvalues by about eps^(1/4).
  const auto zero = fourier_radius_study({0.0}, {21});
  EXPECT_LT(zero[0].abs_lambda1, 1e-3);
  EXPECT_DOUBLE_EQ(zero[0].ess_radius, 0.5);

  const auto skew = fourier_radius_study({0.6}, {41});
  EXPECT_DOUBLE_EQ(skew[0].ess_radius, 0.8);
  EXPECT_GT(skew[0].abs_lambda1, 0.6);
  EXPECT_LT(skew[0].abs_lambda1, 0.8);
  EXPECT_NEAR(skew[0].log_product, std::log(skew[0].abs_lambda1) * std::log(41.0), 1e-14);

  std::stringstream ss;
  write_radius_csv(ss, skew);
  EXPECT_EQ(ss.str().substr(0, 5), "a,N,a");
}

TEST(Figures, EigenvalueCloud) {
  const auto pts = eigenvalue_cloud(make_skewed_doubling(0.5), BasisKind::monomials, {{4, 500}}, 3);
  ASSERT_EQ(pts.size(), 7u);
  EXPECT_EQ(pts[0].series, "edmd");
  EXPECT_EQ(pts[4].series, "exact");
  EXPECT_NEAR(std::abs(pts[0].value - cplx(1, 0)), 0.0, 1e-12);
}

TEST(Bounds, ComputeBoundsWithinTheory) {
  const SweepConfig cfg = parse_config_string("map = skewed_doubling\na = 0.5\nN = 6\nM = 400\n");
  const BoundsReport rep = compute_bounds(cfg);
  EXPECT_EQ(rep.N, 6);
  EXPECT_EQ(rep.M, 400u);
  EXPECT_LE(rep.h_entry_worst_ratio, 1.0);
  EXPECT_LE(rep.g_entry_worst_ratio, 1.0);
  EXPECT_LE(rep.h_diff_norm, rep.h_diff_schur * (1 + 1e-12));
  EXPECT_LE(rep.h_diff_schur, rep.h_norm_bound);
  EXPECT_LE(rep.g_diff_norm, rep.g_norm_bound);
  EXPECT_LT(rep.gram_norm, std::numbers::pi);
  EXPECT_TRUE(rep.finite_gram_cholesky);
  EXPECT_FALSE(rep.convergence_regime.has_value());
  EXPECT_NE(rep.notes.find("set r and R"), std::string::npos);
}

TEST(Bounds, ExpansionParametersEnableTaylorBounds) {
  const SweepConfig cfg = parse_config_string("map = skewed_doubling\nN = 5\nr = 6\nR = 10\n");
  const BoundsReport rep = compute_bounds(cfg);
  EXPECT_EQ(rep.M, 1000u);
  ASSERT_TRUE(rep.convergence_regime.has_value());
  EXPECT_FALSE(*rep.convergence_regime);
  ASSERT_TRUE(rep.projection_bound.has_value());
  EXPECT_NEAR(*rep.deriv_sum_sup, 1.05, 1e-12);
  EXPECT_EQ(rep.schedule_M, std::optional<std::uint64_t>(2500000));

  const SweepConfig cut = parse_config_string("map = blaschke\nmu = 0.3\nN = 4\nr = 1.1\nR = 1.5\n");
  const BoundsReport cut_rep = compute_bounds(cut);
  EXPECT_FALSE(cut_rep.projection_bound.has_value());
  EXPECT_NE(cut_rep.notes.find("no Taylor bound"), std::string::npos);
}
