// Command-line front end: spectrum, sweep, figure, bounds.
//
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 sweep finished with failed cells.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kedmd.hpp"

namespace {

using namespace kedmd;
using namespace kedmd::bench;

enum ExitCode { exit_ok = 0, exit_config = 1, exit_numerical = 2, exit_partial = 3 };

struct Overrides {
  std::optional<double> eps;
  std::optional<std::size_t> quad_order;
  std::optional<unsigned> threads;

  void apply(SweepConfig& cfg) const {
    if (eps) {
      if (*eps < 0.0) throw config_error("--eps must be >= 0");
      cfg.eps_pinv = *eps;
    }
    if (quad_order) {
      if (*quad_order < 1) throw config_error("--quad-order must be >= 1");
      cfg.quad_order = *quad_order;
    }
    if (threads) cfg.threads = std::max(1u, *threads);
  }
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "% .15e", v);
  return buf;
}

int cmd_spectrum(const std::string& path, const Overrides& ov) {
  SweepConfig cfg = load_config(path);
  ov.apply(cfg);
  const IntervalMap map = make_map(cfg.map);
  const SweepCell cell{cfg.N.front(), cfg.nodes_for(cfg.N.front()).front()};
  const EdmdPair pair = build_cell_pair(cfg, map, cell);
  const Spectrum spec = edmd_spectrum(pair, cfg.eps_pinv);

  std::cout << "map " << map.name() << " parameter " << map.kind_parameter() << "\n"
            << "basis " << to_string(cfg.basis) << " N " << cell.N << " M "
            << (cell.M ? std::to_string(*cell.M) : std::string("inf")) << " (" << to_string(pair.provenance) << ")\n"
            << "eps_pinv " << cfg.eps_pinv << " retained rank " << spec.eps_rank << "\n";
  if (spec.rank_deficient) std::cout << "warning: epsilon truncation removed singular directions\n";
  std::cout << "\nEDMD spectrum (descending modulus)\n";
  for (std::size_t k = 0; k < spec.size(); ++k)
    std::cout << k << "  " << fmt(spec[k].real()) << "  " << fmt(spec[k].imag()) << "  |" << fmt(std::abs(spec[k]))
              << "|\n";

  if (map.exact_spectrum_kind() != ExactSpectrumKind::none) {
    const std::size_t k_max = spec.size();
    const Spectrum exact = exact_spectrum(map, k_max);
    const SpectrumMatch match = match_spectra(spec, exact, k_max);
    std::cout << "\nn  exact  matched_re  matched_im  delta  delta_rank_paired\n";
    for (std::size_t n = 0; n < k_max; ++n)
      std::cout << n << "  " << fmt(exact[n].real()) << "  " << fmt(match.matched[n].real()) << "  "
                << fmt(match.matched[n].imag()) << "  " << fmt(match.delta[n]) << "  " << fmt(match.delta_rank[n])
                << "\n";
  }
  return exit_ok;
}

int cmd_sweep(const std::string& path, const std::string& out, const Overrides& ov) {
  SweepConfig cfg = load_config(path);
  ov.apply(cfg);
  const std::string target = out.empty() ? cfg.out : out;
  if (target.empty()) throw config_error("sweep: no output path (use --out or 'out =')");
  const auto records = run_sweep(cfg, cfg.threads);
  write_csv(target, records);
  const bool failed = any_failed(records);
  std::cerr << records.size() << " rows written to " << target << (failed ? " (some cells failed)" : "") << "\n";
  return failed ? exit_partial : exit_ok;
}

int cmd_figure(const std::string& name, const std::string& out, const Overrides& ov) {
  std::ofstream os(out);
  if (!os) throw config_error("cannot open output file '" + out + "'");
  const bool complete = run_figure(name, os, ov.threads.value_or(1));
  std::cerr << name << " written to " << out << (complete ? "" : " (some cells failed)") << "\n";
  return complete ? exit_ok : exit_partial;
}

int cmd_bounds(const std::string& path, const Overrides& ov) {
  SweepConfig cfg = load_config(path);
  ov.apply(cfg);
  print_bounds(std::cout, compute_bounds(cfg));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EDMD spectra of analytic full-branch interval maps"};
  app.require_subcommand(1);
  app.fallthrough();

  Overrides ov;
  double eps = 0.0;
  std::size_t quad = 0;
  unsigned threads = 1;
  auto* eps_opt = app.add_option("--eps", eps, "Relative cut of the epsilon-pseudoinverse");
  auto* quad_opt = app.add_option("--quad-order", quad, "Gauss-Legendre nodes per branch");
  auto* thr_opt = app.add_option("--threads", threads, "Worker threads (speed only)");

  std::string config;
  std::string out;
  std::string figure;

  auto* spectrum = app.add_subcommand("spectrum", "Print the EDMD spectrum and its errors");
  spectrum->add_option("--config", config, "Experiment file")->required();

  auto* sweep = app.add_subcommand("sweep", "Run an (N, M) grid and write CSV");
  sweep->add_option("--config", config, "Experiment file")->required();
  sweep->add_option("--out", out, "CSV output path");

  auto* fig = app.add_subcommand("figure", "Reproduce a built-in figure recipe");
  fig->add_option("--name", figure, "Figure name")->required()->check(CLI::IsMember(figure_names()));
  fig->add_option("--out", out, "CSV output path")->required();

  auto* bounds = app.add_subcommand("bounds", "Print bound values beside measured quantities");
  bounds->add_option("--config", config, "Experiment file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }
  if (*eps_opt) ov.eps = eps;
  if (*quad_opt) ov.quad_order = quad;
  if (*thr_opt) ov.threads = threads;

  try {
    if (*spectrum) return cmd_spectrum(config, ov);
    if (*sweep) return cmd_sweep(config, out, ov);
    if (*fig) return cmd_figure(figure, out, ov);
    if (*bounds) return cmd_bounds(config, ov);
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const parameter_error& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return exit_config;
  } catch (const error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return exit_numerical;
  }
  return exit_ok;
}
