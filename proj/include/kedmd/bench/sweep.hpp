#ifndef KEDMD_BENCH_SWEEP_HPP
#define KEDMD_BENCH_SWEEP_HPP

///
/// \file sweep.hpp
///
/// Grid evaluation over (N, M) and the CSV record format
///
///   N,M,n,re_approx,im_approx,re_exact,im_exact,delta,delta_rank_paired,eps_rank,wall_ms,status
///
/// M is the literal `inf` for infinite-node cells. Reals are written with 17
/// significant digits so that reading a file back reproduces the records.
/// Rows come out in grid order (N outer, M inner, eigen index innermost)
/// whatever the number of worker threads.
///

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kedmd/bench/analysis.hpp"
#include "kedmd/bench/config.hpp"
#include "kedmd/edmd.hpp"
#include "kedmd/maps.hpp"

namespace kedmd::bench {

struct SweepRecord {
  Index N = 0;
  std::optional<std::size_t> M;  ///< nullopt: infinite nodes
  std::size_t n = 0;
  cplx approx{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  cplx exact{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double delta = std::numeric_limits<double>::quiet_NaN();
  double delta_rank = std::numeric_limits<double>::quiet_NaN();
  Index eps_rank = 0;
  long long wall_ms = 0;
  std::string status = "ok";

  bool ok() const { return status == "ok"; }
};

inline bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

/// Field-by-field equality treating NaN as equal to NaN.
inline bool operator==(const SweepRecord& a, const SweepRecord& b) {
  return a.N == b.N && a.M == b.M && a.n == b.n && same_value(a.approx.real(), b.approx.real()) &&
         same_value(a.approx.imag(), b.approx.imag()) && same_value(a.exact.real(), b.exact.real()) &&
         same_value(a.exact.imag(), b.exact.imag()) && same_value(a.delta, b.delta) &&
         same_value(a.delta_rank, b.delta_rank) && a.eps_rank == b.eps_rank && a.wall_ms == b.wall_ms &&
         a.status == b.status;
}

/// One (N, M) grid cell.
struct SweepCell {
  Index N = 0;
  std::optional<std::size_t> M;
};

inline std::vector<SweepCell> sweep_cells(const SweepConfig& cfg) {
  std::vector<SweepCell> cells;
  for (const Index n : cfg.N)
    for (const auto& m : cfg.nodes_for(n)) cells.push_back({n, m});
  return cells;
}

/// EDMD pair for one cell of the configuration.
inline EdmdPair build_cell_pair(const SweepConfig& cfg, const IntervalMap& map, const SweepCell& cell) {
  const ObservableBasis basis = cfg.make_basis(cell.N);
  if (!cell.M) return build_infinite(map, basis, cfg.quad_order);
  const NodeSet nodes =
      cfg.node_rule == NodeRule::midpoint ? nodes_midpoint(*cell.M) : nodes_equidistant(*cell.M, cfg.delta);
  return build_finite(map, basis, nodes);
}

namespace detail {

inline std::string sanitize_status(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

inline std::vector<SweepRecord> evaluate_cell(const SweepConfig& cfg, const IntervalMap& map, const SweepCell& cell) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<SweepRecord> rows;
  const std::size_t k_max = cfg.max_eigen_index() + 1;
  auto stamp = [&](std::vector<SweepRecord>& out) {
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
    for (auto& r : out) r.wall_ms = ms.count();
  };
  try {
    const EdmdPair pair = build_cell_pair(cfg, map, cell);
    const Spectrum approx = edmd_spectrum(pair, cfg.eps_pinv);
    std::optional<SpectrumMatch> match;
    std::optional<Spectrum> exact;
    if (map.exact_spectrum_kind() != ExactSpectrumKind::none) {
      exact = exact_spectrum(map, k_max);
      match = match_spectra(approx, *exact, k_max);
    }
    for (const std::size_t n : cfg.eigen_indices) {
      SweepRecord r;
      r.N = cell.N;
      r.M = cell.M;
      r.n = n;
      r.eps_rank = approx.eps_rank;
      if (match) {
        r.approx = match->matched[n];
        r.exact = (*exact)[n];
        r.delta = match->delta[n];
        r.delta_rank = match->delta_rank[n];
      } else {
        r.approx = approx[n];
      }
      rows.push_back(r);
    }
  } catch (const error& e) {
    rows.clear();
    for (const std::size_t n : cfg.eigen_indices) {
      SweepRecord r;
      r.N = cell.N;
      r.M = cell.M;
      r.n = n;
      r.status = sanitize_status(std::string("failed: ") + e.what());
      rows.push_back(r);
    }
  }
  stamp(rows);
  return rows;
}

}  // namespace detail

/// Evaluates every cell of the grid. Failing cells yield rows with a
/// non-"ok" status instead of aborting. `threads` only affects speed.
inline std::vector<SweepRecord> run_sweep(const SweepConfig& cfg, unsigned threads = 1) {
  const IntervalMap map = make_map(cfg.map);
  const std::vector<SweepCell> cells = sweep_cells(cfg);
  std::vector<std::vector<SweepRecord>> results(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) results[i] = detail::evaluate_cell(cfg, map, cells[i]);
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
  }

  std::vector<SweepRecord> out;
  for (auto& block : results) out.insert(out.end(), block.begin(), block.end());
  return out;
}

inline bool any_failed(const std::vector<SweepRecord>& records) {
  return std::any_of(records.begin(), records.end(), [](const SweepRecord& r) { return !r.ok(); });
}

/// Decay points for eigen index n, skipping failed rows; infinite-node rows
/// get M = +inf.
inline std::vector<DecayPoint> decay_points(const std::vector<SweepRecord>& records, std::size_t n) {
  std::vector<DecayPoint> out;
  for (const auto& r : records)
    if (r.ok() && r.n == n)
      out.push_back({static_cast<double>(r.N),
                     r.M ? static_cast<double>(*r.M) : std::numeric_limits<double>::infinity(), r.delta});
  return out;
}

inline LineFit fit_decay(const std::vector<SweepRecord>& records, std::size_t n, DecayMode mode) {
  return fit_decay(decay_points(records, n), mode);
}

inline constexpr const char* sweep_csv_header =
    "N,M,n,re_approx,im_approx,re_exact,im_exact,delta,delta_rank_paired,eps_rank,wall_ms,status";

inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline double parse_real(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw config_error("csv: bad number '" + s + "'");
  return v;
}

inline void write_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << sweep_csv_header << '\n';
  for (const auto& r : records) {
    os << r.N << ',' << (r.M ? std::to_string(*r.M) : std::string("inf")) << ',' << r.n << ','
       << format_real(r.approx.real()) << ',' << format_real(r.approx.imag()) << ',' << format_real(r.exact.real())
       << ',' << format_real(r.exact.imag()) << ',' << format_real(r.delta) << ',' << format_real(r.delta_rank) << ','
       << r.eps_rank << ',' << r.wall_ms << ',' << r.status << '\n';
  }
}

inline void write_csv(const std::string& path, const std::vector<SweepRecord>& records) {
  std::ofstream os(path);
  if (!os) throw config_error("cannot open output file '" + path + "'");
  write_csv(os, records);
}

inline std::vector<SweepRecord> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != sweep_csv_header) throw config_error("csv: unexpected header");
  std::vector<SweepRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 12) throw config_error("csv: expected 12 fields, got " + std::to_string(f.size()));
    SweepRecord r;
    try {
      r.N = static_cast<Index>(std::stoll(f[0]));
      if (f[1] != "inf") r.M = static_cast<std::size_t>(std::stoull(f[1]));
      r.n = static_cast<std::size_t>(std::stoull(f[2]));
      r.approx = {parse_real(f[3]), parse_real(f[4])};
      r.exact = {parse_real(f[5]), parse_real(f[6])};
      r.delta = parse_real(f[7]);
      r.delta_rank = parse_real(f[8]);
      r.eps_rank = static_cast<Index>(std::stoll(f[9]));
      r.wall_ms = std::stoll(f[10]);
    } catch (const std::logic_error&) {
      throw config_error("csv: malformed row '" + line + "'");
    }
    r.status = f[11];
    out.push_back(r);
  }
  return out;
}

}  // namespace kedmd::bench

#endif  // KEDMD_BENCH_SWEEP_HPP
