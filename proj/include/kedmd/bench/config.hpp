#ifndef KEDMD_BENCH_CONFIG_HPP
#define KEDMD_BENCH_CONFIG_HPP

///
/// \file config.hpp
///
/// Plain-text experiment configuration: one `key = value` per line, `#`
/// starts a comment, lists are comma separated. Example:
///
///     map = skewed_doubling
///     a = 0.7071067811865476
///     basis = monomials
///     N = 5, 10
///     M = 100, 1000, inf
///
/// `M = inf` selects the infinite-node matrices. Instead of an M list a
/// schedule may be given: `schedule = corollary1(2.0)` (M = ceil(N^2 R^N)) or
/// `schedule = quadratic(10)` (M = ceil(c N^2)).
///

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "kedmd/edmd.hpp"
#include "kedmd/error.hpp"
#include "kedmd/maps.hpp"
#include "kedmd/observables.hpp"
#include "kedmd/transfer.hpp"

namespace kedmd::bench {

struct MapSpec {
  std::string kind = "skewed_doubling";
  double parameter = 0.0;  ///< a or mu
  std::optional<ExpansionParams> expansion;
};

inline IntervalMap make_map(const MapSpec& spec) {
  IntervalMap map = [&] {
    if (spec.kind == "skewed_doubling") return make_skewed_doubling(spec.parameter);
    if (spec.kind == "blaschke") return make_blaschke(spec.parameter);
    throw config_error("unknown map kind '" + spec.kind + "'");
  }();
  if (spec.expansion) return map.with_expansion_params(*spec.expansion);
  return map;
}

enum class NodeRule { midpoint, offset };

struct Schedule {
  enum class Kind { list, corollary1, quadratic };
  Kind kind = Kind::list;
  double parameter = 0.0;

  std::uint64_t nodes_for(Index n) const {
    switch (kind) {
      case Kind::corollary1: return node_schedule(static_cast<std::size_t>(n), parameter);
      case Kind::quadratic: {
        const double nn = static_cast<double>(n);
        return static_cast<std::uint64_t>(std::max(1.0, std::ceil(parameter * nn * nn)));
      }
      case Kind::list: break;
    }
    throw config_error("schedule: no rule set");
  }
};

enum class LMethod { automatic, affine, cauchy };

struct SweepConfig {
  MapSpec map;
  BasisKind basis = BasisKind::monomials;
  bool conjugate = true;
  std::vector<Index> N;
  /// Node counts; std::nullopt stands for infinitely many nodes.
  std::vector<std::optional<std::size_t>> M;
  Schedule schedule;
  NodeRule node_rule = NodeRule::midpoint;
  double delta = 0.0;
  double eps_pinv = default_eps_pinv;
  std::size_t quad_order = default_quad_order;
  std::vector<std::size_t> eigen_indices;
  std::string out;
  double rho = 1.0;
  double sample_radius = default_sample_radius;
  std::size_t samples = default_cauchy_samples;
  LMethod l_method = LMethod::automatic;
  unsigned threads = 1;

  ObservableBasis make_basis(Index n) const {
    return basis == BasisKind::monomials ? ObservableBasis::monomials(n) : ObservableBasis::fourier(n, conjugate);
  }

  /// Node counts evaluated for a given N: the M list, or the schedule.
  std::vector<std::optional<std::size_t>> nodes_for(Index n) const {
    if (schedule.kind == Schedule::Kind::list) return M;
    return {static_cast<std::size_t>(schedule.nodes_for(n))};
  }

  std::size_t max_eigen_index() const {
    return eigen_indices.empty() ? 0 : *std::max_element(eigen_indices.begin(), eigen_indices.end());
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

inline std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw config_error("empty list element in '" + value + "'");
    out.push_back(item);
  }
  if (out.empty()) throw config_error("empty list");
  return out;
}

inline double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(v)) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw config_error(key + ": expected a number, got '" + value + "'");
  }
}

inline std::uint64_t parse_count(const std::string& key, const std::string& value) {
  std::uint64_t v = 0;
  const auto* first = value.data();
  const auto* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec == std::errc() && ptr == last) return v;
  // Accept integral scientific notation such as 1e5.
  const double d = parse_double(key, value);
  if (d < 0.0 || d != std::floor(d) || d > 9.2e18) throw config_error(key + ": expected a count, got '" + value + "'");
  return static_cast<std::uint64_t>(d);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw config_error(key + ": expected true/false, got '" + value + "'");
}

// "name(arg)" -> {name, arg}
inline std::pair<std::string, double> parse_call(const std::string& key, const std::string& value) {
  const auto open = value.find('(');
  const auto close = value.rfind(')');
  if (open == std::string::npos || close != value.size() - 1 || close < open)
    throw config_error(key + ": expected rule(parameter), got '" + value + "'");
  return {trim(value.substr(0, open)), parse_double(key, trim(value.substr(open + 1, close - open - 1)))};
}

}  // namespace detail

/// Reads `key = value` lines into a map; later duplicates are an error.
inline std::map<std::string, std::string> read_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = detail::trim(line.substr(0, eq));
    std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw config_error("line " + std::to_string(lineno) + ": empty key or value");
    if (!out.emplace(key, value).second) throw config_error("line " + std::to_string(lineno) + ": duplicate key " + key);
  }
  return out;
}

inline SweepConfig parse_config(std::istream& in) {
  static const std::set<std::string> known = {
      "map",   "a",          "mu",        "r",      "R",         "basis",        "conjugate",
      "N",     "M",          "schedule",  "delta",  "node_rule", "eps_pinv",     "quad_order",
      "n",     "out",        "rho",       "sample_radius",       "samples",      "L_method",
      "threads"};
  const auto kv = read_key_values(in);
  for (const auto& [key, value] : kv)
    if (!known.count(key)) throw config_error("unknown key '" + key + "'");

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto it = kv.find(key); it != kv.end()) return it->second;
    return std::nullopt;
  };

  SweepConfig cfg;
  const auto map_kind = get("map");
  if (!map_kind) throw config_error("missing key 'map'");
  cfg.map.kind = *map_kind;
  if (cfg.map.kind == "skewed_doubling") {
    if (get("mu")) throw config_error("'mu' does not apply to skewed_doubling");
    cfg.map.parameter = get("a") ? detail::parse_double("a", *get("a")) : 0.0;
  } else if (cfg.map.kind == "blaschke") {
    if (get("a")) throw config_error("'a' does not apply to blaschke");
    cfg.map.parameter = get("mu") ? detail::parse_double("mu", *get("mu")) : 0.0;
  } else {
    throw config_error("unknown map kind '" + cfg.map.kind + "'");
  }
  if (get("r") || get("R")) {
    if (!get("r") || !get("R")) throw config_error("'r' and 'R' must be given together");
    cfg.map.expansion = ExpansionParams{detail::parse_double("r", *get("r")), detail::parse_double("R", *get("R"))};
  }

  if (const auto b = get("basis")) {
    if (*b == "monomials") cfg.basis = BasisKind::monomials;
    else if (*b == "fourier") cfg.basis = BasisKind::fourier;
    else throw config_error("basis: expected monomials or fourier, got '" + *b + "'");
  }
  if (const auto c = get("conjugate")) cfg.conjugate = detail::parse_bool("conjugate", *c);

  const auto n_list = get("N");
  if (!n_list) throw config_error("missing key 'N'");
  for (const auto& item : detail::split_list(*n_list)) {
    const auto n = detail::parse_count("N", item);
    if (n < 1) throw config_error("N: values must be >= 1");
    if (cfg.basis == BasisKind::fourier && n % 2 == 0) throw config_error("N: Fourier bases need odd N");
    cfg.N.push_back(static_cast<Index>(n));
  }

  if (const auto s = get("schedule")) {
    if (get("M")) throw config_error("'schedule' and 'M' are mutually exclusive");
    const auto [rule, param] = detail::parse_call("schedule", *s);
    if (rule == "corollary1") {
      if (!(param > 1.0)) throw config_error("schedule: corollary1 needs R > 1");
      cfg.schedule = {Schedule::Kind::corollary1, param};
    } else if (rule == "quadratic") {
      if (!(param > 0.0)) throw config_error("schedule: quadratic needs c > 0");
      cfg.schedule = {Schedule::Kind::quadratic, param};
    } else {
      throw config_error("schedule: unknown rule '" + rule + "'");
    }
  } else {
    for (const auto& item : detail::split_list(get("M").value_or("inf"))) {
      if (item == "inf") {
        cfg.M.emplace_back(std::nullopt);
      } else {
        const auto m = detail::parse_count("M", item);
        if (m < 1) throw config_error("M: values must be >= 1");
        cfg.M.emplace_back(static_cast<std::size_t>(m));
      }
    }
  }

  if (const auto rule = get("node_rule")) {
    if (*rule == "midpoint") cfg.node_rule = NodeRule::midpoint;
    else if (*rule == "offset") cfg.node_rule = NodeRule::offset;
    else throw config_error("node_rule: expected midpoint or offset");
  }
  if (const auto d = get("delta")) {
    cfg.delta = detail::parse_double("delta", *d);
    if (!get("node_rule")) cfg.node_rule = NodeRule::offset;
    if (cfg.node_rule == NodeRule::midpoint) throw config_error("delta: only valid with node_rule = offset");
    if (cfg.delta < 0.0) throw config_error("delta: must be >= 0");
  } else if (cfg.node_rule == NodeRule::offset) {
    throw config_error("node_rule = offset requires 'delta'");
  }

  if (const auto e = get("eps_pinv")) {
    cfg.eps_pinv = detail::parse_double("eps_pinv", *e);
    if (cfg.eps_pinv < 0.0) throw config_error("eps_pinv: must be >= 0");
  }
  if (const auto q = get("quad_order")) {
    cfg.quad_order = detail::parse_count("quad_order", *q);
    if (cfg.quad_order < 1) throw config_error("quad_order: must be >= 1");
  }
  if (const auto r = get("rho")) {
    cfg.rho = detail::parse_double("rho", *r);
    if (!(cfg.rho > 0.0)) throw config_error("rho: must be > 0");
  }
  if (const auto s = get("sample_radius")) {
    cfg.sample_radius = detail::parse_double("sample_radius", *s);
    if (!(cfg.sample_radius > 0.0)) throw config_error("sample_radius: must be > 0");
  }
  if (const auto s = get("samples")) cfg.samples = detail::parse_count("samples", *s);
  if (const auto l = get("L_method")) {
    if (*l == "auto") cfg.l_method = LMethod::automatic;
    else if (*l == "affine") cfg.l_method = LMethod::affine;
    else if (*l == "cauchy") cfg.l_method = LMethod::cauchy;
    else throw config_error("L_method: expected auto, affine or cauchy");
  }
  if (const auto t = get("threads")) cfg.threads = static_cast<unsigned>(std::max<std::uint64_t>(1, detail::parse_count("threads", *t)));
  if (const auto o = get("out")) cfg.out = *o;

  const Index n_min = *std::min_element(cfg.N.begin(), cfg.N.end());
  if (const auto idx = get("n")) {
    for (const auto& item : detail::split_list(*idx)) cfg.eigen_indices.push_back(detail::parse_count("n", item));
  } else {
    for (Index i = 0; i < std::min<Index>(n_min, 6); ++i) cfg.eigen_indices.push_back(static_cast<std::size_t>(i));
  }
  for (const auto i : cfg.eigen_indices)
    if (static_cast<Index>(i) >= n_min) throw config_error("n: eigen index " + std::to_string(i) + " >= min(N)");

  // Surface parameter errors as configuration errors.
  try {
    (void)make_map(cfg.map);
  } catch (const parameter_error& e) {
    throw config_error(std::string("map: ") + e.what());
  }
  return cfg;
}

inline SweepConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

inline SweepConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  return parse_config(in);
}

}  // namespace kedmd::bench

#endif  // KEDMD_BENCH_CONFIG_HPP
