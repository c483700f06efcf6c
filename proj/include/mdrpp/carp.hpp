#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/metrics.hpp"

namespace mdrpp {

struct CarpFile {
  std::string name;
  int node_count = 0;
  std::vector<Edge> edges;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> warnings;
};

namespace carp_detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline bool known_key(const std::string& key) {
  static const char* keys[] = {"NOMBRE",        "COMENTARIO",         "VERTICES",
                               "ARISTAS_REQ",   "ARISTAS_NOREQ",      "VEHICULOS",
                               "CAPACIDAD",     "TIPO_COSTES_ARISTAS", "COSTE_TOTAL_REQ",
                               "DEPOSITO",      "LISTA_ARISTAS_REQ",  "LISTA_ARISTAS_NOREQ"};
  return std::find(std::begin(keys), std::end(keys), key) != std::end(keys);
}

}  // namespace carp_detail

// Reads the classical gdb/val/egl layout: `KEY : value` headers followed by
// edge lists of `( u, v) coste c [demanda d]` lines. Demands are dropped.
inline CarpFile parse_carp(std::string_view text) {
  static const std::regex edge_re(R"(\(\s*(-?\d+)\s*,\s*(-?\d+)\s*\)\s*coste\s+([0-9.]+))");
  CarpFile out;
  std::map<EdgeKey, std::size_t> seen;
  bool has_edges = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string line = carp_detail::trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;

    std::smatch m;
    if (std::regex_search(line, m, edge_re)) {
      const long long u = detail::parse_int(m[1].str(), line_no, "node id");
      const long long v = detail::parse_int(m[2].str(), line_no, "node id");
      if (u < 1 || v < 1) throw ParseError("node ids are 1-based", line_no);
      const Time w = detail::parse_time_at(m[3].str(), line_no);
      if (u == v) {
        out.warnings.push_back("line " + std::to_string(line_no) + ": self-loop dropped");
        continue;
      }
      const Edge e{static_cast<NodeId>(u), static_cast<NodeId>(v), w};
      auto [it, fresh] = seen.emplace(e.key(), out.edges.size());
      if (fresh) {
        out.edges.push_back(e);
      } else {
        out.warnings.push_back("line " + std::to_string(line_no) + ": parallel edge (" +
                               std::to_string(u) + "," + std::to_string(v) + ") keeps the cheaper weight");
        Edge& kept = out.edges[it->second];
        kept.weight = std::min(kept.weight, w);
      }
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      if (line == "END") continue;
      throw ParseError("unrecognised line '" + line + "'", line_no);
    }
    const std::string key = carp_detail::trim(std::string_view(line).substr(0, colon));
    const std::string value = carp_detail::trim(std::string_view(line).substr(colon + 1));
    if (key == "LISTA_ARISTAS_REQ" || key == "LISTA_ARISTAS_NOREQ") {
      has_edges = true;
      continue;
    }
    if (!carp_detail::known_key(key)) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": unknown header '" + key + "'");
    }
    out.metadata.emplace_back(key, value);
    if (key == "NOMBRE") out.name = value;
    if (key == "VERTICES") out.node_count = static_cast<int>(detail::parse_int(value, line_no, "vertex count"));
  }
  if (!has_edges || out.edges.empty()) throw ParseError("missing edge section", line_no);
  int max_id = 0;
  for (const Edge& e : out.edges) max_id = std::max({max_id, e.u, e.v});
  if (out.node_count == 0) out.node_count = max_id;
  if (max_id > out.node_count) {
    throw ValidationError("edge references node " + std::to_string(max_id) + " beyond VERTICES " +
                          std::to_string(out.node_count));
  }
  if (out.name.empty()) out.name = "carp";
  return out;
}

// Accepts `a/b` or a decimal.
inline Rational parse_ratio(std::string_view text) {
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    const std::string a(text.substr(0, slash));
    const std::string b(text.substr(slash + 1));
    const long long n = detail::parse_int(a, 0, "ratio numerator");
    const long long d = detail::parse_int(b, 0, "ratio denominator");
    if (d <= 0 || n < 0) throw ValidationError("ratio must be a non-negative fraction");
    return Rational(n, d);
  }
  const Time t = parse_time(text);
  if (t < Time{}) throw ValidationError("ratio must be non-negative");
  return Rational(t.count(), Time::units(1).count());
}

namespace carp_detail {

// round-half-up(r * n)
inline long long scaled_count(const Rational& r, long long n) {
  return (2 * r.num() * n + r.den()) / (2 * r.den());
}

}  // namespace carp_detail

// Random depots and required edges, then K = floor(|E_u| / 2) (at least 1),
// C = twice the heaviest edge, R_T = 2C.
inline Instance convert_to_instance(const CarpFile& c, std::uint64_t seed,
                                    const Rational& depot_ratio = Rational(1, 5),
                                    const Rational& required_ratio = Rational(1, 3)) {
  Instance inst;
  inst.name = c.name;
  inst.graph = Graph(c.node_count, c.edges);
  const long long n = c.node_count;
  const long long m = static_cast<long long>(c.edges.size());
  const long long depot_count = std::min(n, std::max(2LL, carp_detail::scaled_count(depot_ratio, n)));
  const long long required_count = std::min(m, std::max(1LL, carp_detail::scaled_count(required_ratio, m)));

  std::mt19937_64 rng(seed);
  std::vector<NodeId> nodes(static_cast<std::size_t>(n));
  std::iota(nodes.begin(), nodes.end(), 1);
  std::shuffle(nodes.begin(), nodes.end(), rng);
  inst.depots.assign(nodes.begin(), nodes.begin() + depot_count);
  std::sort(inst.depots.begin(), inst.depots.end());

  std::vector<std::size_t> order(c.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (long long i = 0; i < required_count; ++i) inst.required.push_back(c.edges[order[static_cast<std::size_t>(i)]].key());

  inst.vehicle_count = std::max(1, static_cast<int>(required_count / 2));
  inst.capacity = inst.graph.max_weight() * 2;
  inst.recharge = inst.capacity * 2;
  return finalize_instance(std::move(inst));
}

}  // namespace mdrpp
