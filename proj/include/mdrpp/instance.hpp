#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/time.hpp"

namespace mdrpp {

// A multi-depot rural postman instance with rechargeable, reusable vehicles.
struct Instance {
  std::string name = "instance";
  Graph graph;
  std::vector<NodeId> depots;           // declaration order, no duplicates
  std::vector<EdgeKey> required;        // sorted, no duplicates
  int vehicle_count = 1;
  Time capacity;
  Time recharge;
  Time speed = Time::units(1);          // lengths are divided by this to get times
  int max_trips = 0;                    // only the MILP emitter reads this
  std::vector<NodeId> start_depots;     // one per vehicle

  bool is_depot(NodeId n) const {
    return std::find(depots.begin(), depots.end(), n) != depots.end();
  }
  bool is_required(EdgeKey e) const {
    return std::binary_search(required.begin(), required.end(), e);
  }
  int required_index(EdgeKey e) const {
    auto it = std::lower_bound(required.begin(), required.end(), e);
    if (it == required.end() || *it != e) return -1;
    return static_cast<int>(it - required.begin());
  }
};

// ceil(total weight / C) + |E_u|; a safe trip bound for tiny instances.
inline int default_max_trips(const Graph& g, Time capacity, std::size_t required_count) {
  const std::int64_t total = g.total_weight().count();
  const std::int64_t c = capacity.count();
  return static_cast<int>((total + c - 1) / c + static_cast<std::int64_t>(required_count));
}

inline void validate(const Instance& inst) {
  const Graph& g = inst.graph;
  if (inst.depots.empty()) throw ValidationError("instance needs at least one depot");
  std::set<NodeId> seen;
  for (NodeId d : inst.depots) {
    if (!g.has_node(d)) throw ValidationError("depot " + std::to_string(d) + " not a node");
    if (!seen.insert(d).second) {
      throw ValidationError("depot " + std::to_string(d) + " listed twice");
    }
  }
  if (inst.required.empty()) throw ValidationError("instance needs at least one required edge");
  if (!std::is_sorted(inst.required.begin(), inst.required.end()) ||
      std::adjacent_find(inst.required.begin(), inst.required.end()) != inst.required.end()) {
    throw ValidationError("required edges must be sorted and unique");
  }
  if (inst.capacity <= Time{}) throw ValidationError("capacity must be positive");
  if (inst.recharge < Time{}) throw ValidationError("recharge time must be non-negative");
  if (inst.speed <= Time{}) throw ValidationError("speed must be positive");
  for (EdgeKey e : inst.required) {
    if (e.first == e.second) throw ValidationError("self-loop");
    auto w = g.weight(e.first, e.second);
    if (!w) {
      throw ValidationError("required edge (" + std::to_string(e.first) + "," +
                            std::to_string(e.second) + ") not in edge set");
    }
    if (*w > inst.capacity) {
      throw ValidationError("required edge (" + std::to_string(e.first) + "," +
                            std::to_string(e.second) + ") longer than capacity");
    }
  }
  if (inst.vehicle_count < 1) throw ValidationError("need at least one vehicle");
  if (static_cast<int>(inst.start_depots.size()) != inst.vehicle_count) {
    throw ValidationError("start depot list must name one depot per vehicle");
  }
  for (NodeId b : inst.start_depots) {
    if (!inst.is_depot(b)) {
      throw ValidationError("start node " + std::to_string(b) + " is not a depot");
    }
  }
  if (inst.max_trips < 1) throw ValidationError("max trips must be positive");
}

// Fills defaults (cyclic start depots, max trips), canonicalizes the required
// list and validates.
inline Instance finalize_instance(Instance inst) {
  std::sort(inst.required.begin(), inst.required.end());
  inst.required.erase(std::unique(inst.required.begin(), inst.required.end()),
                      inst.required.end());
  if (inst.start_depots.empty() && !inst.depots.empty()) {
    for (int k = 0; k < inst.vehicle_count; ++k) {
      inst.start_depots.push_back(inst.depots[static_cast<std::size_t>(k) % inst.depots.size()]);
    }
  }
  if (inst.max_trips == 0 && inst.capacity > Time{}) {
    inst.max_trips = default_max_trips(inst.graph, inst.capacity, inst.required.size());
  }
  validate(inst);
  return inst;
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

// Non-empty, comment-stripped lines with their 1-based line numbers.
inline std::vector<std::pair<int, std::vector<std::string>>> tokenize_lines(std::string_view text) {
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = split_ws(line);
    if (!tokens.empty()) lines.emplace_back(number, std::move(tokens));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

inline long long parse_int(const std::string& s, int line, const char* what) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(std::string("expected integer ") + what + ", got '" + s + "'", line);
  }
  return v;
}

inline Time parse_time_at(const std::string& s, int line) {
  try {
    return parse_time(s);
  } catch (const ParseError& e) {
    throw ParseError(e.what(), line);
  }
}

// length / speed, exact at millitime resolution.
inline Time length_to_time(Time length, Time speed, int line) {
  const std::int64_t num = length.count() * Time::kTicksPerUnit;
  if (num % speed.count() != 0) {
    throw ParseError("speed does not divide edge length at millitime precision", line);
  }
  return Time::ticks(num / speed.count());
}

}  // namespace detail

inline Instance parse_instance(std::string_view text) {
  const auto lines = detail::tokenize_lines(text);
  Instance inst;
  int nodes = 0;
  std::vector<Edge> lengths;
  std::vector<int> edge_lines;
  bool have_nodes = false, have_edges = false, have_required = false, have_vehicles = false,
       have_capacity = false, have_recharge = false;

  auto arity = [](const std::vector<std::string>& t, std::size_t n, int line) {
    if (t.size() != n) {
      throw ParseError(t[0] + " expects " + std::to_string(n - 1) + " value(s)", line);
    }
  };

  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [line, tok] = lines[i];
    const std::string& key = tok[0];
    if (key == "NAME") {
      arity(tok, 2, line);
      inst.name = tok[1];
    } else if (key == "NODES") {
      arity(tok, 2, line);
      nodes = static_cast<int>(detail::parse_int(tok[1], line, "node count"));
      if (nodes <= 0) throw ParseError("node count must be positive", line);
      have_nodes = true;
    } else if (key == "DEPOTS" || key == "START") {
      if (tok.size() < 2) throw ParseError(key + " expects at least one node id", line);
      auto& dst = key == "DEPOTS" ? inst.depots : inst.start_depots;
      for (std::size_t j = 1; j < tok.size(); ++j) {
        dst.push_back(static_cast<NodeId>(detail::parse_int(tok[j], line, "node id")));
      }
    } else if (key == "EDGES" || key == "REQUIRED") {
      arity(tok, 2, line);
      const long long m = detail::parse_int(tok[1], line, "edge count");
      if (m < 0) throw ParseError("negative edge count", line);
      for (long long j = 0; j < m; ++j) {
        if (++i >= lines.size()) {
          throw ParseError(key + " section ends early: expected " + std::to_string(m) + " lines",
                           line);
        }
        const auto& [eline, etok] = lines[i];
        const std::size_t want = key == "EDGES" ? 3 : 2;
        if (etok.size() != want) {
          throw ParseError(key == "EDGES" ? "edge line must be '<u> <v> <weight>'"
                                          : "required edge line must be '<u> <v>'",
                           eline);
        }
        const auto u = static_cast<NodeId>(detail::parse_int(etok[0], eline, "node id"));
        const auto v = static_cast<NodeId>(detail::parse_int(etok[1], eline, "node id"));
        if (key == "EDGES") {
          lengths.push_back({u, v, detail::parse_time_at(etok[2], eline)});
          edge_lines.push_back(eline);
        } else {
          if (u == v) throw ParseError("self-loop", eline);
          inst.required.emplace_back(u, v);
        }
      }
      (key == "EDGES" ? have_edges : have_required) = true;
    } else if (key == "VEHICLES") {
      arity(tok, 2, line);
      inst.vehicle_count = static_cast<int>(detail::parse_int(tok[1], line, "vehicle count"));
      have_vehicles = true;
    } else if (key == "CAPACITY") {
      arity(tok, 2, line);
      inst.capacity = detail::parse_time_at(tok[1], line);
      have_capacity = true;
    } else if (key == "RECHARGE") {
      arity(tok, 2, line);
      inst.recharge = detail::parse_time_at(tok[1], line);
      have_recharge = true;
    } else if (key == "SPEED") {
      arity(tok, 2, line);
      inst.speed = detail::parse_time_at(tok[1], line);
      if (inst.speed <= Time{}) throw ParseError("speed must be positive", line);
    } else if (key == "MAXTRIPS") {
      arity(tok, 2, line);
      inst.max_trips = static_cast<int>(detail::parse_int(tok[1], line, "trip count"));
    } else {
      throw ParseError("unknown keyword '" + key + "'", line);
    }
  }
  if (!have_nodes) throw ParseError("missing NODES");
  if (!have_edges) throw ParseError("missing EDGES");
  if (!have_required) throw ParseError("missing REQUIRED");
  if (!have_vehicles) throw ParseError("missing VEHICLES");
  if (!have_capacity) throw ParseError("missing CAPACITY");
  if (!have_recharge) throw ParseError("missing RECHARGE");

  std::vector<Edge> edges;
  for (std::size_t j = 0; j < lengths.size(); ++j) {
    Edge e = lengths[j];
    e.weight = detail::length_to_time(e.weight, inst.speed, edge_lines[j]);
    edges.push_back(e);
  }
  inst.graph = Graph(nodes, std::move(edges));
  return finalize_instance(std::move(inst));
}

// Canonical text form; parse_instance(serialize_instance(x)) reproduces x.
inline std::string serialize_instance(const Instance& inst) {
  std::ostringstream os;
  os << "NAME " << inst.name << '\n';
  os << "NODES " << inst.graph.node_count() << '\n';
  os << "DEPOTS";
  for (NodeId d : inst.depots) os << ' ' << d;
  os << "\nSTART";
  for (NodeId d : inst.start_depots) os << ' ' << d;
  os << "\nEDGES " << inst.graph.edges().size() << '\n';
  for (const Edge& e : inst.graph.edges()) {
    const Time length = Time::ticks(e.weight.count() * inst.speed.count() / Time::kTicksPerUnit);
    os << e.u << ' ' << e.v << ' ' << length << '\n';
  }
  os << "REQUIRED " << inst.required.size() << '\n';
  for (EdgeKey e : inst.required) os << e.first << ' ' << e.second << '\n';
  os << "VEHICLES " << inst.vehicle_count << '\n';
  os << "CAPACITY " << inst.capacity << '\n';
  os << "RECHARGE " << inst.recharge << '\n';
  if (inst.speed != Time::units(1)) os << "SPEED " << inst.speed << '\n';
  os << "MAXTRIPS " << inst.max_trips << '\n';
  return os.str();
}

inline bool same_instance(const Instance& a, const Instance& b) {
  if (a.graph.node_count() != b.graph.node_count()) return false;
  const auto& ea = a.graph.edges();
  const auto& eb = b.graph.edges();
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i) {
    if (ea[i].u != eb[i].u || ea[i].v != eb[i].v || ea[i].weight != eb[i].weight) return false;
  }
  return a.name == b.name && a.depots == b.depots && a.required == b.required &&
         a.vehicle_count == b.vehicle_count && a.capacity == b.capacity &&
         a.recharge == b.recharge && a.speed == b.speed && a.max_trips == b.max_trips &&
         a.start_depots == b.start_depots;
}

}  // namespace mdrpp
