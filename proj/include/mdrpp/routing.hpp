#pragma once

#include <algorithm>
#include <compare>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/time.hpp"

namespace mdrpp {

// A depot-to-depot walk. `duration` caches the sum of edge weights.
struct Trip {
  std::vector<NodeId> nodes;
  Time duration;

  NodeId start() const { return nodes.front(); }
  NodeId end() const { return nodes.back(); }

  friend bool operator==(const Trip& a, const Trip& b) { return a.nodes == b.nodes; }
  friend auto operator<=>(const Trip& a, const Trip& b) { return a.nodes <=> b.nodes; }
};

inline Time walk_time(const Graph& g, const std::vector<NodeId>& nodes) {
  if (nodes.empty()) throw ValidationError("empty trip");
  Time total;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    auto w = g.weight(nodes[i], nodes[i + 1]);
    if (!w) {
      throw ValidationError("trip step " + std::to_string(nodes[i]) + "-" +
                            std::to_string(nodes[i + 1]) + " is not an edge");
    }
    total += *w;
  }
  return total;
}

inline Trip make_trip(const Graph& g, std::vector<NodeId> nodes) {
  Time d = walk_time(g, nodes);
  return Trip{std::move(nodes), d};
}

inline Time trip_time(const Graph& g, const Trip& t) { return walk_time(g, t.nodes); }

inline Trip reversed(Trip t) {
  std::reverse(t.nodes.begin(), t.nodes.end());
  return t;
}

struct Route {
  int vehicle = 0;  // 0-based
  std::vector<Trip> trips;

  bool empty() const { return trips.empty(); }
};

// Trip durations plus one recharge between each pair of consecutive trips.
inline Time route_time(const Route& r, Time recharge) {
  if (r.trips.empty()) return Time{};
  Time total = recharge * static_cast<std::int64_t>(r.trips.size() - 1);
  for (const Trip& t : r.trips) total += t.duration;
  return total;
}

inline Time route_time(const Graph& g, const Route& r, Time recharge) {
  if (r.trips.empty()) return Time{};
  Time total = recharge * static_cast<std::int64_t>(r.trips.size() - 1);
  for (const Trip& t : r.trips) total += trip_time(g, t);
  return total;
}

inline Time trip_start_time(const Route& r, Time recharge, std::size_t i) {
  Time t;
  for (std::size_t j = 0; j < i; ++j) t += r.trips[j].duration + recharge;
  return t;
}

inline Time trip_end_time(const Route& r, Time recharge, std::size_t i) {
  return trip_start_time(r, recharge, i) + r.trips[i].duration;
}

// Index of the trip whose (trip + following recharge) window contains t.
// During a recharge this is the trip just completed. t == 0 maps to trip 0.
inline std::size_t trip_index(const Route& r, Time recharge, Time t) {
  if (r.trips.empty() || t > route_time(r, recharge)) throw IdleVehicleError();
  Time p;
  std::size_t i = 0;
  for (; i < r.trips.size(); ++i) {
    p += r.trips[i].duration;
    if (i + 1 < r.trips.size()) p += recharge;
    if (t <= p) break;
  }
  return i;
}

// Required edges (sorted, deduplicated) traversed by the trip in either
// direction. `required` must be sorted.
inline std::vector<EdgeKey> required_edges_of_trip(const std::vector<EdgeKey>& required,
                                                   const Trip& t) {
  std::vector<EdgeKey> out;
  for (std::size_t i = 0; i + 1 < t.nodes.size(); ++i) {
    EdgeKey e(t.nodes[i], t.nodes[i + 1]);
    if (std::binary_search(required.begin(), required.end(), e)) out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Routes for every vehicle plus their status flags (S_k).
struct FleetPlan {
  Time recharge;
  std::vector<Route> routes;
  std::vector<bool> active;

  static FleetPlan empty_for(const Instance& inst) {
    FleetPlan p;
    p.recharge = inst.recharge;
    for (int k = 0; k < inst.vehicle_count; ++k) p.routes.push_back(Route{k, {}});
    p.active.assign(static_cast<std::size_t>(inst.vehicle_count), true);
    return p;
  }

  std::size_t size() const { return routes.size(); }

  Time completion_time(std::size_t k) const { return route_time(routes[k], recharge); }

  std::vector<Time> completion_times() const {
    std::vector<Time> y;
    for (std::size_t k = 0; k < routes.size(); ++k) y.push_back(completion_time(k));
    return y;
  }
};

inline Time mission_time(const FleetPlan& plan) {
  Time m;
  for (std::size_t k = 0; k < plan.routes.size(); ++k) m = std::max(m, plan.completion_time(k));
  return m;
}

// Depot the vehicle occupies once its route is done.
inline NodeId final_depot(const Instance& inst, const Route& r) {
  return r.trips.empty() ? inst.start_depots[static_cast<std::size_t>(r.vehicle)]
                         : r.trips.back().end();
}

// Structural checks: trips are walks between depots within capacity, trips
// chain, each route leaves from its vehicle's start depot. Returns one
// message per violation.
inline std::vector<std::string> route_violations(const Instance& inst, const Route& r) {
  std::vector<std::string> v;
  const std::string who = "V" + std::to_string(r.vehicle + 1);
  NodeId at = inst.start_depots[static_cast<std::size_t>(r.vehicle)];
  for (std::size_t j = 0; j < r.trips.size(); ++j) {
    const Trip& t = r.trips[j];
    const std::string which = who + " trip " + std::to_string(j);
    if (t.nodes.size() < 2) {
      v.push_back(which + ": fewer than two nodes");
      continue;
    }
    if (!inst.is_depot(t.start()) || !inst.is_depot(t.end())) {
      v.push_back(which + ": does not start and end at depots");
    }
    if (t.start() != at) v.push_back(which + ": does not chain from depot " + std::to_string(at));
    try {
      const Time d = trip_time(inst.graph, t);
      if (d != t.duration) v.push_back(which + ": cached duration is stale");
      if (d > inst.capacity) v.push_back(which + ": exceeds capacity");
    } catch (const ValidationError& e) {
      v.push_back(which + ": " + e.what());
    }
    at = t.end();
  }
  return v;
}

inline std::set<EdgeKey> covered_edges(const Instance& inst, const FleetPlan& plan) {
  std::set<EdgeKey> covered;
  for (const Route& r : plan.routes) {
    for (const Trip& t : r.trips) {
      for (EdgeKey e : required_edges_of_trip(inst.required, t)) covered.insert(e);
    }
  }
  return covered;
}

inline std::vector<std::string> plan_violations(const Instance& inst, const FleetPlan& plan) {
  std::vector<std::string> v;
  if (static_cast<int>(plan.routes.size()) != inst.vehicle_count) {
    v.push_back("plan has " + std::to_string(plan.routes.size()) + " routes for " +
                std::to_string(inst.vehicle_count) + " vehicles");
    return v;
  }
  for (const Route& r : plan.routes) {
    auto rv = route_violations(inst, r);
    v.insert(v.end(), rv.begin(), rv.end());
  }
  const auto covered = covered_edges(inst, plan);
  for (EdgeKey e : inst.required) {
    if (!covered.count(e)) {
      v.push_back("required edge (" + std::to_string(e.first) + "," + std::to_string(e.second) +
                  ") not covered");
    }
  }
  return v;
}

// One line per vehicle: `V1: (1 3 5)(5 7 8 5)`.
inline std::string format_plan(const FleetPlan& plan) {
  std::ostringstream os;
  for (const Route& r : plan.routes) {
    os << 'V' << r.vehicle + 1 << ':';
    if (!r.trips.empty()) os << ' ';
    for (const Trip& t : r.trips) {
      os << '(';
      for (std::size_t i = 0; i < t.nodes.size(); ++i) os << (i ? " " : "") << t.nodes[i];
      os << ')';
    }
    os << '\n';
  }
  return os.str();
}

inline FleetPlan parse_plan(std::string_view text, const Instance& inst) {
  FleetPlan plan = FleetPlan::empty_for(inst);
  std::vector<bool> seen(plan.routes.size(), false);
  int line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto colon = line.find(':');
    const auto v = line.find('V');
    if (colon == std::string::npos || v == std::string::npos || v > colon) {
      throw ParseError("expected 'V<k>: (trip)...'", line_no);
    }
    const std::string id(line.begin() + static_cast<long>(v) + 1,
                         line.begin() + static_cast<long>(colon));
    const long long k = detail::parse_int(id, line_no, "vehicle id");
    if (k < 1 || k > inst.vehicle_count) throw ParseError("vehicle id out of range", line_no);
    if (seen[static_cast<std::size_t>(k - 1)]) throw ParseError("vehicle listed twice", line_no);
    seen[static_cast<std::size_t>(k - 1)] = true;
    Route& r = plan.routes[static_cast<std::size_t>(k - 1)];
    std::size_t pos = colon + 1;
    while (true) {
      const auto open = line.find('(', pos);
      if (open == std::string::npos) {
        if (line.find_first_not_of(" \t\r", pos) != std::string::npos) {
          throw ParseError("unexpected text outside trip parentheses", line_no);
        }
        break;
      }
      const auto close = line.find(')', open);
      if (close == std::string::npos) throw ParseError("unterminated trip", line_no);
      std::vector<NodeId> nodes;
      for (const auto& tok : detail::split_ws(std::string_view(line).substr(open + 1, close - open - 1))) {
        nodes.push_back(static_cast<NodeId>(detail::parse_int(tok, line_no, "node id")));
      }
      try {
        r.trips.push_back(make_trip(inst.graph, std::move(nodes)));
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no);
      }
      pos = close + 1;
    }
  }
  return plan;
}

}  // namespace mdrpp
