#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/routing.hpp"

namespace mdrpp {

// A capacity-feasible connection between two depots, possibly several trips
// long. `time` counts the recharges between consecutive trips.
struct DepotRoute {
  Time time;
  std::vector<Trip> trips;
};

// Precomputed depot-to-depot routes. Only pairs (a, b) with a < b are stored;
// (b, a) is answered by reversing, (a, a) is the empty route.
class DepotRouteTable {
 public:
  DepotRouteTable() = default;

  explicit DepotRouteTable(const Instance& inst) : DepotRouteTable(inst, DistanceTable(inst.graph)) {}

  DepotRouteTable(const Instance& inst, const DistanceTable& dist) {
    depots_ = inst.depots;
    std::sort(depots_.begin(), depots_.end());
    const std::size_t n = depots_.size();
    for (std::size_t i = 0; i < n; ++i) index_[depots_[i]] = i;

    // Depot meta-graph: a hop exists when one trip can join the two depots.
    std::vector<std::vector<bool>> hop(n, std::vector<bool>(n, false));
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        hop[a][b] = a != b && dist.time(depots_[a], depots_[b]) <= inst.capacity;
      }
    }

    // Per source, label-setting search ordered by (time, hops, depot sequence).
    struct Label {
      Time time = Time::infinity();
      std::size_t hops = 0;
      std::vector<std::size_t> seq;
      bool operator<(const Label& o) const {
        if (time != o.time) return time < o.time;
        if (hops != o.hops) return hops < o.hops;
        return seq < o.seq;
      }
    };
    for (std::size_t s = 0; s < n; ++s) {
      std::vector<Label> best(n);
      std::vector<bool> done(n, false);
      best[s] = Label{Time{}, 0, {s}};
      for (std::size_t round = 0; round < n; ++round) {
        std::size_t u = n;
        for (std::size_t v = 0; v < n; ++v) {
          if (!done[v] && !best[v].time.is_infinite() && (u == n || best[v] < best[u])) u = v;
        }
        if (u == n) break;
        done[u] = true;
        for (std::size_t v = 0; v < n; ++v) {
          if (done[v] || !hop[u][v]) continue;
          Label cand;
          cand.time = best[u].time + dist.time(depots_[u], depots_[v]) +
                      (best[u].hops > 0 ? inst.recharge : Time{});
          cand.hops = best[u].hops + 1;
          cand.seq = best[u].seq;
          cand.seq.push_back(v);
          if (cand < best[v]) best[v] = std::move(cand);
        }
      }
      for (std::size_t t = s + 1; t < n; ++t) {
        std::optional<DepotRoute> entry;
        if (!best[t].time.is_infinite()) {
          DepotRoute r{best[t].time, {}};
          for (std::size_t h = 0; h + 1 < best[t].seq.size(); ++h) {
            const NodeId a = depots_[best[t].seq[h]];
            const NodeId b = depots_[best[t].seq[h + 1]];
            r.trips.push_back(Trip{dist.path(a, b), dist.time(a, b)});
          }
          entry = std::move(r);
        }
        entries_[{depots_[s], depots_[t]}] = std::move(entry);
      }
    }
  }

  // nullopt when no chain of single-trip hops joins the two depots.
  std::optional<DepotRoute> lookup(NodeId from, NodeId to) const {
    if (!index_.count(from) || !index_.count(to)) {
      throw ValidationError("depot route lookup on non-depot node");
    }
    if (from == to) return DepotRoute{};
    if (from < to) return entries_.at({from, to});
    auto e = entries_.at({to, from});
    if (!e) return std::nullopt;
    std::reverse(e->trips.begin(), e->trips.end());
    for (Trip& t : e->trips) std::reverse(t.nodes.begin(), t.nodes.end());
    return e;
  }

  Time time(NodeId from, NodeId to) const {
    auto e = lookup(from, to);
    return e ? e->time : Time::infinity();
  }

  std::size_t unique_entries() const { return entries_.size(); }
  const std::vector<NodeId>& depots() const { return depots_; }

  // Every depot pair joined by a single trip (the complete depot graph the
  // competitive-ratio bound assumes).
  bool single_trip_complete() const {
    for (const auto& [key, e] : entries_) {
      if (!e || e->trips.size() != 1) return false;
    }
    return true;
  }

  // Cache text: `d1 d2 time (trip)(trip)...` per stored pair, `inf` when
  // infeasible.
  std::string serialize() const {
    std::ostringstream os;
    for (const auto& [key, e] : entries_) {
      os << key.first << ' ' << key.second << ' ';
      if (!e) {
        os << "inf\n";
        continue;
      }
      os << e->time;
      if (!e->trips.empty()) os << ' ';
      for (const Trip& t : e->trips) {
        os << '(';
        for (std::size_t i = 0; i < t.nodes.size(); ++i) os << (i ? " " : "") << t.nodes[i];
        os << ')';
      }
      os << '\n';
    }
    return os.str();
  }

  static DepotRouteTable parse(std::string_view text, const Instance& inst) {
    DepotRouteTable table;
    table.depots_ = inst.depots;
    std::sort(table.depots_.begin(), table.depots_.end());
    for (std::size_t i = 0; i < table.depots_.size(); ++i) table.index_[table.depots_[i]] = i;
    int line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto open = line.find('(');
      const auto head = detail::split_ws(std::string_view(line).substr(0, open));
      if (head.size() != 3) throw ParseError("expected 'd1 d2 time (trip)...'", line_no);
      const auto a = static_cast<NodeId>(detail::parse_int(head[0], line_no, "depot"));
      const auto b = static_cast<NodeId>(detail::parse_int(head[1], line_no, "depot"));
      if (!table.index_.count(a) || !table.index_.count(b) || a >= b) {
        throw ParseError("cache entry must name two depots in increasing order", line_no);
      }
      if (head[2] == "inf") {
        table.entries_[{a, b}] = std::nullopt;
        continue;
      }
      DepotRoute r{detail::parse_time_at(head[2], line_no), {}};
      const FleetPlan trips = parse_plan(
          "V1: " + (open == std::string::npos ? std::string() : line.substr(open)), Instance{inst});
      r.trips = trips.routes[0].trips;
      table.entries_[{a, b}] = std::move(r);
    }
    return table;
  }

 private:
  std::vector<NodeId> depots_;
  std::map<NodeId, std::size_t> index_;
  std::map<std::pair<NodeId, NodeId>, std::optional<DepotRoute>> entries_;
};

}  // namespace mdrpp
