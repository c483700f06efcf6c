#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdrpp/depot_routes.hpp"
#include "mdrpp/error.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/routing.hpp"

namespace mdrpp {

// Read-only data shared by every auction on one instance.
struct AuctionContext {
  const Instance& inst;
  const DistanceTable& dist;
  const DepotRouteTable& table;
  Time diameter;

  AuctionContext(const Instance& i, const DistanceTable& d, const DepotRouteTable& t)
      : inst(i), dist(d), table(t) {
    for (NodeId a = 1; a <= i.graph.node_count(); ++a) {
      for (NodeId b = a + 1; b <= i.graph.node_count(); ++b) diameter = std::max(diameter, d.time(a, b));
    }
  }
};

struct AuctionConfig {
  Time initial_radius;
  Time radius_step;

  static AuctionConfig defaults_for(const Instance& inst) {
    return AuctionConfig{inst.capacity, inst.capacity};
  }
};

inline void validate(const AuctionConfig& cfg) {
  if (cfg.initial_radius <= Time{} || cfg.radius_step <= Time{}) {
    throw ValidationError("search radius and radius step must be positive");
  }
}

struct PooledTrip {
  Trip trip;
  std::vector<EdgeKey> edges;
};

// Failed required trips keyed by their node sequence (identical trips
// collapse into one entry).
class FailedTripPool {
 public:
  void add(const Trip& trip, std::vector<EdgeKey> edges) {
    if (edges.empty()) throw ValidationError("only required trips can be pooled");
    entries_.emplace(trip.nodes, PooledTrip{trip, std::move(edges)});
  }
  void remove(const Trip& trip) { entries_.erase(trip.nodes); }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  std::vector<PooledTrip> entries() const {
    std::vector<PooledTrip> out;
    for (const auto& [key, e] : entries_) out.push_back(e);
    return out;
  }

 private:
  std::map<std::vector<NodeId>, PooledTrip> entries_;
};

// Where a failed trip can be spliced in: after trip `trip_index` of the route,
// at that trip's end depot. trip_index -1 stands for an empty route, anchored
// at the start depot.
struct Anchor {
  int trip_index = -1;
  NodeId depot = 0;
};

struct Bid {
  int vehicle = 0;
  Trip trip;
  Time value;
  Route candidate_route;
  Anchor anchor;
};

// Start/end depots a vehicle still passes through at time t. A vehicle whose
// route is finished (or empty) only offers its final depot.
inline std::vector<std::pair<NodeId, NodeId>> upcoming_depots(const Instance& inst,
                                                              const Route& r, Time recharge,
                                                              Time t) {
  if (r.trips.empty() || t > route_time(r, recharge)) {
    const NodeId d = final_depot(inst, r);
    return {{d, d}};
  }
  std::vector<std::pair<NodeId, NodeId>> out;
  for (std::size_t j = trip_index(r, recharge, t); j < r.trips.size(); ++j) {
    out.emplace_back(r.trips[j].start(), r.trips[j].end());
  }
  return out;
}

// Active vehicles with an upcoming depot within `radius` of either end of the
// failed trip. Vehicle ids ascend.
inline std::vector<int> search_nearby(const AuctionContext& ctx, const FleetPlan& plan,
                                      const Trip& failed, Time radius, Time t) {
  std::vector<int> found;
  auto gap = [&](NodeId d) {
    return std::min(ctx.dist.time(d, failed.start()), ctx.dist.time(d, failed.end()));
  };
  for (std::size_t k = 0; k < plan.size(); ++k) {
    if (!plan.active[k]) continue;
    for (const auto& [s, e] : upcoming_depots(ctx.inst, plan.routes[k], plan.recharge, t)) {
      if (gap(s) <= radius || gap(e) <= radius) {
        found.push_back(static_cast<int>(k));
        break;
      }
    }
  }
  return found;
}

inline std::vector<Anchor> insertion_anchors(const Instance& inst, const Route& r, Time recharge,
                                             Time t) {
  if (r.trips.empty()) return {Anchor{-1, final_depot(inst, r)}};
  if (t > route_time(r, recharge)) {
    const int last = static_cast<int>(r.trips.size()) - 1;
    return {Anchor{last, r.trips.back().end()}};
  }
  std::vector<Anchor> out;
  for (std::size_t j = trip_index(r, recharge, t); j < r.trips.size(); ++j) {
    out.push_back(Anchor{static_cast<int>(j), r.trips[j].end()});
  }
  return out;
}

// Splices the failed trip into the route after trip j (at depot d_r). Before
// the last trip a closed detour d_r -> trip -> d_r is inserted; after the
// last trip the trip is appended from whichever of its ends is cheaper to
// reach, reversing it when entered from its end. nullopt if a needed
// connection does not exist.
inline std::optional<Route> insert_trip(const DepotRouteTable& table, const Route& route, int j,
                                        NodeId d_r, const Trip& failed) {
  const int last = static_cast<int>(route.trips.size()) - 1;
  if (j < -1 || j > last) throw ValidationError("insertion index out of range");
  if (j >= 0 && route.trips[static_cast<std::size_t>(j)].end() != d_r) {
    throw ValidationError("insertion depot must be the end of the anchor trip");
  }
  std::vector<Trip> splice;
  if (j < last) {
    auto to = table.lookup(d_r, failed.start());
    auto back = table.lookup(failed.end(), d_r);
    if (!to || !back) return std::nullopt;
    splice = to->trips;
    splice.push_back(failed);
    splice.insert(splice.end(), back->trips.begin(), back->trips.end());
  } else {
    auto via_start = table.lookup(d_r, failed.start());
    auto via_end = table.lookup(d_r, failed.end());
    const Time ts = via_start ? via_start->time : Time::infinity();
    const Time te = via_end ? via_end->time : Time::infinity();
    if (ts.is_infinite() && te.is_infinite()) return std::nullopt;
    if (ts <= te) {
      splice = via_start->trips;
      splice.push_back(failed);
    } else {
      splice = via_end->trips;
      splice.push_back(reversed(failed));
    }
  }
  Route out = route;
  out.trips.insert(out.trips.begin() + (j + 1), splice.begin(), splice.end());
  return out;
}

// Best insertion of the failed trip into vehicle k's route; value is the
// resulting route time minus the current mission time. Earlier anchors win
// ties. nullopt when no anchor admits the trip.
inline std::optional<Bid> calc_bid(const AuctionContext& ctx, const Trip& failed, Time t, int k,
                                   const FleetPlan& plan, Time mission) {
  const Route& r = plan.routes[static_cast<std::size_t>(k)];
  std::optional<Bid> best;
  Time best_time = Time::infinity();
  for (const Anchor& a : insertion_anchors(ctx.inst, r, plan.recharge, t)) {
    auto cand = insert_trip(ctx.table, r, a.trip_index, a.depot, failed);
    if (!cand) continue;
    const Time rt = route_time(*cand, plan.recharge);
    if (rt < best_time) {
      best_time = rt;
      best = Bid{k, failed, rt - mission, std::move(*cand), a};
    }
  }
  return best;
}

struct AuctionLogEntry {
  int iteration = 0;
  Trip trip;
  int winner = 0;
  Anchor anchor;
  Time value;
  Time radius;
  int radius_rounds = 0;
};

struct AuctionLog {
  Time time;
  std::vector<AuctionLogEntry> entries;
};

namespace detail {

inline bool bid_precedes(const Bid& a, const Bid& b) {
  if (a.value != b.value) return a.value < b.value;
  if (a.vehicle != b.vehicle) return a.vehicle < b.vehicle;
  if (a.anchor.trip_index != b.anchor.trip_index) return a.anchor.trip_index < b.anchor.trip_index;
  return a.trip.nodes < b.trip.nodes;
}

}  // namespace detail

// Bids for one pooled trip, widening the search radius until some nearby
// vehicle can take it or the radius covers the whole graph.
struct RadiusSearch {
  std::vector<Bid> bids;
  Time radius;
  int rounds = 0;
};

inline RadiusSearch collect_bids(const AuctionContext& ctx, const FleetPlan& plan,
                                 const Trip& failed, Time t, Time mission,
                                 const AuctionConfig& cfg) {
  RadiusSearch out;
  Time r = cfg.initial_radius;
  while (true) {
    ++out.rounds;
    out.radius = r;
    for (int k : search_nearby(ctx, plan, failed, r, t)) {
      if (auto bid = calc_bid(ctx, failed, t, k, plan, mission)) out.bids.push_back(std::move(*bid));
    }
    if (!out.bids.empty() || r >= ctx.diameter) break;
    r += cfg.radius_step;
  }
  return out;
}

// One auction round: every pooled trip collects bids against the current
// mission time and the single lowest bid overall is committed.
inline AuctionLogEntry auction_step(const AuctionContext& ctx, FailedTripPool& pool, Time t,
                                    FleetPlan& plan, const AuctionConfig& cfg, int iteration) {
  const Time mission = mission_time(plan);
  std::optional<Bid> best;
  AuctionLogEntry entry;
  entry.iteration = iteration;
  for (const PooledTrip& p : pool.entries()) {
    RadiusSearch found = collect_bids(ctx, plan, p.trip, t, mission, cfg);
    if (found.bids.empty()) {
      std::ostringstream os;
      os << "unassignable failed trip (";
      for (std::size_t i = 0; i < p.trip.nodes.size(); ++i) os << (i ? " " : "") << p.trip.nodes[i];
      os << ')';
      throw InfeasibleError(os.str());
    }
    for (Bid& b : found.bids) {
      if (!best || detail::bid_precedes(b, *best)) {
        best = std::move(b);
        entry.radius = found.radius;
        entry.radius_rounds = found.rounds;
      }
    }
  }
  entry.trip = best->trip;
  entry.winner = best->vehicle;
  entry.anchor = best->anchor;
  entry.value = best->value;
  plan.routes[static_cast<std::size_t>(best->vehicle)] = std::move(best->candidate_route);
  pool.remove(entry.trip);
  return entry;
}

inline AuctionLog auction(const AuctionContext& ctx, FailedTripPool& pool, Time t, FleetPlan& plan,
                          const AuctionConfig& cfg) {
  validate(cfg);
  if (std::none_of(plan.active.begin(), plan.active.end(), [](bool a) { return a; })) {
    throw InfeasibleError("no active vehicle left to run the auction");
  }
  AuctionLog log;
  log.time = t;
  int iteration = 0;
  while (!pool.empty()) log.entries.push_back(auction_step(ctx, pool, t, plan, cfg, iteration++));
  return log;
}

// CSV: iteration,trip,winner,anchor_depot,bid,radius (winner 1-based).
inline std::string format_auction_csv(const std::vector<AuctionLog>& logs) {
  std::ostringstream os;
  os << "auction,time,iteration,trip,winner,anchor_depot,bid,radius\n";
  for (std::size_t a = 0; a < logs.size(); ++a) {
    for (const auto& e : logs[a].entries) {
      os << a << ',' << logs[a].time << ',' << e.iteration << ',';
      for (std::size_t i = 0; i < e.trip.nodes.size(); ++i) os << (i ? " " : "") << e.trip.nodes[i];
      os << ',' << e.winner + 1 << ',' << e.anchor.depot << ',' << e.value << ',' << e.radius
         << '\n';
    }
  }
  return os.str();
}

}  // namespace mdrpp
