#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "mdrpp/depot_routes.hpp"
#include "mdrpp/error.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/routing.hpp"

namespace mdrpp {

struct SaConfig {
  // Temperatures are in time units. Non-positive values select the defaults:
  // 0.3 * initial makespan and 1e-3 * initial temperature.
  double initial_temperature = 0.0;
  double cooling_rate = 0.95;
  int iterations_per_temperature = 200;
  double min_temperature = 0.0;
  int restarts = 10;
  std::uint64_t seed = 1;
};

struct PlannerResult {
  FleetPlan plan;
  Time beta;
  // Best makespan seen so far, sampled after every temperature level.
  std::vector<Time> best_trace;
};

inline Time plan_cost(const FleetPlan& plan) { return mission_time(plan); }

namespace planner_detail {

// One required edge assigned to a vehicle, in a chosen direction. `split`
// forces the edge onto a fresh trip even when the open trip could take it.
struct Task {
  int edge = 0;
  bool forward = true;
  bool split = false;
};

// Turns an ordered task list into a concrete multi-trip route: tasks are
// packed into the open trip while capacity allows, otherwise the trip is
// closed at the depot that best prepares the next task, repositioning
// through the depot route table when no depot in reach can start it.
class Decoder {
 public:
  Decoder(const Instance& inst, const DistanceTable& dist, const DepotRouteTable& table)
      : inst_(inst), dist_(dist), table_(table) {
    depots_ = inst.depots;
    std::sort(depots_.begin(), depots_.end());
    nearest_.assign(static_cast<std::size_t>(inst.graph.node_count()) + 1, {Time::infinity(), 0});
    for (NodeId u = 1; u <= inst.graph.node_count(); ++u) {
      for (NodeId d : depots_) {
        if (dist.time(u, d) < nearest_[u].first) nearest_[u] = {dist.time(u, d), d};
      }
    }
  }

  std::optional<Route> decode(int vehicle, const std::vector<Task>& tasks) const {
    Route route{vehicle, {}};
    NodeId depot = inst_.start_depots[static_cast<std::size_t>(vehicle)];
    std::vector<NodeId> walk;
    Time w;
    const Time cap = inst_.capacity;

    auto extend = [&](NodeId to) {
      const NodeId from = walk.back();
      if (from == to) return;
      w += dist_.time(from, to);
      auto p = dist_.path(from, to);
      walk.insert(walk.end(), p.begin() + 1, p.end());
    };
    auto close_at = [&](NodeId x) {
      extend(x);
      route.trips.push_back(Trip{walk, w});
      walk.clear();
      w = Time{};
      depot = x;
    };

    for (const Task& task : tasks) {
      const EdgeKey e = inst_.required[static_cast<std::size_t>(task.edge)];
      const NodeId a = task.forward ? e.first : e.second;
      const NodeId b = task.forward ? e.second : e.first;
      const Time te = *inst_.graph.weight(a, b);

      if (!walk.empty() && !task.split) {
        const NodeId u = walk.back();
        if (w + dist_.time(u, a) + te + nearest_[b].first <= cap) {
          extend(a);
          walk.push_back(b);
          w += te;
          continue;
        }
      }
      if (!walk.empty()) {
        const NodeId u = walk.back();
        NodeId best_x = 0;
        Time best = Time::infinity();
        for (NodeId x : depots_) {
          if (w + dist_.time(u, x) > cap) continue;
          const Time s = start_cost(x, a, b, te).first;
          if (s.is_infinite()) continue;
          const Time score = dist_.time(u, x) + inst_.recharge + s;
          if (score < best) {
            best = score;
            best_x = x;
          }
        }
        if (best_x == 0) return std::nullopt;
        close_at(best_x);
      }
      const auto [cost, y] = start_cost(depot, a, b, te);
      if (cost.is_infinite()) return std::nullopt;
      if (y != depot) {
        auto hop = table_.lookup(depot, y);
        route.trips.insert(route.trips.end(), hop->trips.begin(), hop->trips.end());
        depot = y;
      }
      walk = {y};
      w = Time{};
      extend(a);
      walk.push_back(b);
      w += te;
    }
    if (!walk.empty()) close_at(nearest_[walk.back()].second);
    return route;
  }

 private:
  // Cheapest way to begin a trip that serves (a,b) when standing at depot x:
  // optional repositioning to depot y (plus recharge) then travel to a.
  std::pair<Time, NodeId> start_cost(NodeId x, NodeId a, NodeId b, Time te) const {
    Time best = Time::infinity();
    NodeId best_y = 0;
    for (NodeId y : depots_) {
      if (dist_.time(y, a) + te + nearest_[b].first > inst_.capacity) continue;
      Time c = dist_.time(y, a);
      if (y != x) {
        const Time hop = table_.time(x, y);
        if (hop.is_infinite()) continue;
        c += hop + inst_.recharge;
      }
      if (c < best) {
        best = c;
        best_y = y;
      }
    }
    return {best, best_y};
  }

  const Instance& inst_;
  const DistanceTable& dist_;
  const DepotRouteTable& table_;
  std::vector<NodeId> depots_;
  std::vector<std::pair<Time, NodeId>> nearest_;
};

struct Cost {
  Time makespan = Time::infinity();
  Time total = Time::infinity();

  double energy() const {
    return static_cast<double>(makespan.count()) + 0.01 * static_cast<double>(total.count());
  }
  bool operator<(const Cost& o) const {
    return makespan != o.makespan ? makespan < o.makespan : total < o.total;
  }
};

class Annealer {
 public:
  Annealer(const Instance& inst, const Decoder& decoder)
      : inst_(inst), decoder_(decoder), k_(static_cast<std::size_t>(inst.vehicle_count)) {}

  // Greedy insertion in random edge order; each edge goes to the vehicle and
  // direction giving the smallest resulting makespan.
  void construct(std::mt19937_64& rng) {
    tasks_.assign(k_, {});
    routes_.assign(k_, Route{});
    times_.assign(k_, Time{});
    for (std::size_t v = 0; v < k_; ++v) routes_[v] = Route{static_cast<int>(v), {}};
    std::vector<int> order(inst_.required.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::shuffle(order.begin(), order.end(), rng);
    for (int edge : order) {
      std::optional<std::tuple<Cost, std::size_t, bool>> best;
      Route best_route;
      for (std::size_t v = 0; v < k_; ++v) {
        for (bool forward : {true, false}) {
          auto tasks = tasks_[v];
          tasks.push_back(Task{edge, forward, false});
          auto r = decoder_.decode(static_cast<int>(v), tasks);
          if (!r) continue;
          auto times = times_;
          times[v] = route_time(*r, inst_.recharge);
          Cost c = cost_of(times);
          if (!best || c < std::get<0>(*best)) {
            best = std::tuple{c, v, forward};
            best_route = std::move(*r);
          }
        }
      }
      if (!best) {
        const EdgeKey e = inst_.required[static_cast<std::size_t>(edge)];
        throw InfeasibleError("required edge (" + std::to_string(e.first) + "," +
                              std::to_string(e.second) +
                              ") unreachable within capacity from every depot");
      }
      const auto [c, v, forward] = *best;
      tasks_[v].push_back(Task{edge, forward, false});
      routes_[v] = std::move(best_route);
      times_[v] = route_time(routes_[v], inst_.recharge);
    }
    cost_ = cost_of(times_);
  }

  const Cost& cost() const { return cost_; }
  const std::vector<Route>& routes() const { return routes_; }

  // Proposes one random neighbour and applies Metropolis acceptance.
  void step(std::mt19937_64& rng, double temperature) {
    auto tasks = tasks_;
    std::vector<std::size_t> touched;
    if (!propose(rng, tasks, touched)) return;
    auto times = times_;
    std::vector<Route> fresh;
    for (std::size_t v : touched) {
      auto r = decoder_.decode(static_cast<int>(v), tasks[v]);
      if (!r) return;
      times[v] = route_time(*r, inst_.recharge);
      fresh.push_back(std::move(*r));
    }
    const Cost c = cost_of(times);
    const double delta = c.energy() - cost_.energy();
    bool accept = delta <= 0.0;
    if (!accept && temperature > 0.0) {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      accept = u(rng) < std::exp(-delta / temperature);
    }
    if (!accept) return;
    tasks_ = std::move(tasks);
    times_ = std::move(times);
    for (std::size_t i = 0; i < touched.size(); ++i) routes_[touched[i]] = std::move(fresh[i]);
    cost_ = c;
  }

 private:
  Cost cost_of(const std::vector<Time>& times) const {
    Cost c{Time{}, Time{}};
    for (Time t : times) {
      c.makespan = std::max(c.makespan, t);
      c.total += t;
    }
    return c;
  }

  std::pair<std::size_t, std::size_t> pick_task(std::mt19937_64& rng,
                                                const std::vector<std::vector<Task>>& tasks) const {
    std::size_t total = 0;
    for (const auto& t : tasks) total += t.size();
    std::size_t idx = std::uniform_int_distribution<std::size_t>(0, total - 1)(rng);
    for (std::size_t v = 0; v < tasks.size(); ++v) {
      if (idx < tasks[v].size()) return {v, idx};
      idx -= tasks[v].size();
    }
    return {0, 0};
  }

  // Neighbourhood: relocate an edge to another vehicle/position, swap two
  // edges, flip an edge's direction, or toggle a trip break before an edge
  // (which re-splices the trip through a depot).
  bool propose(std::mt19937_64& rng, std::vector<std::vector<Task>>& tasks,
               std::vector<std::size_t>& touched) const {
    const int kind = std::uniform_int_distribution<int>(0, 3)(rng);
    const auto [v, i] = pick_task(rng, tasks);
    switch (kind) {
      case 0: {
        const Task t = tasks[v][i];
        tasks[v].erase(tasks[v].begin() + static_cast<long>(i));
        const std::size_t w = std::uniform_int_distribution<std::size_t>(0, k_ - 1)(rng);
        const std::size_t pos = std::uniform_int_distribution<std::size_t>(0, tasks[w].size())(rng);
        tasks[w].insert(tasks[w].begin() + static_cast<long>(pos), t);
        touched = {v};
        if (w != v) touched.push_back(w);
        return true;
      }
      case 1: {
        const auto [w, j] = pick_task(rng, tasks);
        if (w == v && j == i) return false;
        std::swap(tasks[v][i], tasks[w][j]);
        touched = {v};
        if (w != v) touched.push_back(w);
        return true;
      }
      case 2:
        tasks[v][i].forward = !tasks[v][i].forward;
        touched = {v};
        return true;
      default:
        tasks[v][i].split = !tasks[v][i].split;
        touched = {v};
        return true;
    }
  }

  const Instance& inst_;
  const Decoder& decoder_;
  std::size_t k_;
  std::vector<std::vector<Task>> tasks_;
  std::vector<Route> routes_;
  std::vector<Time> times_;
  Cost cost_;
};

}  // namespace planner_detail

inline void validate(const SaConfig& cfg) {
  if (!(cfg.cooling_rate > 0.0 && cfg.cooling_rate < 1.0)) {
    throw ValidationError("cooling rate must lie in (0,1)");
  }
  if (cfg.iterations_per_temperature < 1) throw ValidationError("iterations must be positive");
  if (cfg.restarts < 1) throw ValidationError("restarts must be positive");
  if (cfg.initial_temperature < 0.0 || cfg.min_temperature < 0.0) {
    throw ValidationError("temperatures must be positive");
  }
}

// Failure-free initial plan by simulated annealing on the makespan. Restart r
// draws from a generator seeded with (seed, r); the lowest-cost restart wins,
// earlier restarts winning ties.
inline PlannerResult generate_initial_plan(const Instance& inst, const DistanceTable& dist,
                                           const DepotRouteTable& table, const SaConfig& cfg) {
  validate(cfg);
  planner_detail::Decoder decoder(inst, dist, table);
  PlannerResult result;
  std::optional<planner_detail::Cost> best;
  std::vector<Route> best_routes;

  for (int restart = 0; restart < cfg.restarts; ++restart) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(restart)};
    std::mt19937_64 rng(seq);
    planner_detail::Annealer sa(inst, decoder);
    sa.construct(rng);
    auto consider = [&](const planner_detail::Annealer& a) {
      if (!best || a.cost() < *best) {
        best = a.cost();
        best_routes = a.routes();
      }
    };
    consider(sa);

    const double beta0 = sa.cost().makespan.as_units();
    const double t0 = cfg.initial_temperature > 0.0 ? cfg.initial_temperature : 0.3 * beta0;
    const double t_min = cfg.min_temperature > 0.0 ? cfg.min_temperature : 1e-3 * t0;
    // Temperatures are converted to ticks to match the energy scale.
    const double ticks = static_cast<double>(Time::kTicksPerUnit);
    for (double temp = t0; temp > t_min && temp > 0.0; temp *= cfg.cooling_rate) {
      for (int it = 0; it < cfg.iterations_per_temperature; ++it) {
        sa.step(rng, temp * ticks);
        consider(sa);
      }
      result.best_trace.push_back(best->makespan);
    }
    if (result.best_trace.empty() || result.best_trace.back() != best->makespan) {
      result.best_trace.push_back(best->makespan);
    }
  }

  result.plan = FleetPlan::empty_for(inst);
  result.plan.routes = std::move(best_routes);
  result.beta = mission_time(result.plan);
  return result;
}

inline PlannerResult generate_initial_plan(const Instance& inst, const SaConfig& cfg) {
  DistanceTable dist(inst.graph);
  DepotRouteTable table(inst, dist);
  return generate_initial_plan(inst, dist, table, cfg);
}

}  // namespace mdrpp
