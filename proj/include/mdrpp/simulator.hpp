#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mdrpp/failures.hpp"
#include "mdrpp/rescheduler.hpp"
#include "mdrpp/routing.hpp"

namespace mdrpp {

// Delay between the first pool-filling failure and the auction. `until_end`
// holds every auction back until the last failure.
struct WaitTime {
  bool until_end = false;
  Time window;

  static WaitTime end() { return WaitTime{true, Time{}}; }
  static WaitTime of(Time t) {
    if (t < Time{}) throw ValidationError("wait time must be non-negative");
    return WaitTime{false, t};
  }
};

struct SimConfig {
  WaitTime wait;
  AuctionConfig auction;
};

struct SimEvent {
  Time time;
  std::string what;
};

struct SimulationReport {
  FleetPlan final_plan;
  Time beta_initial;
  Time beta_ca;
  std::vector<AuctionLog> auction_logs;
  std::map<int, Time> failure_times;
  bool covered = false;
  std::vector<SimEvent> trace;

  int auction_count() const { return static_cast<int>(auction_logs.size()); }
};

// Marks vehicle k failed at time f: trips finished by f stay, every later
// trip is dropped and the required ones go to the pool. Returns the number of
// trips pooled. A trip ending exactly at f counts as finished.
inline int apply_failure(const Instance& inst, FleetPlan& plan, FailedTripPool& pool, int k,
                         Time f, std::vector<SimEvent>* trace = nullptr) {
  const auto kk = static_cast<std::size_t>(k);
  if (!plan.active[kk]) return 0;
  plan.active[kk] = false;
  if (std::none_of(plan.active.begin(), plan.active.end(), [](bool a) { return a; })) {
    throw InfeasibleError("all vehicles failed");
  }
  Route& r = plan.routes[kk];
  std::size_t keep = 0;
  Time clock;
  while (keep < r.trips.size() && clock + r.trips[keep].duration <= f) {
    clock += r.trips[keep].duration + plan.recharge;
    ++keep;
  }
  int pooled = 0;
  for (std::size_t j = keep; j < r.trips.size(); ++j) {
    auto edges = required_edges_of_trip(inst.required, r.trips[j]);
    if (edges.empty()) continue;
    pool.add(r.trips[j], std::move(edges));
    ++pooled;
  }
  if (trace) {
    trace->push_back({f, "V" + std::to_string(k + 1) + " fails; " + std::to_string(keep) +
                             " trip(s) completed, " + std::to_string(pooled) + " pooled"});
  }
  r.trips.resize(keep);
  return pooled;
}

// Event-driven mission run. Failures are processed in time order; each
// auction re-plans the pooled trips at the close of its wait window.
inline SimulationReport simulate(const AuctionContext& ctx, const FleetPlan& plan,
                                 const FailureScenario& scenario, const SimConfig& cfg) {
  validate(cfg.auction);
  SimulationReport report;
  report.final_plan = plan;
  report.beta_initial = mission_time(plan);
  report.failure_times = scenario.failures;

  std::vector<std::pair<Time, int>> events;
  for (const auto& [k, f] : scenario.failures) {
    if (k < 0 || k >= static_cast<int>(plan.size())) throw ValidationError("unknown vehicle in scenario");
    events.emplace_back(f, k);
  }
  std::sort(events.begin(), events.end());

  FleetPlan& fleet = report.final_plan;
  FailedTripPool pool;
  std::size_t idx = 0;
  auto fail_next = [&] {
    apply_failure(ctx.inst, fleet, pool, events[idx].second, events[idx].first, &report.trace);
    ++idx;
  };

  while (idx < events.size()) {
    const Time t0 = events[idx].first;
    while (idx < events.size() && events[idx].first == t0) fail_next();
    if (pool.empty()) continue;
    Time last = t0;
    const Time close = cfg.wait.until_end ? Time::infinity() : t0 + cfg.wait.window;
    while (idx < events.size() && events[idx].first <= close) {
      last = events[idx].first;
      fail_next();
    }
    const Time at = cfg.wait.until_end ? last : close;
    report.trace.push_back({at, "auction of " + std::to_string(pool.size()) + " trip(s)"});
    report.auction_logs.push_back(auction(ctx, pool, at, fleet, cfg.auction));
  }
  report.beta_ca = mission_time(fleet);
  report.trace.push_back({report.beta_ca, "mission complete"});

  std::set<EdgeKey> covered;
  for (std::size_t k = 0; k < fleet.size(); ++k) {
    for (const Trip& t : fleet.routes[k].trips) {
      for (EdgeKey e : required_edges_of_trip(ctx.inst.required, t)) covered.insert(e);
    }
  }
  report.covered = std::all_of(ctx.inst.required.begin(), ctx.inst.required.end(),
                               [&](EdgeKey e) { return covered.count(e) != 0; });
  return report;
}

// True iff every required edge lies on a trip that actually completes: any
// trip of a surviving vehicle, or a failed vehicle's trip ending by f_k.
inline bool coverage_check(const Instance& inst, const SimulationReport& report) {
  std::set<EdgeKey> covered;
  const FleetPlan& plan = report.final_plan;
  for (std::size_t k = 0; k < plan.size(); ++k) {
    const Route& r = plan.routes[k];
    auto failed = report.failure_times.find(static_cast<int>(k));
    Time clock;
    for (const Trip& t : r.trips) {
      const Time done = clock + t.duration;
      clock = done + plan.recharge;
      if (failed != report.failure_times.end() && !plan.active[k] && done > failed->second) break;
      for (EdgeKey e : required_edges_of_trip(inst.required, t)) covered.insert(e);
    }
  }
  return std::all_of(inst.required.begin(), inst.required.end(),
                     [&](EdgeKey e) { return covered.count(e) != 0; });
}

}  // namespace mdrpp
