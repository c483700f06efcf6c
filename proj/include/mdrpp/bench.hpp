#pragma once

#include <chrono>
#include <optional>
#include <vector>

#include "mdrpp/depot_routes.hpp"
#include "mdrpp/exact.hpp"
#include "mdrpp/failures.hpp"
#include "mdrpp/metrics.hpp"
#include "mdrpp/planner.hpp"
#include "mdrpp/rescheduler.hpp"
#include "mdrpp/simulator.hpp"

namespace mdrpp {

struct BenchConfig {
  SaConfig sa;                 // sa.seed is overwritten from `seed`
  std::uint64_t seed = 1;
  WaitTime wait;
  std::optional<AuctionConfig> auction;
  OracleLimits limits;
  bool timing = false;         // execution-time columns stay "-" otherwise
};

struct BenchResult {
  PlannerResult sa;
  std::vector<FailureScenario> scenarios;
  std::vector<SimulationReport> reports;
  std::vector<ScenarioMetrics> rows;
};

// Plan, draw failure scenarios, simulate each one and, when the instance is
// small enough, solve it exactly with and without the failures. The planner
// uses `seed`, scenario creation `seed + 1`.
inline BenchResult run_bench(const Instance& inst, const BenchConfig& cfg) {
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [&](Clock::time_point t0) -> std::optional<double> {
    if (!cfg.timing) return std::nullopt;
    return std::chrono::duration<double>(Clock::now() - t0).count();
  };

  BenchResult out;
  const DistanceTable dist(inst.graph);
  const DepotRouteTable table(inst, dist);
  const AuctionContext ctx(inst, dist, table);

  SaConfig sa_cfg = cfg.sa;
  sa_cfg.seed = cfg.seed;
  auto t0 = Clock::now();
  out.sa = generate_initial_plan(inst, dist, table, sa_cfg);
  const auto et_sa = seconds_since(t0);

  std::optional<Time> beta_opt;
  std::optional<double> et_opt;
  t0 = Clock::now();
  try {
    beta_opt = exact_optimum(inst, nullptr, cfg.limits).beta_opt;
    et_opt = seconds_since(t0);
  } catch (const BudgetError&) {
  }

  ScenarioMetrics base;
  base.nodes = inst.graph.node_count();
  base.edges = static_cast<int>(inst.graph.edges().size());
  base.required = static_cast<int>(inst.required.size());
  base.capacity = inst.capacity;
  base.recharge = inst.recharge;
  base.vehicles = inst.vehicle_count;
  base.depots = static_cast<int>(inst.depots.size());
  base.beta_opt = beta_opt;
  base.et_opt = et_opt;
  base.beta_sa = out.sa.beta;
  base.et_sa = et_sa;

  const int k_mu = most_utilized_vehicle(out.sa.plan);
  const int n_trips = std::max<int>(1, static_cast<int>(out.sa.plan.routes[static_cast<std::size_t>(k_mu)].trips.size()));
  auto bound_for = [&](std::optional<Time> beta_opt_f) -> std::optional<Rational> {
    if (!beta_opt_f) return std::nullopt;
    return theoretical_bound(BoundInputs{n_trips, inst.vehicle_count, inst.capacity, inst.recharge, *beta_opt_f},
                             table.single_trip_complete());
  };

  if (inst.vehicle_count < 2) {
    ScenarioMetrics row = base;
    row.scenario = inst.name;
    row.beta_opt_f = beta_opt;
    row.et_opt_f = et_opt;
    row.beta_ca = out.sa.beta;
    row.et_ca = cfg.timing ? std::optional<double>(0.0) : std::nullopt;
    row.rho_bound = bound_for(beta_opt);
    out.rows.push_back(std::move(row));
    return out;
  }

  out.scenarios = create_failure_scenarios(inst, out.sa.plan, cfg.seed + 1);
  const SimConfig sim{cfg.wait, cfg.auction.value_or(AuctionConfig::defaults_for(inst))};
  for (const FailureScenario& s : out.scenarios) {
    ScenarioMetrics row = base;
    row.scenario = s.name;
    row.failures = static_cast<int>(s.failures.size());
    t0 = Clock::now();
    out.reports.push_back(simulate(ctx, out.sa.plan, s, sim));
    row.et_ca = seconds_since(t0);
    row.beta_ca = out.reports.back().beta_ca;
    if (beta_opt) {
      t0 = Clock::now();
      row.beta_opt_f = exact_optimum(inst, &s, cfg.limits).beta_opt;
      row.et_opt_f = seconds_since(t0);
    }
    row.rho_bound = bound_for(row.beta_opt_f);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace mdrpp
