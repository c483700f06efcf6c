#include <gtest/gtest.h>

#include "support.hpp"

using namespace mdrpp;
using support::u;

namespace {

struct World {
  Instance inst;
  DistanceTable dist;
  DepotRouteTable table;
  AuctionContext ctx;
  explicit World(Instance i) : inst(std::move(i)), dist(inst.graph), table(inst, dist), ctx(inst, dist, table) {}
  SimConfig config(WaitTime w) const { return SimConfig{w, AuctionConfig::defaults_for(inst)}; }
};

Instance two_depot_path() {
  return parse_instance(
      "NAME path\nNODES 3\nDEPOTS 1 3\nEDGES 2\n1 2 2\n2 3 2\nREQUIRED 2\n1 2\n2 3\nVEHICLES 2\n"
      "CAPACITY 10\nRECHARGE 1\n");
}

// Reference run that advances a clock in fixed steps. Every failure time and
// wait window must be a multiple of the step.
struct StepResult {
  FleetPlan plan;
  int auctions = 0;
};

StepResult step_simulate(const AuctionContext& ctx, FleetPlan plan, const std::map<int, Time>& failures,
                         WaitTime wait, Time step) {
  StepResult out;
  FailedTripPool pool;
  Time last_failure;
  for (const auto& [k, f] : failures) last_failure = std::max(last_failure, f);
  std::optional<Time> close;
  const AuctionConfig cfg = AuctionConfig::defaults_for(ctx.inst);
  for (Time t; t <= last_failure + wait.window; t += step) {
    for (const auto& [k, f] : failures) {
      if (f != t) continue;
      Route& r = plan.routes[static_cast<std::size_t>(k)];
      std::vector<Trip> kept;
      Time end;
      for (std::size_t j = 0; j < r.trips.size(); ++j) {
        end += r.trips[j].duration;
        if (end <= t && kept.size() == j) {
          kept.push_back(r.trips[j]);
        } else {
          auto e = required_edges_of_trip(ctx.inst.required, r.trips[j]);
          if (!e.empty()) pool.add(r.trips[j], e);
        }
        end += plan.recharge;
      }
      r.trips = kept;
      plan.active[static_cast<std::size_t>(k)] = false;
    }
    if (!pool.empty() && !close) close = wait.until_end ? last_failure : t + wait.window;
    if (close && *close == t) {
      auction(ctx, pool, t, plan, cfg);
      ++out.auctions;
      close.reset();
    }
  }
  out.plan = plan;
  return out;
}

}  // namespace

TEST(Simulate, NoFailuresLeavesPlanAlone) {
  World w(support::worked_example());
  const FleetPlan p = parse_plan("V1: (1 3 5)(5 7 8 5)\n", w.inst);
  const auto rep = simulate(w.ctx, p, FailureScenario{"none", {}}, w.config(WaitTime::of(Time{})));
  EXPECT_EQ(format_plan(rep.final_plan), format_plan(p));
  EXPECT_EQ(rep.beta_ca, u(11.8));
  EXPECT_EQ(rep.beta_initial, u(11.8));
  EXPECT_EQ(rep.auction_count(), 0);
  EXPECT_TRUE(rep.covered);
}

TEST(Simulate, SurvivorTakesFailedTrip) {
  World w(two_depot_path());
  const FleetPlan p = parse_plan("V1: (1 2 1)\nV2: (3 2 3)\n", w.inst);
  const auto rep = simulate(w.ctx, p, FailureScenario{"f", {{1, u(1)}}}, w.config(WaitTime::of(Time{})));
  EXPECT_EQ(format_plan(rep.final_plan), "V1: (1 2 1)(1 2 3)(3 2 3)\nV2:\n");
  EXPECT_EQ(rep.beta_ca, u(14));
  EXPECT_EQ(rep.auction_count(), 1);
  EXPECT_TRUE(rep.covered);
  EXPECT_TRUE(coverage_check(w.inst, rep));
}

TEST(Simulate, TripEndingAtFailureCounts) {
  World w(two_depot_path());
  const FleetPlan p = parse_plan("V1: (1 2 1)\nV2: (3 2 3)\n", w.inst);
  const auto rep = simulate(w.ctx, p, FailureScenario{"f", {{1, u(4)}}}, w.config(WaitTime::of(Time{})));
  EXPECT_EQ(rep.auction_count(), 0);
  EXPECT_EQ(format_plan(rep.final_plan), format_plan(p));
  EXPECT_FALSE(rep.final_plan.active[1]);
}

TEST(Simulate, LateFailurePoolsNothing) {
  World w(parse_instance(
      "NODES 4\nDEPOTS 1 3\nEDGES 3\n1 2 2\n2 3 2\n3 4 2\nREQUIRED 2\n1 2\n2 3\nVEHICLES 2\n"
      "CAPACITY 10\nRECHARGE 1\n"));
  const FleetPlan p = parse_plan("V1: (1 2 1)\nV2: (3 2 3)(3 4 3)\n", w.inst);
  const auto rep = simulate(w.ctx, p, FailureScenario{"f", {{1, u(6)}}}, w.config(WaitTime::end()));
  EXPECT_EQ(rep.auction_count(), 0);
  EXPECT_EQ(format_plan(rep.final_plan), "V1: (1 2 1)\nV2: (3 2 3)\n");
  EXPECT_TRUE(coverage_check(w.inst, rep));
}

TEST(Simulate, AllVehiclesFailing) {
  World w(two_depot_path());
  const FleetPlan p = parse_plan("V1: (1 2 1)\nV2: (3 2 3)\n", w.inst);
  EXPECT_THROW(simulate(w.ctx, p, FailureScenario{"f", {{0, u(1)}, {1, u(1)}}}, w.config(WaitTime::end())),
               InfeasibleError);
}

TEST(Coverage, DetectsMissingEdge) {
  World w(two_depot_path());
  const FleetPlan p = parse_plan("V1: (1 2 1)\nV2: (3 2 3)\n", w.inst);
  auto rep = simulate(w.ctx, p, FailureScenario{"f", {{1, u(1)}}}, w.config(WaitTime::of(Time{})));
  ASSERT_TRUE(coverage_check(w.inst, rep));
  rep.final_plan.routes[0].trips.resize(1);
  EXPECT_FALSE(coverage_check(w.inst, rep));
}

TEST(Coverage, FailureDuringFirstTrip) {
  World w(two_depot_path());
  const FleetPlan p = parse_plan("V1: (1 2 1)\nV2: (3 2 3)\n", w.inst);
  const auto rep = simulate(w.ctx, p, FailureScenario{"f", {{0, u(0.5)}}}, w.config(WaitTime::end()));
  EXPECT_TRUE(rep.final_plan.routes[0].trips.empty());
  EXPECT_TRUE(coverage_check(w.inst, rep));
  // Without the auction the failed trip would leave (1,2) uncovered.
  SimulationReport raw = rep;
  raw.final_plan = p;
  raw.final_plan.active[0] = false;
  EXPECT_FALSE(coverage_check(w.inst, raw));
}

TEST(Simulate, MatchesStepwiseReference) {
  std::mt19937_64 rng(5);
  support::RandomShape shape;
  shape.min_vehicles = 3;
  shape.max_vehicles = 4;
  shape.max_required = 6;
  const Time half = u(0.5);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    World w(support::random_instance(rng, shape));
    const FleetPlan p = generate_initial_plan(w.inst, support::light_sa(seed)).plan;
    std::map<int, Time> failures;
    const int nf = support::draw(rng, 1, w.inst.vehicle_count - 1);
    for (int i = 0; i < nf; ++i) {
      const int k = support::draw(rng, 0, w.inst.vehicle_count - 1);
      const Time y = p.completion_time(static_cast<std::size_t>(k));
      if (y <= Time{}) continue;
      failures[k] = half * support::draw(rng, 1, static_cast<int>(y.count() / half.count()));
    }
    for (WaitTime wt : {WaitTime::of(Time{}), WaitTime::of(u(1.5)), WaitTime::of(u(6)), WaitTime::end()}) {
      const auto rep = simulate(w.ctx, p, FailureScenario{"s", failures}, w.config(wt));
      const StepResult ref = step_simulate(w.ctx, p, failures, wt, half);
      EXPECT_EQ(format_plan(rep.final_plan), format_plan(ref.plan)) << serialize_instance(w.inst);
      EXPECT_EQ(rep.auction_count(), ref.auctions);
      EXPECT_EQ(rep.beta_ca, mission_time(ref.plan));
      EXPECT_TRUE(rep.covered);
      EXPECT_TRUE(coverage_check(w.inst, rep));
      for (const auto& [k, f] : failures) {
        EXPECT_LE(rep.final_plan.completion_time(static_cast<std::size_t>(k)), f);
      }
    }
  }
}

TEST(Simulate, AuctionCountsFollowWaitTime) {
  std::mt19937_64 rng(9);
  support::RandomShape shape;
  shape.min_vehicles = 4;
  shape.max_vehicles = 5;
  shape.max_required = 8;
  shape.max_nodes = 10;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    World w(support::random_instance(rng, shape));
    const FleetPlan p = generate_initial_plan(w.inst, support::light_sa(seed)).plan;
    for (const FailureScenario& s : create_failure_scenarios(w.inst, p, seed)) {
      if (s.failures.size() < 2) continue;
      const auto end_rep = simulate(w.ctx, p, s, w.config(WaitTime::end()));
      const auto zero_rep = simulate(w.ctx, p, s, w.config(WaitTime::of(Time{})));
      // With no wait, one auction per failure instant that pools something.
      FleetPlan scratch = p;
      FailedTripPool pool;
      std::map<Time, int> pooled_at;
      std::vector<std::pair<Time, int>> order;
      for (const auto& [k, f] : s.failures) order.emplace_back(f, k);
      std::sort(order.begin(), order.end());
      for (const auto& [f, k] : order) pooled_at[f] += apply_failure(w.inst, scratch, pool, k, f);
      const int instants = static_cast<int>(
          std::count_if(pooled_at.begin(), pooled_at.end(), [](const auto& e) { return e.second > 0; }));
      EXPECT_EQ(zero_rep.auction_count(), instants);
      EXPECT_EQ(end_rep.auction_count(), pool.empty() ? 0 : 1);
      int prev = zero_rep.auction_count();
      for (double tw : {0.5, 2.0, 5.0, 20.0, 1000.0}) {
        const int n = simulate(w.ctx, p, s, w.config(WaitTime::of(u(tw)))).auction_count();
        EXPECT_LE(n, prev);
        prev = n;
      }
      EXPECT_GE(prev, end_rep.auction_count());
      ++checked;
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(WaitTime, RejectsNegative) { EXPECT_THROW(WaitTime::of(u(-1)), ValidationError); }
