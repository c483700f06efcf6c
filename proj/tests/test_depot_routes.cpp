#include <gtest/gtest.h>

#include <functional>

#include "support.hpp"

using namespace mdrpp;
using support::u;

TEST(DepotRoutes, SelfRouteIsEmpty) {
  const Instance inst = support::worked_example();
  const DepotRouteTable table(inst);
  auto r = table.lookup(5, 5);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->time, Time{});
  EXPECT_TRUE(r->trips.empty());
}

TEST(DepotRoutes, WorkedExampleSingleTrip) {
  const Instance inst = support::worked_example();
  const DepotRouteTable table(inst);
  auto r = table.lookup(1, 5);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->time, u(6.2));
  ASSERT_EQ(r->trips.size(), 1u);
  EXPECT_EQ(r->trips[0].nodes, (std::vector<NodeId>{1, 3, 5}));
  EXPECT_TRUE(table.single_trip_complete());
}

TEST(DepotRoutes, ChainOfTwoHops) {
  // Depots 1, 2, 3 on a line, each neighbouring pair 0.9 C apart.
  const Instance inst = parse_instance(
      "NODES 3\nDEPOTS 1 2 3\nEDGES 2\n1 2 9\n2 3 9\nREQUIRED 1\n1 2\nVEHICLES 1\nCAPACITY 10\nRECHARGE 2.5\n");
  const DepotRouteTable table(inst);
  auto r = table.lookup(1, 3);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->time, u(18 + 2.5));
  ASSERT_EQ(r->trips.size(), 2u);
  EXPECT_EQ(r->trips[0].nodes, (std::vector<NodeId>{1, 2}));
  EXPECT_EQ(r->trips[1].nodes, (std::vector<NodeId>{2, 3}));
  EXPECT_FALSE(table.single_trip_complete());
}

TEST(DepotRoutes, UnreachablePairIsInfeasible) {
  const Instance inst = parse_instance(
      "NODES 3\nDEPOTS 1 3\nEDGES 2\n1 2 6\n2 3 6\nREQUIRED 1\n1 2\nVEHICLES 1\nCAPACITY 12\nRECHARGE 1\n");
  const DepotRouteTable ok(inst);
  EXPECT_TRUE(ok.lookup(1, 3));
  Instance tight = inst;
  tight.capacity = u(11);
  const DepotRouteTable table(tight);
  EXPECT_FALSE(table.lookup(1, 3));
  EXPECT_FALSE(table.lookup(3, 1));
  EXPECT_TRUE(table.time(1, 3).is_infinite());
}

TEST(DepotRoutes, TieBreaksTowardFewerTrips) {
  // 1 -> 3 directly costs 10; via depot 2 costs 4 + 0 + 6 = 10 with R_T = 0.
  const Instance inst = parse_instance(
      "NODES 4\nDEPOTS 1 2 3\nEDGES 3\n1 2 4\n2 3 6\n1 4 5\nREQUIRED 1\n1 2\nVEHICLES 1\n"
      "CAPACITY 10\nRECHARGE 0\n");
  const DepotRouteTable table(inst);
  auto r = table.lookup(1, 3);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->time, u(10));
  EXPECT_EQ(r->trips.size(), 1u);
}

namespace {

// Minimum over every simple depot sequence from a to b whose hops each fit
// in one trip.
Time brute_force(const Instance& inst, const DistanceTable& dist, NodeId a, NodeId b) {
  Time best = Time::infinity();
  std::vector<bool> used(static_cast<std::size_t>(inst.graph.node_count()) + 1, false);
  std::function<void(NodeId, Time, int)> go = [&](NodeId at, Time cost, int hops) {
    if (at == b) {
      best = std::min(best, cost);
      return;
    }
    for (NodeId d : inst.depots) {
      if (used[d] || dist.time(at, d) > inst.capacity) continue;
      used[d] = true;
      go(d, cost + dist.time(at, d) + (hops > 0 ? inst.recharge : Time{}), hops + 1);
      used[d] = false;
    }
  };
  used[a] = true;
  go(a, Time{}, 0);
  return a == b ? Time{} : best;
}

}  // namespace

TEST(DepotRoutes, MatchesBruteForceAndKeepsInvariants) {
  std::mt19937_64 rng(21);
  support::RandomShape shape;
  shape.min_nodes = 6;
  shape.max_nodes = 9;
  shape.min_depots = 2;
  shape.max_depots = 6;
  for (int trial = 0; trial < 150; ++trial) {
    Instance inst = support::random_instance(rng, shape);
    // Sometimes squeeze C so that multi-hop chains and gaps appear.
    if (trial % 2) inst.capacity = std::max(inst.graph.max_weight(), inst.capacity - Time::units(support::draw(rng, 0, 6)));
    const DistanceTable dist(inst.graph);
    const DepotRouteTable table(inst, dist);
    const std::size_t n = inst.depots.size();
    EXPECT_EQ(table.unique_entries(), n * (n - 1) / 2);
    for (NodeId a : inst.depots) {
      for (NodeId b : inst.depots) {
        const auto r = table.lookup(a, b);
        const Time expect = brute_force(inst, dist, a, b);
        if (expect.is_infinite()) {
          EXPECT_FALSE(r);
          continue;
        }
        ASSERT_TRUE(r);
        EXPECT_EQ(r->time, expect);
        EXPECT_EQ(r->time, table.time(b, a));
        Route route{0, r->trips};
        EXPECT_EQ(route_time(inst.graph, route, inst.recharge), r->time);
        NodeId at = a;
        for (const Trip& t : r->trips) {
          EXPECT_EQ(t.start(), at);
          EXPECT_LE(t.duration, inst.capacity);
          EXPECT_TRUE(inst.is_depot(t.end()));
          at = t.end();
        }
        EXPECT_EQ(at, b);
        auto back = table.lookup(b, a);
        ASSERT_TRUE(back);
        std::vector<NodeId> fwd, rev;
        for (const Trip& t : r->trips) fwd.insert(fwd.end(), t.nodes.begin(), t.nodes.end());
        for (const Trip& t : back->trips) rev.insert(rev.end(), t.nodes.begin(), t.nodes.end());
        std::reverse(rev.begin(), rev.end());
        EXPECT_EQ(fwd, rev);
      }
    }
    const DepotRouteTable again = DepotRouteTable::parse(table.serialize(), inst);
    EXPECT_EQ(again.serialize(), table.serialize());
  }
}

TEST(DepotRoutes, LookupOnNonDepotThrows) {
  const Instance inst = support::worked_example();
  const DepotRouteTable table(inst);
  EXPECT_THROW(table.lookup(1, 2), ValidationError);
}
