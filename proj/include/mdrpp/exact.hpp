#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <queue>
#include <sstream>
#include <string>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/failures.hpp"
#include "mdrpp/graph.hpp"
#include "mdrpp/instance.hpp"
#include "mdrpp/routing.hpp"

namespace mdrpp {

struct OracleLimits {
  int max_required = 4;
  int max_vehicles = 3;
  std::size_t max_states = 4'000'000;
};

struct OracleResult {
  Time beta_opt;
  FleetPlan plan;
  std::size_t walk_states = 0;   // (node, covered-set) labels settled
  std::size_t route_states = 0;  // (depot, covered-set) labels settled
  std::size_t assignments = 0;   // edge-to-vehicle assignments searched
};

namespace exact_detail {

// Cheapest walks from one depot, labelled by (node, set of required edges
// traversed so far). Walks are unrestricted, so this is exact.
struct WalkSearch {
  std::size_t masks = 0;
  std::vector<Time> dist;
  std::vector<std::size_t> pred;  // predecessor state, npos at the source

  std::size_t state(NodeId n, unsigned mask) const { return static_cast<std::size_t>(n) * masks + mask; }

  std::vector<NodeId> walk_to(NodeId n, unsigned mask) const {
    std::vector<NodeId> nodes;
    for (std::size_t s = state(n, mask); s != npos; s = pred[s]) nodes.push_back(static_cast<NodeId>(s / masks));
    std::reverse(nodes.begin(), nodes.end());
    return nodes;
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

inline WalkSearch search_walks(const Instance& inst, NodeId source) {
  const std::size_t m = inst.required.size();
  WalkSearch ws;
  ws.masks = std::size_t{1} << m;
  const std::size_t n = static_cast<std::size_t>(inst.graph.node_count()) + 1;
  ws.dist.assign(n * ws.masks, Time::infinity());
  ws.pred.assign(n * ws.masks, WalkSearch::npos);
  using Item = std::pair<Time, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  ws.dist[ws.state(source, 0)] = Time{};
  queue.push({Time{}, ws.state(source, 0)});
  while (!queue.empty()) {
    auto [d, s] = queue.top();
    queue.pop();
    if (d > ws.dist[s] || d > inst.capacity) continue;
    const auto u = static_cast<NodeId>(s / ws.masks);
    const auto mask = static_cast<unsigned>(s % ws.masks);
    for (const Arc& a : inst.graph.neighbors(u)) {
      const int idx = inst.required_index(EdgeKey(u, a.to));
      const unsigned next_mask = idx >= 0 ? mask | (1u << idx) : mask;
      const std::size_t t = ws.state(a.to, next_mask);
      const Time nd = d + a.weight;
      if (nd < ws.dist[t]) {
        ws.dist[t] = nd;
        ws.pred[t] = s;
        queue.push({nd, t});
      }
    }
  }
  return ws;
}

}  // namespace exact_detail

// Exact optimum over all plans (any walks, any number of trips) by dynamic
// programming: cheapest single trips per (depot pair, covered set), cheapest
// routes per (start depot, covered set), then every assignment of required
// edges to vehicles. With a scenario, failed vehicle k must finish its whole
// route by f_k.
inline OracleResult exact_optimum(const Instance& inst, const FailureScenario* scenario = nullptr,
                                  const OracleLimits& limits = {}) {
  const int m = static_cast<int>(inst.required.size());
  const int k_count = inst.vehicle_count;
  if (m > limits.max_required || k_count > limits.max_vehicles) {
    throw BudgetError("oracle out of budget: " + std::to_string(m) + " required edges, " +
                      std::to_string(k_count) + " vehicles (limits " +
                      std::to_string(limits.max_required) + ", " +
                      std::to_string(limits.max_vehicles) + ")");
  }
  const std::size_t masks = std::size_t{1} << m;
  std::vector<NodeId> depots = inst.depots;
  std::sort(depots.begin(), depots.end());
  const std::size_t nd = depots.size();
  if (nd * static_cast<std::size_t>(inst.graph.node_count() + 1) * masks > limits.max_states) {
    throw BudgetError("oracle out of budget: state space too large");
  }

  OracleResult result;
  std::vector<exact_detail::WalkSearch> walks;
  for (NodeId d : depots) {
    walks.push_back(exact_detail::search_walks(inst, d));
    for (Time t : walks.back().dist) result.walk_states += t.is_infinite() ? 0 : 1;
  }

  // Route search per start depot over (depot, covered set); each trip costs
  // its time plus one recharge, the final recharge is subtracted at the end.
  struct RouteSearch {
    std::vector<Time> dist;
    std::vector<std::size_t> pred;
    std::vector<std::pair<std::size_t, unsigned>> via;  // (source depot idx, trip mask)
  };
  auto route_search = [&](std::size_t start) {
    RouteSearch rs;
    rs.dist.assign(nd * masks, Time::infinity());
    rs.pred.assign(nd * masks, exact_detail::WalkSearch::npos);
    rs.via.assign(nd * masks, {0, 0});
    using Item = std::pair<Time, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    rs.dist[start * masks] = Time{};
    queue.push({Time{}, start * masks});
    while (!queue.empty()) {
      auto [d, s] = queue.top();
      queue.pop();
      if (d > rs.dist[s]) continue;
      ++result.route_states;
      const std::size_t di = s / masks;
      const auto mask = static_cast<unsigned>(s % masks);
      const auto& ws = walks[di];
      for (std::size_t ei = 0; ei < nd; ++ei) {
        for (unsigned tm = 0; tm < masks; ++tm) {
          if (ei == di && tm == 0) continue;
          const Time trip = ws.dist[ws.state(depots[ei], tm)];
          if (trip > inst.capacity) continue;
          const std::size_t t = ei * masks + (mask | tm);
          const Time cand = d + trip + inst.recharge;
          if (cand < rs.dist[t]) {
            rs.dist[t] = cand;
            rs.pred[t] = s;
            rs.via[t] = {di, tm};
            queue.push({cand, t});
          }
        }
      }
    }
    return rs;
  };

  std::vector<std::size_t> start_idx(static_cast<std::size_t>(k_count));
  for (int k = 0; k < k_count; ++k) {
    const NodeId b = inst.start_depots[static_cast<std::size_t>(k)];
    start_idx[static_cast<std::size_t>(k)] =
        static_cast<std::size_t>(std::lower_bound(depots.begin(), depots.end(), b) - depots.begin());
  }
  std::vector<std::optional<RouteSearch>> searches(nd);
  // best[start][mask] = (route time, end state) over all covered supersets.
  std::vector<std::vector<std::pair<Time, std::size_t>>> best(nd);
  for (std::size_t si : start_idx) {
    if (searches[si]) continue;
    searches[si] = route_search(si);
    const RouteSearch& rs = *searches[si];
    std::vector<std::pair<Time, std::size_t>> exact(masks, {Time::infinity(), 0});
    exact[0] = {Time{}, exact_detail::WalkSearch::npos};
    for (std::size_t s = 0; s < nd * masks; ++s) {
      if (rs.dist[s].is_infinite() || rs.pred[s] == exact_detail::WalkSearch::npos) continue;
      const Time rt = rs.dist[s] - inst.recharge;
      const auto mask = s % masks;
      if (rt < exact[mask].first) exact[mask] = {rt, s};
    }
    best[si].assign(masks, {Time::infinity(), 0});
    for (std::size_t want = 0; want < masks; ++want) {
      for (std::size_t have = 0; have < masks; ++have) {
        if ((have & want) == want && exact[have].first < best[si][want].first) {
          best[si][want] = exact[have];
        }
      }
    }
  }

  std::vector<Time> limit(static_cast<std::size_t>(k_count), Time::infinity());
  if (scenario) {
    for (const auto& [k, f] : scenario->failures) limit[static_cast<std::size_t>(k)] = f;
  }

  // Enumerate owner[i] in [0, K) for every required edge.
  std::vector<int> owner(static_cast<std::size_t>(m), 0);
  std::optional<std::pair<Time, Time>> best_cost;
  std::vector<int> best_owner;
  while (true) {
    ++result.assignments;
    std::vector<std::size_t> mask(static_cast<std::size_t>(k_count), 0);
    for (int i = 0; i < m; ++i) mask[static_cast<std::size_t>(owner[static_cast<std::size_t>(i)])] |= std::size_t{1} << i;
    Time makespan, total;
    bool ok = true;
    for (int k = 0; k < k_count && ok; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      const Time c = best[start_idx[kk]][mask[kk]].first;
      if (c.is_infinite() || c > limit[kk]) ok = false;
      makespan = std::max(makespan, c);
      total += c;
    }
    if (ok && (!best_cost || std::pair{makespan, total} < *best_cost)) {
      best_cost = std::pair{makespan, total};
      best_owner = owner;
    }
    int i = 0;
    while (i < m && ++owner[static_cast<std::size_t>(i)] == k_count) owner[static_cast<std::size_t>(i++)] = 0;
    if (i == m) break;
  }
  if (!best_cost) throw InfeasibleError("no feasible plan covers every required edge");

  result.plan = FleetPlan::empty_for(inst);
  for (int k = 0; k < k_count; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    std::size_t want = 0;
    for (int i = 0; i < m; ++i) {
      if (best_owner[static_cast<std::size_t>(i)] == k) want |= std::size_t{1} << i;
    }
    const std::size_t si = start_idx[kk];
    std::size_t s = best[si][want].second;
    std::vector<Trip> trips;
    if (want != 0 || s != exact_detail::WalkSearch::npos) {
      const RouteSearch& rs = *searches[si];
      while (s != exact_detail::WalkSearch::npos && rs.pred[s] != exact_detail::WalkSearch::npos) {
        const auto [from, tm] = rs.via[s];
        const NodeId to = depots[s / masks];
        auto nodes = walks[from].walk_to(to, tm);
        trips.push_back(make_trip(inst.graph, std::move(nodes)));
        s = rs.pred[s];
      }
      std::reverse(trips.begin(), trips.end());
    }
    result.plan.routes[kk].trips = std::move(trips);
  }
  result.beta_opt = mission_time(result.plan);
  return result;
}

// Text of the mixed-integer model in LP file format: minimise the makespan
// subject to the thirteen constraint families (the failure family only when
// a scenario is given). Subtour rows enumerate every subset of non-depot
// nodes, so the node count outside depots is capped.
inline std::string emit_milp(const Instance& inst, const FailureScenario* scenario = nullptr,
                             int max_subtour_nodes = 12) {
  const Graph& g = inst.graph;
  std::vector<NodeId> others;
  for (NodeId n = 1; n <= g.node_count(); ++n) {
    if (!inst.is_depot(n)) others.push_back(n);
  }
  if (static_cast<int>(others.size()) > max_subtour_nodes) {
    throw ValidationError("subtour enumeration bound exceeded: " + std::to_string(others.size()) +
                          " non-depot nodes (limit " + std::to_string(max_subtour_nodes) + ")");
  }
  const int K = inst.vehicle_count;
  const int F = inst.max_trips;
  const long long big_m = 2 * static_cast<long long>(g.edges().size()) + 1;

  struct ArcRef {
    NodeId i, j;
    Time t;
  };
  std::vector<ArcRef> arcs;
  for (const Edge& e : g.edges()) {
    arcs.push_back({e.u, e.v, e.weight});
    arcs.push_back({e.v, e.u, e.weight});
  }
  auto x = [](int k, int f, NodeId i, NodeId j) {
    return "x_" + std::to_string(k) + "_" + std::to_string(f) + "_" + std::to_string(i) + "_" +
           std::to_string(j);
  };
  auto y = [](int k, int f, NodeId d) {
    return "y_" + std::to_string(k) + "_" + std::to_string(f) + "_" + std::to_string(d);
  };
  auto z = [](int k, int f) { return "z_" + std::to_string(k) + "_" + std::to_string(f); };

  std::ostringstream os;
  os << "\\ makespan model for " << inst.name << '\n';
  os << "Minimize\n obj: beta\nSubject To\n";

  // Writes `name: terms op rhs`, skipping rows whose terms are all zero.
  auto row = [&os](const std::string& name, const std::vector<std::pair<std::string, std::string>>& terms,
                   const std::string& op, const std::string& rhs) {
    if (terms.empty()) return;
    os << ' ' << name << ':';
    for (const auto& [coef, var] : terms) {
      if (coef == "1") os << " + " << var;
      else if (coef == "-1") os << " - " << var;
      else if (!coef.empty() && coef[0] == '-') os << " - " << coef.substr(1) << ' ' << var;
      else os << " + " << coef << ' ' << var;
    }
    os << ' ' << op << ' ' << rhs << '\n';
  };
  using Terms = std::vector<std::pair<std::string, std::string>>;
  const std::string R = format_time(inst.recharge);

  for (int k = 1; k <= K; ++k) {
    const NodeId b = inst.start_depots[static_cast<std::size_t>(k - 1)];
    Terms t;
    for (const Arc& a : g.neighbors(b)) t.emplace_back("1", x(k, 1, b, a.to));
    t.emplace_back("-1", z(k, 1));
    row("c1_" + std::to_string(k), t, "=", "0");
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f < F; ++f) {
      row("c2_" + std::to_string(k) + "_" + std::to_string(f), {{"1", z(k, f)}, {"-1", z(k, f + 1)}}, ">=", "0");
    }
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      for (NodeId d : inst.depots) {
        Terms t;
        for (const Arc& a : g.neighbors(d)) t.emplace_back("1", x(k, f, a.to, d));
        t.emplace_back("-1", y(k, f, d));
        row("c3_" + std::to_string(k) + "_" + std::to_string(f) + "_" + std::to_string(d), t, "=", "0");
      }
    }
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 2; f <= F; ++f) {
      for (NodeId d : inst.depots) {
        Terms t{{"1", y(k, f - 1, d)}};
        for (const Arc& a : g.neighbors(d)) t.emplace_back("-1", x(k, f, d, a.to));
        row("c4_" + std::to_string(k) + "_" + std::to_string(f) + "_" + std::to_string(d), t, ">=", "0");
      }
    }
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      Terms t{{"1", z(k, f)}};
      for (NodeId d : inst.depots) t.emplace_back("-1", y(k, f, d));
      row("c5_" + std::to_string(k) + "_" + std::to_string(f), t, "=", "0");
    }
  }
  auto route_terms = [&](int k) {
    Terms t;
    for (int f = 1; f <= F; ++f) {
      for (const ArcRef& a : arcs) t.emplace_back(format_time(a.t), x(k, f, a.i, a.j));
      if (inst.recharge != Time{}) t.emplace_back(R, z(k, f));
    }
    return t;
  };
  for (int k = 1; k <= K; ++k) {
    Terms t = route_terms(k);
    t.emplace_back("-1", "beta");
    row("c6_" + std::to_string(k), t, "<=", R);
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      Terms t;
      for (const ArcRef& a : arcs) t.emplace_back(format_time(a.t), x(k, f, a.i, a.j));
      row("c7_" + std::to_string(k) + "_" + std::to_string(f), t, "<=", format_time(inst.capacity));
    }
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      Terms t;
      for (const ArcRef& a : arcs) {
        const int c = (inst.is_depot(a.i) ? 1 : 0) - (inst.is_depot(a.j) ? 1 : 0);
        if (c != 0) t.emplace_back(std::to_string(c), x(k, f, a.i, a.j));
      }
      row("c8_" + std::to_string(k) + "_" + std::to_string(f), t, "=", "0");
    }
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      for (NodeId i : others) {
        Terms t;
        for (const Arc& a : g.neighbors(i)) t.emplace_back("1", x(k, f, i, a.to));
        for (const Arc& a : g.neighbors(i)) t.emplace_back("-1", x(k, f, a.to, i));
        row("c9_" + std::to_string(k) + "_" + std::to_string(f) + "_" + std::to_string(i), t, "=", "0");
      }
    }
  }
  for (EdgeKey e : inst.required) {
    Terms t;
    for (int k = 1; k <= K; ++k) {
      for (int f = 1; f <= F; ++f) {
        t.emplace_back("1", x(k, f, e.first, e.second));
        t.emplace_back("1", x(k, f, e.second, e.first));
      }
    }
    row("c10_" + std::to_string(e.first) + "_" + std::to_string(e.second), t, ">=", "1");
  }
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      Terms t;
      for (const ArcRef& a : arcs) t.emplace_back("1", x(k, f, a.i, a.j));
      t.emplace_back("-" + std::to_string(big_m), z(k, f));
      row("c11_" + std::to_string(k) + "_" + std::to_string(f), t, "<=", "0");
    }
  }
  const std::size_t subsets = std::size_t{1} << others.size();
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      for (std::size_t s = 1; s < subsets; ++s) {
        std::vector<bool> in(static_cast<std::size_t>(g.node_count()) + 1, false);
        for (std::size_t b = 0; b < others.size(); ++b) {
          if (s >> b & 1u) in[static_cast<std::size_t>(others[b])] = true;
        }
        Terms cut;
        for (const ArcRef& a : arcs) {
          if (in[static_cast<std::size_t>(a.i)] != in[static_cast<std::size_t>(a.j)]) {
            cut.emplace_back("1", x(k, f, a.i, a.j));
          }
        }
        for (const ArcRef& a : arcs) {
          if (!in[static_cast<std::size_t>(a.i)] || !in[static_cast<std::size_t>(a.j)]) continue;
          Terms t = cut;
          t.emplace_back("-2", x(k, f, a.i, a.j));
          row("c12_" + std::to_string(k) + "_" + std::to_string(f) + "_s" + std::to_string(s) + "_" +
                  std::to_string(a.i) + "_" + std::to_string(a.j),
              t, ">=", "0");
        }
      }
    }
  }
  if (scenario) {
    for (const auto& [k0, f] : scenario->failures) {
      row("c13_" + std::to_string(k0 + 1), route_terms(k0 + 1), "<=", format_time(f + inst.recharge));
    }
  }

  os << "Bounds\n beta >= 0\nBinaries\n";
  for (int k = 1; k <= K; ++k) {
    for (int f = 1; f <= F; ++f) {
      for (const ArcRef& a : arcs) os << ' ' << x(k, f, a.i, a.j) << '\n';
      for (NodeId d : inst.depots) os << ' ' << y(k, f, d) << '\n';
      os << ' ' << z(k, f) << '\n';
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace mdrpp
