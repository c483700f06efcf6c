#pragma once

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "mdrpp/mdrpp.hpp"

namespace support {

using namespace mdrpp;

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string data_path(const std::string& name) { return std::string(MDRPP_TEST_DATA) + "/" + name; }

inline Instance worked_example() { return parse_instance(read_file(data_path("worked_example.txt"))); }

inline Time u(double v) { return Time::ticks(static_cast<std::int64_t>(v * 1000 + (v < 0 ? -0.5 : 0.5))); }

struct RandomShape {
  int min_nodes = 4;
  int max_nodes = 8;
  int max_extra_edges = 5;
  int min_depots = 1;
  int max_depots = 3;
  int max_required = 4;
  int min_vehicles = 1;
  int max_vehicles = 3;
  int max_weight = 9;
  int max_recharge = 6;
};

inline int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Small random connected instance with integer weights. C is raised until
// every required edge fits in one depot-to-depot trip and every depot pair is
// joined by some chain of trips, plus a little random slack.
inline Instance random_instance(std::mt19937_64& rng, const RandomShape& shape = {}) {
  const int n = draw(rng, shape.min_nodes, shape.max_nodes);
  std::vector<Edge> edges;
  std::set<EdgeKey> used;
  for (NodeId v = 2; v <= n; ++v) {
    const NodeId p = draw(rng, 1, v - 1);
    edges.push_back({p, v, Time::units(draw(rng, 1, shape.max_weight))});
    used.insert(EdgeKey(p, v));
  }
  const int extra = draw(rng, 0, shape.max_extra_edges);
  for (int i = 0; i < extra; ++i) {
    const NodeId a = draw(rng, 1, n), b = draw(rng, 1, n);
    if (a == b || !used.insert(EdgeKey(a, b)).second) continue;
    edges.push_back({a, b, Time::units(draw(rng, 1, shape.max_weight))});
  }
  Instance inst;
  inst.name = "rand";
  inst.graph = Graph(n, edges);
  std::vector<NodeId> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)] = i + 1;
  std::shuffle(nodes.begin(), nodes.end(), rng);
  const int nd = std::min(n, draw(rng, shape.min_depots, shape.max_depots));
  inst.depots.assign(nodes.begin(), nodes.begin() + nd);
  std::sort(inst.depots.begin(), inst.depots.end());
  std::vector<Edge> pool = edges;
  std::shuffle(pool.begin(), pool.end(), rng);
  const int r = std::min<int>(static_cast<int>(pool.size()), draw(rng, 1, shape.max_required));
  for (int i = 0; i < r; ++i) inst.required.push_back(pool[static_cast<std::size_t>(i)].key());
  std::sort(inst.required.begin(), inst.required.end());
  inst.vehicle_count = draw(rng, shape.min_vehicles, shape.max_vehicles);
  inst.recharge = Time::units(draw(rng, 0, shape.max_recharge));

  const DistanceTable dist(inst.graph);
  Time need;
  for (EdgeKey e : inst.required) {
    Time best = Time::infinity();
    for (NodeId a : inst.depots) {
      for (NodeId b : inst.depots) {
        const Time w = *inst.graph.weight(e.first, e.second);
        best = std::min({best, dist.time(a, e.first) + w + dist.time(e.second, b),
                         dist.time(a, e.second) + w + dist.time(e.first, b)});
      }
    }
    need = std::max(need, best);
  }
  // Minimum bottleneck over a spanning tree of the depot meta-graph.
  std::vector<NodeId> in{inst.depots.front()};
  std::vector<NodeId> out(inst.depots.begin() + 1, inst.depots.end());
  while (!out.empty()) {
    Time best = Time::infinity();
    std::size_t pick = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (NodeId a : in) {
        if (dist.time(a, out[i]) < best) {
          best = dist.time(a, out[i]);
          pick = i;
        }
      }
    }
    need = std::max(need, best);
    in.push_back(out[pick]);
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  inst.capacity = need + Time::units(draw(rng, 0, 4));
  return finalize_instance(std::move(inst));
}

inline SaConfig light_sa(std::uint64_t seed) {
  SaConfig c;
  c.seed = seed;
  c.restarts = 2;
  c.iterations_per_temperature = 30;
  c.cooling_rate = 0.8;
  return c;
}

}  // namespace support
