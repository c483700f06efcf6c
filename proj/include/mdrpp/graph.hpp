#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mdrpp/error.hpp"
#include "mdrpp/time.hpp"

namespace mdrpp {

using NodeId = int;

// Orientation-free edge identity; always stored with first < second.
struct EdgeKey {
  NodeId first = 0;
  NodeId second = 0;

  EdgeKey() = default;
  EdgeKey(NodeId u, NodeId v) : first(std::min(u, v)), second(std::max(u, v)) {}

  friend auto operator<=>(const EdgeKey&, const EdgeKey&) = default;
};

struct Edge {
  NodeId u = 0;
  NodeId v = 0;
  Time weight;

  EdgeKey key() const { return EdgeKey(u, v); }
};

struct Arc {
  NodeId to = 0;
  Time weight;
};

// Undirected, connected, simple weighted graph over nodes 1..node_count.
class Graph {
 public:
  Graph() = default;

  Graph(int node_count, std::vector<Edge> edges)
      : node_count_(node_count), edges_(std::move(edges)) {
    if (node_count_ <= 0) throw ValidationError("graph needs at least one node");
    adjacency_.assign(static_cast<std::size_t>(node_count_) + 1, {});
    for (const Edge& e : edges_) {
      if (e.u < 1 || e.u > node_count_ || e.v < 1 || e.v > node_count_) {
        throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") references a node outside 1.." +
                              std::to_string(node_count_));
      }
      if (e.u == e.v) {
        throw ValidationError("self-loop on node " + std::to_string(e.u));
      }
      if (e.weight <= Time{}) {
        throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                              ") has non-positive weight");
      }
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      const Edge& e = edges_[i];
      if (!index_.emplace(e.key(), i).second) {
        throw ValidationError("duplicate edge (" + std::to_string(e.key().first) + "," +
                              std::to_string(e.key().second) + ")");
      }
      adjacency_[e.u].push_back({e.v, e.weight});
      adjacency_[e.v].push_back({e.u, e.weight});
    }
    for (auto& arcs : adjacency_) {
      std::sort(arcs.begin(), arcs.end(),
                [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
    if (!connected()) throw ValidationError("graph disconnected");
  }

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const Arc> neighbors(NodeId u) const { return adjacency_.at(u); }
  bool has_node(NodeId u) const { return u >= 1 && u <= node_count_; }

  std::optional<Time> weight(NodeId u, NodeId v) const {
    auto it = index_.find(EdgeKey(u, v));
    if (it == index_.end()) return std::nullopt;
    return edges_[it->second].weight;
  }
  bool has_edge(EdgeKey k) const { return index_.count(k) != 0; }

  Time max_weight() const {
    Time m;
    for (const Edge& e : edges_) m = std::max(m, e.weight);
    return m;
  }
  Time total_weight() const {
    Time s;
    for (const Edge& e : edges_) s += e.weight;
    return s;
  }

 private:
  bool connected() const {
    std::vector<char> seen(adjacency_.size(), 0);
    std::vector<NodeId> stack{1};
    seen[1] = 1;
    int count = 1;
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      for (const Arc& a : adjacency_[u]) {
        if (!seen[a.to]) {
          seen[a.to] = 1;
          ++count;
          stack.push_back(a.to);
        }
      }
    }
    return count == node_count_;
  }

  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
  std::map<EdgeKey, std::size_t> index_;
};

struct ShortestPath {
  Time time;
  std::vector<NodeId> path;
};

namespace detail {

// Single-source Dijkstra; predecessor ties keep the first settled parent.
inline void dijkstra(const Graph& g, NodeId source, std::vector<Time>& dist,
                     std::vector<NodeId>& pred) {
  const auto n = static_cast<std::size_t>(g.node_count()) + 1;
  dist.assign(n, Time::infinity());
  pred.assign(n, 0);
  using Item = std::pair<Time, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist[source] = Time{};
  queue.push({Time{}, source});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const Arc& a : g.neighbors(u)) {
      const Time nd = d + a.weight;
      if (nd < dist[a.to]) {
        dist[a.to] = nd;
        pred[a.to] = u;
        queue.push({nd, a.to});
      }
    }
  }
}

}  // namespace detail

inline ShortestPath shortest_path(const Graph& g, NodeId from, NodeId to) {
  if (!g.has_node(from) || !g.has_node(to)) {
    throw ValidationError("shortest_path: node not in graph");
  }
  std::vector<Time> dist;
  std::vector<NodeId> pred;
  detail::dijkstra(g, from, dist, pred);
  ShortestPath sp{dist[to], {}};
  for (NodeId v = to; v != from; v = pred[v]) sp.path.push_back(v);
  sp.path.push_back(from);
  std::reverse(sp.path.begin(), sp.path.end());
  return sp;
}

// All-pairs shortest path times and paths, one Dijkstra per source.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(const Graph& g) : n_(g.node_count()) {
    dist_.resize(static_cast<std::size_t>(n_) + 1);
    pred_.resize(static_cast<std::size_t>(n_) + 1);
    for (NodeId s = 1; s <= n_; ++s) detail::dijkstra(g, s, dist_[s], pred_[s]);
  }

  Time time(NodeId a, NodeId b) const { return dist_[a][b]; }

  std::vector<NodeId> path(NodeId a, NodeId b) const {
    std::vector<NodeId> p;
    for (NodeId v = b; v != a; v = pred_[a][v]) p.push_back(v);
    p.push_back(a);
    std::reverse(p.begin(), p.end());
    return p;
  }

  int node_count() const { return n_; }

 private:
  int n_ = 0;
  std::vector<std::vector<Time>> dist_;
  std::vector<std::vector<NodeId>> pred_;
};

inline Time graph_diameter(const Graph& g) {
  DistanceTable table(g);
  Time d;
  for (NodeId a = 1; a <= g.node_count(); ++a) {
    for (NodeId b = a + 1; b <= g.node_count(); ++b) d = std::max(d, table.time(a, b));
  }
  return d;
}

}  // namespace mdrpp
