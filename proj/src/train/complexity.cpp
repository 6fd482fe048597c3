#include "cfnn/train/complexity.hpp"

#include <deque>

#include "cfnn/error.hpp"
#include "cfnn/train/net.hpp"

namespace cfnn::train {

std::size_t NetGraph::add_node(NodeKind kind, std::string label) {
  nodes.push_back({kind, std::move(label)});
  return nodes.size() - 1;
}

void NetGraph::add_edge(std::size_t from, std::size_t to, EdgeKind kind) {
  require(from < nodes.size() && to < nodes.size(), "graph edge refers to a missing node");
  edges.push_back({from, to, kind});
}

std::size_t NetGraph::count(NodeKind kind) const {
  std::size_t n = 0;
  for (const auto& node : nodes) n += node.kind == kind ? 1 : 0;
  return n;
}

namespace {

std::vector<bool> reach(const NetGraph& g, NodeKind seed_kind, bool forward, bool skip_generated) {
  const std::size_t n = g.nodes.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) {
    if (skip_generated && e.kind == EdgeKind::generated_weight) continue;
    if (forward) {
      adj[e.from].push_back(e.to);
    } else {
      adj[e.to].push_back(e.from);
    }
  }
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < n; ++i) {
    if (g.nodes[i].kind == seed_kind) {
      seen[i] = true;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : adj[v]) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  return seen;
}

void check_acyclic(const NetGraph& g) {
  const std::size_t n = g.nodes.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& e : g.edges) {
    adj[e.from].push_back(e.to);
    ++indegree[e.to];
  }
  std::deque<std::size_t> ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    ++visited;
    for (std::size_t w : adj[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  require(visited == n, "network graph contains a cycle");
}

}  // namespace

Complexity dc_rc(const NetGraph& graph, ComplexityOptions options) {
  check_acyclic(graph);
  require(graph.count(NodeKind::output) >= 1, "network graph has no output node");
  const auto from_data = reach(graph, NodeKind::data_input, true, false);
  const auto from_random = reach(graph, NodeKind::random_input, true, !options.count_generated_targets);
  const auto to_output = reach(graph, NodeKind::output, false, false);
  Complexity c;
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    if (graph.nodes[i].kind != NodeKind::neuron || !to_output[i]) continue;
    if (from_data[i]) ++c.dc;
    if (from_random[i]) ++c.rc;
  }
  return c;
}

std::vector<std::vector<std::size_t>> append_mlp_graph(NetGraph& g, const MlpCore& core,
                                                       std::vector<std::vector<std::size_t>> columns,
                                                       const std::string& prefix) {
  require(columns.size() == core.input_dim(), "graph columns do not match the network input");
  for (std::size_t k = 0; k < core.layers().size(); ++k) {
    const LayerSpec& spec = core.layers()[k];
    const std::string tag = prefix + std::to_string(k) + ".";
    switch (spec.kind) {
      case LayerKind::dense: {
        std::vector<std::vector<std::size_t>> next;
        for (std::size_t o = 0; o < spec.width; ++o) {
          const std::size_t unit = g.add_node(NodeKind::neuron, tag + std::to_string(o));
          for (const auto& col : columns) {
            for (std::size_t src : col) g.add_edge(src, unit);
          }
          next.push_back({unit});
        }
        columns = std::move(next);
        break;
      }
      case LayerKind::tanh:
      case LayerKind::relu:
        break;
      case LayerKind::dropout:
        for (std::size_t c = 0; c < columns.size(); ++c) {
          columns[c].push_back(g.add_node(NodeKind::random_input, tag + "mask" + std::to_string(c)));
        }
        break;
      case LayerKind::concat_random:
        for (std::size_t c = 0; c < spec.width; ++c) {
          columns.push_back({g.add_node(NodeKind::random_input, tag + "z" + std::to_string(c))});
        }
        break;
    }
  }
  return columns;
}

NetGraph graph_of_mlp(const MlpCore& core) {
  NetGraph g;
  // Sources feeding each current feature column.
  std::vector<std::vector<std::size_t>> columns;
  for (std::size_t i = 0; i < core.input_dim(); ++i) {
    columns.push_back({g.add_node(NodeKind::data_input, "x" + std::to_string(i))});
  }
  columns = append_mlp_graph(g, core, std::move(columns), "L");
  const std::size_t out = g.add_node(NodeKind::output, "out");
  for (const auto& col : columns) {
    for (std::size_t src : col) g.add_edge(src, out);
  }
  return g;
}

}  // namespace cfnn::train
