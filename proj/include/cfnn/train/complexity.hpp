#pragma once

// Data and random complexity: the number of neurons lying on some directed
// path from a data input (DC) or a random input (RC) to the output.

#include <cstddef>
#include <string>
#include <vector>

namespace cfnn::train {

class MlpCore;

enum class NodeKind { data_input, random_input, neuron, output };
enum class EdgeKind { signal, generated_weight };

struct NetGraph {
  struct Node {
    NodeKind kind;
    std::string label;
  };
  struct Edge {
    std::size_t from;
    std::size_t to;
    EdgeKind kind;
  };

  std::vector<Node> nodes;
  std::vector<Edge> edges;

  std::size_t add_node(NodeKind kind, std::string label = {});
  void add_edge(std::size_t from, std::size_t to, EdgeKind kind = EdgeKind::signal);
  std::size_t count(NodeKind kind) const;
};

struct ComplexityOptions {
  /// When true a neuron whose weights are generated from random values is
  /// itself on a random path. When false, generated-weight edges carry no
  /// randomness and only the generator's own neurons count towards RC.
  bool count_generated_targets = true;
};

struct Complexity {
  std::size_t dc = 0;
  std::size_t rc = 0;
};

Complexity dc_rc(const NetGraph& graph, ComplexityOptions options = {});

/// Adds the neurons of a layer stack fed by the given source columns and
/// returns the source sets of its output columns.
std::vector<std::vector<std::size_t>> append_mlp_graph(NetGraph& graph, const MlpCore& core,
                                                       std::vector<std::vector<std::size_t>> columns,
                                                       const std::string& prefix);

/// Graph of a layer stack. Each dense unit is a neuron; dropout mask
/// entries and concat_random entries are random inputs.
NetGraph graph_of_mlp(const MlpCore& core);

}  // namespace cfnn::train
