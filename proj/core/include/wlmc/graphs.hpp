#ifndef WLMC_GRAPHS_HPP
#define WLMC_GRAPHS_HPP

#include "wlmc/core.hpp"

#include <utility>
#include <vector>

namespace wlmc {

/// Undirected simple graph with a real-vector label per vertex.
struct LabeledGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // u < v, sorted, unique
  std::vector<std::vector<int>> adj;       // sorted neighbor lists
  Matrix labels;                           // n x d

  int degree(int v) const { return static_cast<int>(adj[v].size()); }
  int label_dim() const { return static_cast<int>(labels.cols()); }
};

/// Validates and canonicalizes edges; empty labels default to the constant
/// label 1.
LabeledGraph make_graph(int n, std::vector<std::pair<int, int>> edges, Matrix labels = {});

/// Lazy random walk on the graph: keep mass q at the current vertex, spread
/// 1-q uniformly over neighbors; isolated vertices self-loop. Stationary
/// weight of v is deg(v)/sum (isolated vertices count as degree 1).
Lmmc graph_to_lmmc(const LabeledGraph& g, double q);

enum class RelabelScheme {
  ScalarF2,  // 1-d label deg(v) + 1/|V|; original labels ignored
  VectorG,   // append (deg(v), 1/|V|) to the original label
};

LabeledGraph relabel(const LabeledGraph& g, RelabelScheme scheme);

/// Color refinement record: colors[r][v] is the canonical color of vertex v
/// after r rounds. Ids are interned jointly across the two compared graphs,
/// so equal ids mean equal refinement tuples.
struct WlColoring {
  std::vector<std::vector<int>> rounds;
};

struct WlTestResult {
  bool distinguished = false;
  int round = -1;  // first round whose color multisets differ, when distinguished
};

/// Canonical color refinement over both graphs with exact multiset hashing.
/// Round 0 compares the initial label multisets (so differing vertex counts
/// distinguish immediately); refinement stops once the joint partition is
/// stable or max_rounds is hit (default |V1| + |V2|).
WlTestResult wl_test(const LabeledGraph& g1, const LabeledGraph& g2, int max_rounds = -1);

/// The per-round colorings behind wl_test, for callers that want the trace.
std::pair<WlColoring, WlColoring> wl_colorings(const LabeledGraph& g1, const LabeledGraph& g2,
                                               int rounds);

/// Half-averaging label refinement, all stages stacked: column block i holds
/// the stage-i labels, stage 0 being the input. Requires every vertex to
/// have a neighbor.
Matrix wwl_labels(const LabeledGraph& g, int k);

/// Transport cost between the stacked-label pushforwards of the two degree
/// stationary measures, with Euclidean ground cost on the stacked labels.
double wwl_hat_distance(const LabeledGraph& g1, const LabeledGraph& g2, int k);

}  // namespace wlmc

#endif  // WLMC_GRAPHS_HPP
