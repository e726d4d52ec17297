#pragma once

// Threshold graphs between agents and candidate bundles, maximum matchings,
// minimal Hall violators, and closed matchings (no unmatched agent is
// adjacent to a matched bundle).

#include <span>
#include <utility>
#include <vector>

#include "fairdiv/model.hpp"

namespace fairdiv {

/// Bipartite graph: left nodes are agents (by position in `agents`), right
/// nodes are bundles. adjacency[a][b] holds iff agent `agents[a]` values
/// bundle b at least at its threshold.
struct ThresholdGraph {
  std::vector<AgentId> agents;
  std::vector<Bundle> bundles;
  std::vector<Threshold> thresholds;
  std::vector<std::vector<char>> adjacency;

  int left() const { return static_cast<int>(adjacency.size()); }
  int right() const { return adjacency.empty() ? static_cast<int>(bundles.size()) : static_cast<int>(adjacency[0].size()); }
  bool edge(int a, int b) const { return adjacency[a][b] != 0; }

  /// Graph over explicit adjacency with no instance attached.
  static ThresholdGraph from_adjacency(std::vector<std::vector<char>> adjacency);
};

/// Pairs of (left position, right position).
using Matching = std::vector<std::pair<int, int>>;

/// Edge (a, b) iff factor * mms[agents[a]] <= v_agents[a](bundles[b]).
ThresholdGraph build_threshold_graph(const Instance& inst, std::vector<Bundle> bundles,
                                     std::vector<AgentId> agents, std::span<const Value> mms,
                                     const Ratio& factor);

/// Maximum-cardinality matching by augmenting paths; agents scanned in
/// ascending order, neighbours in ascending order.
Matching max_matching(const ThresholdGraph& g);

struct HallViolator {
  std::vector<int> bundles;    // S
  std::vector<int> neighbors;  // N(S)
  bool degenerate = false;     // |S| == 1, i.e. an isolated bundle
};

/// Inclusion-minimal S with |N(S)| < |S|, grown by alternating paths from
/// the lowest unmatched bundle. Requires mm maximum and not perfect.
HallViolator minimal_hall_violator(const ThresholdGraph& g, const Matching& mm);

enum class ClosureMode {
  RowFull,         // some agent is adjacent to every bundle
  ColumnCovered,   // every bundle has at least one neighbour
};

/// Non-empty matching whose matched bundles have only matched neighbours.
Matching closed_matching(const ThresholdGraph& g, ClosureMode mode);

/// Neighbours of a set of bundles, ascending.
std::vector<int> bundle_neighbors(const ThresholdGraph& g, std::span<const int> bundles);

}  // namespace fairdiv
