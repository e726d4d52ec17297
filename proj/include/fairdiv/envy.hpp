#pragma once

// Envy-based machinery: strong envy, minimal envied subsets, most-envious
// refinement, and envy-cycle elimination.

#include <span>
#include <utility>
#include <vector>

#include "fairdiv/model.hpp"

namespace fairdiv {

/// Directed graph with an edge i -> j iff v_i(X_j) > v_i(X_i).
struct EnvyGraph {
  std::vector<std::vector<AgentId>> out;

  static EnvyGraph of(const Instance& inst, const PartialAllocation& x);

  std::size_t edge_count() const;
  std::vector<AgentId> sources() const;
  /// Lowest-indexed node's first cycle by ascending DFS, or empty if acyclic.
  std::vector<AgentId> find_cycle() const;
};

/// True iff some g in b has (1 - delta) * v_a(b \ g) > v_a(X_a).
bool strongly_envies(const Instance& inst, const PartialAllocation& x, AgentId a, const Bundle& b,
                     const Ratio& delta = Ratio(0));

/// Inclusion-minimal Z within b with keep * v_a(Z) > target, scanning goods of
/// b in ascending order. keep defaults to 1; solvers pass 1 - delta.
Bundle min_envied_subset(const Instance& inst, AgentId a, const Bundle& b, Value target,
                         const Ratio& keep = Ratio(1));

struct EnviedSubset {
  AgentId agent = -1;
  Bundle subset;
};

/// Refines b until no candidate (delta-)strongly envies it; the agent of the
/// last refinement strictly prefers the result to its own bundle.
EnviedSubset most_envious_refine(const Instance& inst, const PartialAllocation& x, const Bundle& b,
                                 std::span<const AgentId> candidates, const Ratio& delta = Ratio(0));

/// Rotates bundles along envy cycles until the envy graph is acyclic.
PartialAllocation eliminate_cycles(const Instance& inst, PartialAllocation x, Trace* trace = nullptr);

/// Hands every pool good to a source of the (acyclic) envy graph.
PartialAllocation envy_cycle_elimination(const Instance& inst, PartialAllocation x, Trace* trace = nullptr);

}  // namespace fairdiv
