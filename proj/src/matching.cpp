#include "fairdiv/matching.hpp"

#include <algorithm>
#include <string>

namespace fairdiv {

namespace {

// Kuhn's algorithm over the bundles in `subset`, growing from the bundle side.
// Returns agent_of[b] for every right node (-1 when unmatched).
std::vector<int> match_bundles(const ThresholdGraph& g, std::span<const int> subset) {
  std::vector<int> agent_of(g.right(), -1);
  std::vector<int> bundle_of(g.left(), -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, int b) -> bool {
    for (int a = 0; a < g.left(); ++a) {
      if (!g.edge(a, b) || seen[a]) continue;
      seen[a] = 1;
      if (bundle_of[a] < 0 || self(self, bundle_of[a])) {
        bundle_of[a] = b;
        agent_of[b] = a;
        return true;
      }
    }
    return false;
  };
  for (int b : subset) {
    seen.assign(g.left(), 0);
    augment(augment, b);
  }
  return agent_of;
}

std::vector<int> all_bundles(const ThresholdGraph& g) {
  std::vector<int> out(g.right());
  for (int b = 0; b < g.right(); ++b) out[b] = b;
  return out;
}

bool saturable(const ThresholdGraph& g, std::span<const int> subset) {
  auto agent_of = match_bundles(g, subset);
  return std::all_of(subset.begin(), subset.end(), [&](int b) { return agent_of[b] >= 0; });
}

// Bundles reachable from `root` along alternating paths of a maximum
// matching restricted to `subset`. Every reached agent is matched, so the
// reached bundles outnumber their neighbours by exactly one.
std::vector<int> alternating_closure(const ThresholdGraph& g, std::span<const int> subset,
                                     const std::vector<int>& agent_of, int root) {
  std::vector<int> bundle_of(g.left(), -1);
  for (int b : subset) {
    if (agent_of[b] >= 0) bundle_of[agent_of[b]] = b;
  }
  std::vector<char> in_s(g.right(), 0), in_n(g.left(), 0);
  std::vector<int> s{root}, queue{root};
  in_s[root] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int b = queue[head];
    for (int a = 0; a < g.left(); ++a) {
      if (!g.edge(a, b) || in_n[a]) continue;
      in_n[a] = 1;
      int next = bundle_of[a];
      if (next < 0) throw InvariantError("augmenting path found from a supposedly maximum matching");
      if (!in_s[next]) {
        in_s[next] = 1;
        s.push_back(next);
        queue.push_back(next);
      }
    }
  }
  std::sort(s.begin(), s.end());
  return s;
}

bool violates(const ThresholdGraph& g, std::span<const int> s) {
  return bundle_neighbors(g, s).size() < s.size();
}

std::vector<int> violator_within(const ThresholdGraph& g, std::span<const int> subset) {
  auto agent_of = match_bundles(g, subset);
  for (int b : subset) {
    if (agent_of[b] < 0) return alternating_closure(g, subset, agent_of, b);
  }
  return {};
}

void check_matching(const ThresholdGraph& g, const Matching& mm) {
  std::vector<char> used_a(g.left(), 0), used_b(g.right(), 0);
  for (auto [a, b] : mm) {
    if (a < 0 || a >= g.left() || b < 0 || b >= g.right()) throw ValidationError("matching index out of range");
    if (!g.edge(a, b)) throw ValidationError("matching uses a non-edge");
    if (used_a[a]++ || used_b[b]++) throw ValidationError("matching repeats a node");
  }
}

}  // namespace

ThresholdGraph ThresholdGraph::from_adjacency(std::vector<std::vector<char>> adjacency) {
  ThresholdGraph g;
  const std::size_t cols = adjacency.empty() ? 0 : adjacency[0].size();
  for (const auto& row : adjacency) {
    if (row.size() != cols) throw ValidationError("ragged adjacency matrix");
  }
  g.agents.resize(adjacency.size());
  for (std::size_t a = 0; a < adjacency.size(); ++a) g.agents[a] = static_cast<AgentId>(a);
  g.bundles.resize(cols);
  g.adjacency = std::move(adjacency);
  return g;
}

ThresholdGraph build_threshold_graph(const Instance& inst, std::vector<Bundle> bundles,
                                     std::vector<AgentId> agents, std::span<const Value> mms,
                                     const Ratio& factor) {
  if (bundles.size() != agents.size()) {
    throw ValidationError("threshold graph needs as many bundles as agents (" + std::to_string(bundles.size()) +
                          " vs " + std::to_string(agents.size()) + ")");
  }
  if (mms.size() != static_cast<std::size_t>(inst.agents())) throw ValidationError("one MMS value per agent required");
  std::vector<char> seen(inst.goods(), 0);
  for (const Bundle& b : bundles) {
    for (GoodId gd : b) {
      if (gd >= inst.goods()) throw ValidationError("bundle good out of range");
      if (seen[gd]++) throw ValidationError("threshold-graph bundles overlap");
    }
  }
  ThresholdGraph g;
  g.adjacency.assign(agents.size(), std::vector<char>(bundles.size(), 0));
  for (std::size_t a = 0; a < agents.size(); ++a) {
    Threshold t{factor, mms[agents[a]]};
    g.thresholds.push_back(t);
    for (std::size_t b = 0; b < bundles.size(); ++b) {
      g.adjacency[a][b] = t.met_by(bundle_value(inst, agents[a], bundles[b])) ? 1 : 0;
    }
  }
  g.agents = std::move(agents);
  g.bundles = std::move(bundles);
  return g;
}

std::vector<int> bundle_neighbors(const ThresholdGraph& g, std::span<const int> bundles) {
  std::vector<int> out;
  for (int a = 0; a < g.left(); ++a) {
    if (std::any_of(bundles.begin(), bundles.end(), [&](int b) { return g.edge(a, b); })) out.push_back(a);
  }
  return out;
}

Matching max_matching(const ThresholdGraph& g) {
  std::vector<int> agent_of(g.right(), -1);
  std::vector<char> seen;
  auto augment = [&](auto&& self, int a) -> bool {
    for (int b = 0; b < g.right(); ++b) {
      if (!g.edge(a, b) || seen[b]) continue;
      seen[b] = 1;
      if (agent_of[b] < 0 || self(self, agent_of[b])) {
        agent_of[b] = a;
        return true;
      }
    }
    return false;
  };
  for (int a = 0; a < g.left(); ++a) {
    seen.assign(g.right(), 0);
    augment(augment, a);
  }
  Matching out;
  for (int b = 0; b < g.right(); ++b) {
    if (agent_of[b] >= 0) out.emplace_back(agent_of[b], b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

HallViolator minimal_hall_violator(const ThresholdGraph& g, const Matching& mm) {
  check_matching(g, mm);
  if (static_cast<int>(mm.size()) == g.right()) throw ValidationError("matching is perfect; no Hall violator exists");
  if (mm.size() != max_matching(g).size()) throw ValidationError("matching is not maximum");

  std::vector<int> agent_of(g.right(), -1);
  for (auto [a, b] : mm) agent_of[b] = a;
  int root = 0;
  while (agent_of[root] >= 0) ++root;
  const auto everything = all_bundles(g);
  std::vector<int> s = alternating_closure(g, everything, agent_of, root);

  // Single removals in ascending order, then a full check that every
  // one-smaller subset is saturable (which is what minimality means here).
  for (std::size_t k = 0; k < s.size();) {
    std::vector<int> smaller(s);
    smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
    if (!smaller.empty() && violates(g, smaller)) {
      s = std::move(smaller);
    } else {
      ++k;
    }
  }
  for (bool shrunk = true; shrunk;) {
    shrunk = false;
    for (std::size_t k = 0; k < s.size(); ++k) {
      std::vector<int> smaller(s);
      smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(k));
      if (!saturable(g, smaller)) {
        s = violator_within(g, smaller);
        shrunk = true;
        break;
      }
    }
  }

  HallViolator out;
  out.bundles = s;
  out.neighbors = bundle_neighbors(g, s);
  out.degenerate = s.size() == 1;
  return out;
}

Matching closed_matching(const ThresholdGraph& g, ClosureMode mode) {
  if (g.left() != g.right()) throw ValidationError("closed matching needs equally many agents and bundles");
  if (g.right() == 0) throw ValidationError("closed matching on an empty graph");
  if (mode == ClosureMode::RowFull) {
    bool found = false;
    for (int a = 0; a < g.left() && !found; ++a) {
      found = std::all_of(g.adjacency[a].begin(), g.adjacency[a].end(), [](char e) { return e != 0; });
    }
    if (!found) throw ValidationError("row-full mode: no agent is adjacent to every bundle");
  } else {
    for (int b = 0; b < g.right(); ++b) {
      bool covered = false;
      for (int a = 0; a < g.left() && !covered; ++a) covered = g.edge(a, b);
      if (!covered) throw ValidationError("column-covered mode: bundle " + std::to_string(b) + " has no neighbour");
    }
  }

  Matching mm = max_matching(g);
  if (static_cast<int>(mm.size()) == g.right()) return mm;

  HallViolator s = minimal_hall_violator(g, mm);
  if (s.degenerate) throw InvariantError("Hall violator of size one despite the mode precondition");
  std::vector<int> t(s.bundles.begin(), s.bundles.end() - 1);
  auto agent_of = match_bundles(g, t);

  Matching out;
  for (int b : t) {
    if (agent_of[b] < 0) throw InvariantError("bundles of T are not saturable");
    out.emplace_back(agent_of[b], b);
  }
  std::sort(out.begin(), out.end());

  std::vector<char> matched(g.left(), 0);
  for (auto [a, b] : out) matched[a] = 1;
  for (int a : bundle_neighbors(g, t)) {
    if (!matched[a]) throw InvariantError("closed matching leaves a neighbour of a matched bundle unmatched");
  }
  return out;
}

}  // namespace fairdiv
