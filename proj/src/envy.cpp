#include "fairdiv/envy.hpp"

#include <algorithm>

namespace fairdiv {

namespace {

void record(Trace* trace, const Instance& inst, TraceKind kind, AgentId agent, const PartialAllocation& before,
            const PartialAllocation& after, std::vector<std::pair<AgentId, int>> pairs = {}) {
  if (trace == nullptr) return;
  TraceEvent ev;
  ev.iteration = static_cast<int>(trace->size());
  ev.kind = kind;
  ev.agent = agent;
  for (AgentId i = 0; i < inst.agents(); ++i) {
    ev.allocated_set.push_back(i);
    ev.potential.value_sum += own_value(inst, after, i);
  }
  ev.potential.allocated = inst.agents();
  ev.before = before.bundles;
  ev.before.push_back(before.pool);
  ev.bundles = after.bundles;
  ev.bundles.push_back(after.pool);
  ev.pairs = std::move(pairs);
  trace->push_back(std::move(ev));
}

}  // namespace

EnvyGraph EnvyGraph::of(const Instance& inst, const PartialAllocation& x) {
  EnvyGraph g;
  const int n = inst.agents();
  g.out.resize(n);
  for (AgentId i = 0; i < n; ++i) {
    const Value own = own_value(inst, x, i);
    for (AgentId j = 0; j < n; ++j) {
      if (i != j && bundle_value(inst, i, x.bundles[j]) > own) g.out[i].push_back(j);
    }
  }
  return g;
}

std::size_t EnvyGraph::edge_count() const {
  std::size_t total = 0;
  for (const auto& o : out) total += o.size();
  return total;
}

std::vector<AgentId> EnvyGraph::sources() const {
  std::vector<char> has_in(out.size(), 0);
  for (const auto& o : out) {
    for (AgentId j : o) has_in[j] = 1;
  }
  std::vector<AgentId> res;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!has_in[i]) res.push_back(static_cast<AgentId>(i));
  }
  return res;
}

std::vector<AgentId> EnvyGraph::find_cycle() const {
  const int n = static_cast<int>(out.size());
  for (AgentId s = 0; s < n; ++s) {
    // Cycles through lower nodes were ruled out by earlier starts.
    std::vector<char> visited(n, 0);
    std::vector<AgentId> path{s};
    visited[s] = 1;
    auto dfs = [&](auto&& self, AgentId u) -> bool {
      for (AgentId v : out[u]) {
        if (v == s) return true;
        if (v < s || visited[v]) continue;
        visited[v] = 1;
        path.push_back(v);
        if (self(self, v)) return true;
        path.pop_back();
      }
      return false;
    };
    if (dfs(dfs, s)) return path;
  }
  return {};
}

bool strongly_envies(const Instance& inst, const PartialAllocation& x, AgentId a, const Bundle& b,
                     const Ratio& delta) {
  const Value own = own_value(inst, x, a);
  const Ratio keep = delta.complement();
  const Value whole = bundle_value(inst, a, b);
  for (GoodId g : b) {
    if (scaled_exceeds(keep, whole - inst.value(a, g), own)) return true;
  }
  return false;
}

Bundle min_envied_subset(const Instance& inst, AgentId a, const Bundle& b, Value target, const Ratio& keep) {
  Value current = bundle_value(inst, a, b);
  if (!scaled_exceeds(keep, current, target)) {
    throw ValidationError("min_envied_subset: bundle is not worth more than the target");
  }
  std::vector<GoodId> kept;
  for (GoodId g : b) {
    const Value rest = current - inst.value(a, g);
    if (scaled_exceeds(keep, rest, target)) {
      current = rest;
    } else {
      kept.push_back(g);
    }
  }
  return Bundle(std::move(kept));
}

EnviedSubset most_envious_refine(const Instance& inst, const PartialAllocation& x, const Bundle& b,
                                 std::span<const AgentId> candidates, const Ratio& delta) {
  EnviedSubset res;
  res.subset = b;
  const Ratio keep = delta.complement();
  for (;;) {
    auto envier = std::find_if(candidates.begin(), candidates.end(), [&](AgentId c) {
      return strongly_envies(inst, x, c, res.subset, delta);
    });
    if (envier == candidates.end()) break;
    res.agent = *envier;
    res.subset = min_envied_subset(inst, res.agent, res.subset, own_value(inst, x, res.agent), keep);
  }
  if (res.agent < 0) throw ValidationError("most_envious_refine: no candidate strongly envies the bundle");
  return res;
}

PartialAllocation eliminate_cycles(const Instance& inst, PartialAllocation x, Trace* trace) {
  for (;;) {
    EnvyGraph g = EnvyGraph::of(inst, x);
    std::vector<AgentId> cycle = g.find_cycle();
    if (cycle.empty()) return x;

    const PartialAllocation before = x;
    std::vector<std::pair<AgentId, int>> hops;
    Bundle first = x.bundles[cycle.front()];
    for (std::size_t k = 0; k + 1 < cycle.size(); ++k) {
      x.bundles[cycle[k]] = x.bundles[cycle[k + 1]];
      hops.emplace_back(cycle[k], cycle[k + 1]);
    }
    x.bundles[cycle.back()] = first;
    hops.emplace_back(cycle.back(), cycle.front());

    if (EnvyGraph::of(inst, x).edge_count() >= g.edge_count()) {
      throw InvariantError("cycle rotation did not reduce the number of envy edges");
    }
    record(trace, inst, TraceKind::CycleRotated, cycle.front(), before, x, std::move(hops));
  }
}

PartialAllocation envy_cycle_elimination(const Instance& inst, PartialAllocation x, Trace* trace) {
  if (auto bad = validate_allocation(inst, x)) throw ValidationError("invalid allocation: " + *bad);
  while (!x.pool.empty()) {
    x = eliminate_cycles(inst, std::move(x), trace);
    auto sources = EnvyGraph::of(inst, x).sources();
    if (sources.empty()) throw InvariantError("acyclic envy graph without a source");
    const AgentId s = sources.front();
    const GoodId g = x.pool.goods().front();
    const PartialAllocation before = x;
    x.bundles[s] = x.bundles[s].merged(Bundle{g});
    x.pool = x.pool.without(g);
    record(trace, inst, TraceKind::GoodPlaced, s, before, x, {{s, g}});
  }
  return eliminate_cycles(inst, std::move(x), trace);
}

}  // namespace fairdiv
