#include "fairdiv/solvers.hpp"

#include <algorithm>
#include <string>

#include "fairdiv/envy.hpp"
#include "fairdiv/matching.hpp"

namespace fairdiv {

namespace {

constexpr int kIterationGuard = 10'000'000;

// Mutable state of one solver run. Agents that hold a committed bundle are
// "allocated"; everyone else keeps an empty bundle until matched.
class Run {
 public:
  Run(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records)
      : inst_(inst), cfg_(cfg), factor_(cfg.mms_factor()), records_(std::move(records)) {
    const int n = inst.agents();
    if (records_.size() != static_cast<std::size_t>(n)) throw ValidationError("one share record per agent required");
    for (AgentId i = 0; i < n; ++i) {
      if (records_[i].agent != i || records_[i].parts != n) {
        throw ValidationError("share record " + std::to_string(i) + " must be agent " + std::to_string(i) +
                              " with parts = n");
      }
      mms_.push_back(records_[i].value);
    }
    bundles_.resize(n);
    allocated_.assign(n, 0);
    reallocations_.assign(n, 0);
  }

  Threshold threshold(AgentId i) const { return {factor_, mms_[i]}; }

  std::vector<AgentId> remaining() const {
    std::vector<AgentId> out;
    for (AgentId i = 0; i < inst_.agents(); ++i) {
      if (!allocated_[i]) out.push_back(i);
    }
    return out;
  }

  std::vector<AgentId> allocated_agents() const {
    std::vector<AgentId> out;
    for (AgentId i = 0; i < inst_.agents(); ++i) {
      if (allocated_[i]) out.push_back(i);
    }
    return out;
  }

  std::vector<Bundle> committed() const {
    std::vector<Bundle> out;
    for (AgentId i = 0; i < inst_.agents(); ++i) {
      if (allocated_[i]) out.push_back(bundles_[i]);
    }
    return out;
  }

  PartialAllocation allocation() const {
    PartialAllocation x;
    x.bundles = bundles_;
    x.pool = unallocated_goods(inst_, bundles_);
    return x;
  }

  Potential potential() const {
    Potential p;
    for (AgentId i = 0; i < inst_.agents(); ++i) {
      if (!allocated_[i]) continue;
      p.value_sum += bundle_value(inst_, i, bundles_[i]);
      ++p.allocated;
    }
    return p;
  }

  void begin_iteration() {
    if (++iterations_ > kIterationGuard) throw InvariantError("solver exceeded its iteration guard");
    if (cfg_.trace) check_remaining_invariant();
  }

  std::vector<Bundle> partition_for(AgentId i, int parts) const {
    try {
      return reduce_partition(inst_, i, records_[i], committed(), parts, threshold(i)).bundles;
    } catch (const ValidationError& e) {
      throw InvariantError(std::string("partition step precondition broke: ") + e.what());
    }
  }

  void commit(const ThresholdGraph& g, const Matching& m) {
    std::vector<std::pair<AgentId, int>> pairs;
    for (auto [a, b] : m) {
      AgentId agent = g.agents[a];
      bundles_[agent] = g.bundles[b];
      allocated_[agent] = 1;
      pairs.emplace_back(agent, b);
    }
    emit(TraceKind::MatchingCommitted, -1, {}, std::move(pairs));
  }

  void reassign(AgentId agent, Bundle b) {
    bundles_[agent] = std::move(b);
    allocated_[agent] = 1;
    ++reallocations_[agent];
    emit(TraceKind::Reallocation, agent, {bundles_[agent]});
  }

  void emit(TraceKind kind, AgentId agent, std::vector<Bundle> bundles,
            std::vector<std::pair<AgentId, int>> pairs = {}) {
    if (!cfg_.trace) return;
    TraceEvent ev;
    ev.iteration = iterations_;
    ev.kind = kind;
    ev.allocated_set = allocated_agents();
    ev.potential = potential();
    ev.agent = agent;
    ev.bundles = std::move(bundles);
    ev.pairs = std::move(pairs);
    trace_.push_back(std::move(ev));
  }

  // Every remaining agent values every committed bundle below its threshold.
  void check_remaining_invariant() const {
    for (AgentId i : remaining()) {
      for (AgentId a : allocated_agents()) {
        if (threshold(i).met_by(bundle_value(inst_, i, bundles_[a]))) {
          throw InvariantError("remaining agent " + std::to_string(i) + " meets its threshold on agent " +
                               std::to_string(a) + "'s bundle");
        }
      }
    }
  }

  // Allocated agents are (1 - delta)-EFX among themselves and each holds its share.
  void check_allocated_invariant() const {
    if (!cfg_.trace) return;
    const Ratio alpha = cfg_.delta.complement();
    for (AgentId i : allocated_agents()) {
      const Value own = bundle_value(inst_, i, bundles_[i]);
      if (!threshold(i).met_by(own)) throw InvariantError("allocated agent " + std::to_string(i) + " below share");
      for (AgentId j : allocated_agents()) {
        if (i == j) continue;
        const Value whole = bundle_value(inst_, i, bundles_[j]);
        for (GoodId g : bundles_[j]) {
          if (!meets(own, alpha, whole - inst_.value(i, g))) {
            throw InvariantError("allocated agents " + std::to_string(i) + " and " + std::to_string(j) +
                                 " violate EFX mid-run");
          }
        }
      }
    }
  }

  // Drops goods in ascending order while some remaining agent still meets
  // its threshold on what is left.
  Bundle shrink(const Bundle& b, const std::vector<AgentId>& agents) const {
    std::vector<Value> vals;
    for (AgentId i : agents) vals.push_back(bundle_value(inst_, i, b));
    std::vector<GoodId> kept;
    for (GoodId g : b) {
      bool removable = false;
      for (std::size_t k = 0; k < agents.size() && !removable; ++k) {
        removable = threshold(agents[k]).met_by(vals[k] - inst_.value(agents[k], g));
      }
      if (removable) {
        for (std::size_t k = 0; k < agents.size(); ++k) vals[k] -= inst_.value(agents[k], g);
      } else {
        kept.push_back(g);
      }
    }
    return Bundle(std::move(kept));
  }

  SolveReport finish() {
    SolveReport rep;
    rep.allocation = allocation();
    rep.records = std::move(records_);
    rep.mms = mms_;
    rep.mms_factor = factor_;
    rep.iterations = iterations_;
    rep.reallocations = reallocations_;
    rep.trace = std::move(trace_);
    return rep;
  }

  const Instance& inst() const { return inst_; }
  const SolverConfig& cfg() const { return cfg_; }
  const Ratio& factor() const { return factor_; }
  std::span<const Value> mms() const { return mms_; }

 private:
  const Instance& inst_;
  const SolverConfig& cfg_;
  Ratio factor_;
  std::vector<MmsRecord> records_;
  std::vector<Value> mms_;
  std::vector<Bundle> bundles_;
  std::vector<char> allocated_;
  std::vector<int> reallocations_;
  int iterations_ = 0;
  Trace trace_;
};

// Fairness fields come from the checkers, not from solver bookkeeping.
void fill_verdicts(const Instance& inst, const SolverConfig& cfg, SolveReport& rep) {
  if (auto bad = validate_allocation(inst, rep.allocation)) throw InvariantError("solver output invalid: " + *bad);
  const Ratio alpha = cfg.delta.complement();
  rep.min_mms_ratio = check_mms_ratio(inst, rep.allocation, std::span<const Value>(rep.mms));
  rep.efx_violation = check_efx(inst, rep.allocation, alpha);
  rep.ef1_violation = check_ef1(inst, rep.allocation, alpha);
  rep.pool_envied = false;
  for (AgentId i = 0; i < inst.agents(); ++i) {
    if (bundle_value(inst, i, rep.allocation.pool) > own_value(inst, rep.allocation, i)) rep.pool_envied = true;
  }
}

}  // namespace

Ratio SolverConfig::mms_factor() const {
  if (epsilon >= Ratio(1) || delta >= Ratio(1)) throw ValidationError("epsilon and delta must lie in [0, 1)");
  if (epsilon >= Ratio(2, 3)) throw ValidationError("2/3 - epsilon must be positive");
  if (exact_cap < 0) throw ValidationError("exact cap must be non-negative");
  return Ratio(2, 3) - epsilon;
}

std::vector<MmsRecord> compute_shares(const Instance& inst, const SolverConfig& cfg) {
  cfg.mms_factor();
  std::vector<MmsRecord> out;
  out.reserve(inst.agents());
  for (AgentId i = 0; i < inst.agents(); ++i) {
    if (cfg.epsilon.is_zero()) {
      out.push_back(mms_exact(inst, i, inst.agents(), cfg.exact_cap));
    } else {
      out.push_back(mms_approx(inst, i, inst.agents(), cfg.epsilon, cfg.exact_cap));
    }
  }
  return out;
}

SolveReport approx_mms(const Instance& inst, const SolverConfig& cfg) {
  return approx_mms(inst, cfg, compute_shares(inst, cfg));
}

SolveReport approx_mms_efx(const Instance& inst, const SolverConfig& cfg) {
  return approx_mms_efx(inst, cfg, compute_shares(inst, cfg));
}

SolveReport approx_mms_ef1(const Instance& inst, const SolverConfig& cfg) {
  return approx_mms_ef1(inst, cfg, compute_shares(inst, cfg));
}

SolveReport approx_mms(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records) {
  Run run(inst, cfg, std::move(records));
  for (auto remaining = run.remaining(); !remaining.empty(); remaining = run.remaining()) {
    run.begin_iteration();
    const AgentId divider = remaining.front();
    auto parts = run.partition_for(divider, static_cast<int>(remaining.size()));
    run.emit(TraceKind::PartitionBuilt, divider, parts);
    auto g = build_threshold_graph(inst, std::move(parts), remaining, run.mms(), run.factor());
    run.commit(g, closed_matching(g, ClosureMode::RowFull));
  }
  SolveReport rep = run.finish();
  if (!rep.allocation.complete()) throw InvariantError("approx_mms left goods unallocated");
  fill_verdicts(inst, cfg, rep);
  return rep;
}

SolveReport approx_mms_efx(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records) {
  Run run(inst, cfg, std::move(records));
  for (auto remaining = run.remaining(); !remaining.empty(); remaining = run.remaining()) {
    run.begin_iteration();
    const AgentId divider = remaining.front();
    auto parts = run.partition_for(divider, static_cast<int>(remaining.size()));
    run.emit(TraceKind::PartitionBuilt, divider, parts);

    const auto candidates = cfg.envy_scope == EnvyScope::Allocated ? run.allocated_agents() : [&] {
      std::vector<AgentId> all(inst.agents());
      for (AgentId i = 0; i < inst.agents(); ++i) all[i] = i;
      return all;
    }();
    const PartialAllocation x = run.allocation();

    bool reallocated = false;
    for (std::size_t j = 0; j < parts.size() && !reallocated; ++j) {
      parts[j] = run.shrink(parts[j], remaining);
      run.emit(TraceKind::BundleShrunk, -1, {parts[j]}, {{-1, static_cast<int>(j)}});
      const bool envied = std::any_of(candidates.begin(), candidates.end(), [&](AgentId a) {
        return strongly_envies(inst, x, a, parts[j], cfg.delta);
      });
      if (!envied) continue;
      EnviedSubset pick = most_envious_refine(inst, x, parts[j], candidates, cfg.delta);
      run.reassign(pick.agent, std::move(pick.subset));
      run.check_allocated_invariant();
      reallocated = true;
    }
    if (reallocated) continue;

    auto g = build_threshold_graph(inst, std::move(parts), remaining, run.mms(), run.factor());
    run.commit(g, closed_matching(g, ClosureMode::ColumnCovered));
    run.check_allocated_invariant();
  }
  SolveReport rep = run.finish();
  fill_verdicts(inst, cfg, rep);
  return rep;
}

SolveReport approx_mms_ef1(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records) {
  SolveReport rep = approx_mms_efx(inst, cfg, std::move(records));
  for (AgentId i = 0; i < inst.agents(); ++i) rep.efx_stage_values.push_back(own_value(inst, rep.allocation, i));
  rep.allocation = envy_cycle_elimination(inst, std::move(rep.allocation), cfg.trace ? &rep.trace : nullptr);
  for (AgentId i = 0; i < inst.agents(); ++i) {
    if (own_value(inst, rep.allocation, i) < rep.efx_stage_values[i]) {
      throw InvariantError("envy-cycle elimination lowered agent " + std::to_string(i) + "'s value");
    }
  }
  if (!rep.allocation.complete()) throw InvariantError("approx_mms_ef1 left goods unallocated");
  fill_verdicts(inst, cfg, rep);
  return rep;
}

std::optional<AuditFailure> audit_potential(std::span<const TraceEvent> trace) {
  Potential last;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const TraceEvent& ev = trace[k];
    const Potential& now = ev.potential;
    switch (ev.kind) {
      case TraceKind::Reallocation:
        if (now.allocated != last.allocated || now.value_sum <= last.value_sum) {
          return AuditFailure{k, "reallocation did not strictly raise the value sum at a fixed allocated count"};
        }
        last = now;
        break;
      case TraceKind::MatchingCommitted:
        if (now.allocated <= last.allocated || now.value_sum < last.value_sum) {
          return AuditFailure{k, "committed matching did not grow the allocated set without losing value"};
        }
        last = now;
        break;
      case TraceKind::PartitionBuilt:
      case TraceKind::BundleShrunk:
        if (!(now == last)) return AuditFailure{k, "potential changed outside a reallocation or matching"};
        break;
      case TraceKind::CycleRotated:
      case TraceKind::GoodPlaced:
        break;
    }
  }
  return std::nullopt;
}

}  // namespace fairdiv
