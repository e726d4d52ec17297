#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fairdiv/envy.hpp"
#include "fairdiv/solvers.hpp"
#include "fairdiv/verify.hpp"
#include "support/oracles.hpp"

using namespace fairdiv;

namespace {

std::vector<Value> oracle_shares(const Instance& inst) {
  std::vector<Value> out;
  for (AgentId i = 0; i < inst.agents(); ++i) out.push_back(oracle::mms(oracle::row_of(inst, i), inst.agents()));
  return out;
}

void expect_two_thirds(const Instance& inst, const PartialAllocation& x, const std::vector<Value>& mms) {
  for (AgentId i = 0; i < inst.agents(); ++i) {
    EXPECT_GE(3 * own_value(inst, x, i), 2 * mms[i]) << "agent " << i;
  }
}

SolverConfig traced() {
  SolverConfig cfg;
  cfg.trace = true;
  return cfg;
}

}  // namespace

TEST(Config, FactorAndValidation) {
  SolverConfig cfg;
  EXPECT_EQ(cfg.mms_factor(), Ratio(2, 3));
  cfg.epsilon = Ratio(1, 12);
  EXPECT_EQ(cfg.mms_factor(), Ratio(7, 12));
  cfg.epsilon = Ratio(2, 3);
  EXPECT_THROW(cfg.mms_factor(), ValidationError);
  cfg.epsilon = Ratio(0);
  cfg.delta = Ratio(1);
  EXPECT_THROW(cfg.mms_factor(), ValidationError);
}

TEST(ApproxMms, SingleAgentTakesAll) {
  Instance inst = Instance::from_matrix({{4, 0, 7}});
  SolveReport rep = approx_mms(inst);
  EXPECT_EQ(rep.allocation.bundles[0], (Bundle{0, 1, 2}));
  EXPECT_TRUE(rep.allocation.complete());
  EXPECT_GE(*rep.min_mms_ratio.value, Ratio(1));
}

TEST(ApproxMms, IdenticalOnes) {
  Instance inst = Instance::from_matrix({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  SolveReport rep = approx_mms(inst);
  EXPECT_EQ(rep.mms, oracle_shares(inst));
  for (AgentId i = 0; i < 3; ++i) EXPECT_EQ(rep.allocation.bundles[i].size(), 1u);
  EXPECT_EQ(*rep.min_mms_ratio.value, Ratio(1));
}

TEST(ApproxMms, ExactCapEnforcedWithoutEpsilon) {
  Instance inst = Instance::from_matrix({std::vector<Value>(30, 1), std::vector<Value>(30, 2)});
  EXPECT_THROW(approx_mms(inst), ValidationError);
  SolverConfig cfg;
  cfg.epsilon = Ratio(1, 12);
  SolveReport rep = approx_mms(inst, cfg);
  EXPECT_TRUE(rep.allocation.complete());
}

TEST(ApproxMms, RandomTwoThirds) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4), m = 4 + static_cast<int>(rng() % 8);
    Instance inst = oracle::random_instance(rng, n, m, 50);
    SolveReport rep = approx_mms(inst, traced());
    EXPECT_TRUE(rep.allocation.complete());
    EXPECT_FALSE(validate_allocation(inst, rep.allocation).has_value());
    expect_two_thirds(inst, rep.allocation, oracle_shares(inst));
  }
}

TEST(ApproxMmsEfx, SingleAgent) {
  Instance inst = Instance::from_matrix({{4, 5}});
  SolveReport rep = approx_mms_efx(inst);
  EXPECT_TRUE(rep.efx_holds());
  EXPECT_GE(3 * own_value(inst, rep.allocation, 0), 2 * 9);
}

TEST(ApproxMmsEfx, Prop2Instance) {
  auto [inst, fixture] = fixture_prop2(3);
  SolveReport rep = approx_mms_efx(inst, traced());
  EXPECT_EQ(rep.mms, (std::vector<Value>{0, 0, 0}));
  EXPECT_TRUE(rep.min_mms_ratio.unbounded());
  EXPECT_FALSE(check_efx(inst, rep.allocation, Ratio(1)).has_value());
  EXPECT_TRUE(rep.efx_holds());
}

TEST(ApproxMmsEfx, RandomEfxAndShares) {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4), m = 4 + static_cast<int>(rng() % 8);
    Instance inst = oracle::random_instance(rng, n, m, 50);
    SolveReport rep = approx_mms_efx(inst, traced());
    EXPECT_FALSE(validate_allocation(inst, rep.allocation).has_value());
    EXPECT_FALSE(check_efx(inst, rep.allocation, Ratio(1)).has_value());
    expect_two_thirds(inst, rep.allocation, oracle_shares(inst));
    EXPECT_FALSE(audit_potential(rep.trace).has_value());
  }
}

TEST(ApproxMmsEfx, ShrinkLeavesNoProperSubsetForRemaining) {
  // Every shrunk bundle recorded in the trace: no proper subset meets the
  // threshold of any agent still unallocated at that time.
  std::mt19937_64 rng(107);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4), m = 4 + static_cast<int>(rng() % 8);
    Instance inst = oracle::random_instance(rng, n, m, 50);
    SolveReport rep = approx_mms_efx(inst, traced());
    for (const TraceEvent& ev : rep.trace) {
      if (ev.kind != TraceKind::BundleShrunk) continue;
      const Bundle& b = ev.bundles.at(0);
      std::vector<AgentId> remaining;
      for (AgentId i = 0; i < n; ++i)
        if (std::find(ev.allocated_set.begin(), ev.allocated_set.end(), i) == ev.allocated_set.end())
          remaining.push_back(i);
      for (const auto& s : oracle::subsets(b.goods())) {
        if (s.size() == b.size()) continue;
        for (AgentId i : remaining) EXPECT_LT(3 * oracle::value_of(inst, i, s), 2 * rep.mms[i]);
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(ApproxMmsEfx, DeltaReallocationBound) {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 80; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4), m = 4 + static_cast<int>(rng() % 8);
    Instance inst = oracle::random_instance(rng, n, m, 1000);
    SolverConfig cfg;
    cfg.delta = Ratio(1, 10);
    cfg.trace = true;
    SolveReport rep = approx_mms_efx(inst, cfg);
    EXPECT_FALSE(check_efx(inst, rep.allocation, Ratio(9, 10)).has_value());
    EXPECT_FALSE(audit_potential(rep.trace).has_value());
    for (AgentId i = 0; i < n; ++i) {
      double total = static_cast<double>(std::max<Value>(inst.total(i), 1));
      double bound = std::log(total) / std::log(10.0 / 9.0) + 1;
      EXPECT_LE(rep.reallocations[i], bound) << "agent " << i;
    }
  }
}

TEST(ApproxMmsEf1, PoolEmptyAfterEfxStage) {
  Instance inst = Instance::from_matrix({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  SolveReport efx = approx_mms_efx(inst);
  SolveReport ef1 = approx_mms_ef1(inst);
  ASSERT_TRUE(efx.allocation.complete());
  for (AgentId i = 0; i < 3; ++i) EXPECT_EQ(own_value(inst, ef1.allocation, i), own_value(inst, efx.allocation, i));
}

TEST(ApproxMmsEf1, Prop1Profile) {
  std::vector<Value> row{3, 3, 1, 1, 1};
  Instance inst = Instance::from_matrix({row, row, row});
  SolveReport rep = approx_mms_ef1(inst);
  EXPECT_TRUE(rep.allocation.complete());
  EXPECT_TRUE(rep.ef1_holds());
  EXPECT_EQ(rep.mms, (std::vector<Value>{3, 3, 3}));
  for (AgentId i = 0; i < 3; ++i) EXPECT_GE(own_value(inst, rep.allocation, i), 2);
}

TEST(ApproxMmsEf1, RandomCompleteEf1Shares) {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 120; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4), m = 4 + static_cast<int>(rng() % 8);
    Instance inst = oracle::random_instance(rng, n, m, 50);
    SolveReport rep = approx_mms_ef1(inst);
    EXPECT_TRUE(rep.allocation.complete());
    EXPECT_FALSE(check_ef1(inst, rep.allocation, Ratio(1)).has_value());
    expect_two_thirds(inst, rep.allocation, oracle_shares(inst));
    for (AgentId i = 0; i < n; ++i) EXPECT_GE(own_value(inst, rep.allocation, i), rep.efx_stage_values[i]);
  }
}

TEST(ApproxMmsEf1, Deterministic) {
  std::mt19937_64 rng(127);
  Instance inst = oracle::random_instance(rng, 4, 10, 50);
  SolveReport a = approx_mms_ef1(inst, traced());
  SolveReport b = approx_mms_ef1(inst, traced());
  EXPECT_EQ(a.allocation.bundles, b.allocation.bundles);
  EXPECT_EQ(a.trace.size(), b.trace.size());
}

TEST(Audit, EmptyTraceOk) { EXPECT_FALSE(audit_potential({}).has_value()); }

TEST(Audit, DecreasingReallocationRejected) {
  Trace t(3);
  t[0].kind = TraceKind::MatchingCommitted;
  t[0].potential = {10, 1};
  t[1].kind = TraceKind::Reallocation;
  t[1].potential = {12, 1};
  t[2].kind = TraceKind::Reallocation;
  t[2].potential = {11, 1};
  auto f = audit_potential(t);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->index, 2u);
}

TEST(Audit, MatchingMustGrowCount) {
  Trace t(2);
  t[0].kind = TraceKind::MatchingCommitted;
  t[0].potential = {5, 2};
  t[1].kind = TraceKind::MatchingCommitted;
  t[1].potential = {9, 2};
  auto f = audit_potential(t);
  ASSERT_TRUE(f.has_value());
  EXPECT_EQ(f->index, 1u);
}

TEST(SharedRecords, MustMatchAgents) {
  Instance inst = Instance::from_matrix({{1, 1}, {1, 1}});
  std::vector<MmsRecord> recs{mms_exact(inst, 0, 2)};
  EXPECT_THROW(approx_mms(inst, SolverConfig{}, recs), ValidationError);
}

TEST(StrictScope, RunsOnSmallInstances) {
  // Experimental mode: either completes with a valid allocation or reports a
  // broken invariant; it never returns a malformed allocation.
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = oracle::random_instance(rng, 3, 7, 30);
    SolverConfig cfg;
    cfg.envy_scope = EnvyScope::AllAgents;
    try {
      SolveReport rep = approx_mms_efx(inst, cfg);
      EXPECT_FALSE(validate_allocation(inst, rep.allocation).has_value());
    } catch (const InvariantError&) {
    }
  }
}

TEST(ApproxMmsEfx, ReallocationsAreImprovements) {
  // Search for runs that take the reallocation branch and check each event.
  std::mt19937_64 rng(137);
  int seen = 0;
  for (int trial = 0; trial < 3000 && seen < 20; ++trial) {
    int n = 3 + static_cast<int>(rng() % 3), m = 6 + static_cast<int>(rng() % 7);
    Instance inst = oracle::random_instance(rng, n, m, 50);
    SolveReport rep = approx_mms_efx(inst, traced());
    Potential last;
    for (const TraceEvent& ev : rep.trace) {
      if (ev.kind == TraceKind::Reallocation) {
        ++seen;
        EXPECT_EQ(ev.potential.allocated, last.allocated);
        EXPECT_GT(ev.potential.value_sum, last.value_sum);
        ASSERT_EQ(ev.bundles.size(), 1u);
        EXPECT_GE(ev.agent, 0);
      }
      if (ev.kind == TraceKind::Reallocation || ev.kind == TraceKind::MatchingCommitted) last = ev.potential;
    }
    EXPECT_FALSE(check_efx(inst, rep.allocation, Ratio(1)).has_value());
    expect_two_thirds(inst, rep.allocation, oracle_shares(inst));
  }
  EXPECT_GE(seen, 20);
}
