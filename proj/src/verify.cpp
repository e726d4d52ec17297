#include "fairdiv/verify.hpp"

#include <algorithm>

namespace fairdiv {

namespace {

Ratio capped(Value own, Value rival) {
  if (rival <= 0 || own >= rival) return Ratio(1);
  return Ratio(own, rival);
}

// Smallest value agent i can leave in X_j by dropping one good, and that good.
std::pair<Value, GoodId> best_removal(const Instance& inst, AgentId i, const Bundle& b) {
  Value whole = bundle_value(inst, i, b);
  GoodId pick = -1;
  Value best_drop = -1;
  for (GoodId g : b) {
    if (inst.value(i, g) > best_drop) {
      best_drop = inst.value(i, g);
      pick = g;
    }
  }
  return {whole - std::max<Value>(best_drop, 0), pick};
}

std::vector<Violation> efx_violations(const Instance& inst, const PartialAllocation& x, const Ratio& alpha,
                                      bool first_only) {
  std::vector<Violation> out;
  for (AgentId i = 0; i < inst.agents(); ++i) {
    const Value own = own_value(inst, x, i);
    for (AgentId j = 0; j < inst.agents(); ++j) {
      if (i == j) continue;
      const Value whole = bundle_value(inst, i, x.bundles[j]);
      for (GoodId g : x.bundles[j]) {
        if (!meets(own, alpha, whole - inst.value(i, g))) {
          out.push_back({i, j, g});
          if (first_only) return out;
        }
      }
    }
  }
  return out;
}

std::vector<Violation> ef1_violations(const Instance& inst, const PartialAllocation& x, const Ratio& alpha,
                                      bool first_only) {
  std::vector<Violation> out;
  for (AgentId i = 0; i < inst.agents(); ++i) {
    const Value own = own_value(inst, x, i);
    for (AgentId j = 0; j < inst.agents(); ++j) {
      if (i == j || x.bundles[j].empty()) continue;
      auto [rest, g] = best_removal(inst, i, x.bundles[j]);
      if (!meets(own, alpha, rest)) {
        out.push_back({i, j, g});
        if (first_only) return out;
      }
    }
  }
  return out;
}

void require_valid(const Instance& inst, const PartialAllocation& x) {
  if (auto bad = validate_allocation(inst, x)) throw ValidationError("invalid allocation: " + *bad);
}

}  // namespace

std::optional<Violation> check_efx(const Instance& inst, const PartialAllocation& x, const Ratio& alpha) {
  require_valid(inst, x);
  auto v = efx_violations(inst, x, alpha, true);
  if (v.empty()) return std::nullopt;
  return v.front();
}

std::optional<Violation> check_ef1(const Instance& inst, const PartialAllocation& x, const Ratio& alpha) {
  require_valid(inst, x);
  auto v = ef1_violations(inst, x, alpha, true);
  if (v.empty()) return std::nullopt;
  return v.front();
}

ShareRatio check_mms_ratio(const Instance& inst, const PartialAllocation& x, std::span<const Value> mms) {
  require_valid(inst, x);
  if (mms.size() != static_cast<std::size_t>(inst.agents())) {
    throw ValidationError("MMS values must cover every agent");
  }
  ShareRatio res;
  for (AgentId i = 0; i < inst.agents(); ++i) {
    if (mms[i] == 0) continue;
    Ratio r(own_value(inst, x, i), mms[i]);
    if (!res.value || r < *res.value) res.value = r;
  }
  return res;
}

ShareRatio check_mms_ratio(const Instance& inst, const PartialAllocation& x, std::span<const MmsRecord> records) {
  std::vector<Value> mms(inst.agents(), 0);
  std::vector<char> seen(inst.agents(), 0);
  for (const MmsRecord& r : records) {
    if (r.agent < 0 || r.agent >= inst.agents()) throw ValidationError("MMS record for an unknown agent");
    mms[r.agent] = r.value;
    seen[r.agent] = 1;
  }
  if (std::count(seen.begin(), seen.end(), 0) > 0) throw ValidationError("MMS records must cover every agent");
  return check_mms_ratio(inst, x, std::span<const Value>(mms));
}

FairnessReport fairness_report(const Instance& inst, const PartialAllocation& x, const Ratio& alpha,
                               std::optional<std::span<const Value>> mms) {
  require_valid(inst, x);
  FairnessReport rep;
  rep.alpha = alpha;
  rep.efx_factor = Ratio(1);
  rep.ef1_factor = Ratio(1);
  for (AgentId i = 0; i < inst.agents(); ++i) {
    const Value own = own_value(inst, x, i);
    for (AgentId j = 0; j < inst.agents(); ++j) {
      if (i == j || x.bundles[j].empty()) continue;
      const Value whole = bundle_value(inst, i, x.bundles[j]);
      Value lightest = whole;
      for (GoodId g : x.bundles[j]) lightest = std::min(lightest, inst.value(i, g));
      rep.efx_factor = std::min(rep.efx_factor, capped(own, whole - lightest));
      rep.ef1_factor = std::min(rep.ef1_factor, capped(own, best_removal(inst, i, x.bundles[j]).first));
    }
  }
  rep.efx_violations = efx_violations(inst, x, alpha, false);
  rep.ef1_violations = ef1_violations(inst, x, alpha, false);
  if (mms) rep.mms_ratio = check_mms_ratio(inst, x, *mms);
  return rep;
}

std::pair<Instance, PartialAllocation> fixture_prop1(int n) {
  if (n < 2) throw ValidationError("fixture_prop1 needs n >= 2");
  const int m = 2 * n - 1;
  std::vector<Value> row(m, 1);
  for (int g = 0; g < n - 1; ++g) row[g] = n;
  Instance inst = Instance::from_matrix(std::vector<std::vector<Value>>(n, row));
  PartialAllocation x;
  for (int i = 0; i < n - 1; ++i) x.bundles.push_back(Bundle{i, n - 1 + i});
  x.bundles.push_back(Bundle{m - 1});
  return {std::move(inst), std::move(x)};
}

std::pair<Instance, PartialAllocation> fixture_prop2(int n) {
  if (n < 3) throw ValidationError("fixture_prop2 needs n >= 3");
  Instance inst = Instance::from_matrix(std::vector<std::vector<Value>>(n, std::vector<Value>{1, 1}));
  PartialAllocation x;
  x.bundles.resize(n);
  x.bundles[n - 1] = Bundle{0, 1};
  return {std::move(inst), std::move(x)};
}

}  // namespace fairdiv
