#pragma once

// Maximin shares: exhaustive oracle, exact bin-covering engine, the scaled
// approximate engine, and the partition reduction used by the solvers.

#include <optional>
#include <span>
#include <vector>

#include "fairdiv/model.hpp"

namespace fairdiv {

inline constexpr int kDefaultBruteforceCap = 12;
inline constexpr int kDefaultExactCap = 24;

/// An agent's maximin share over all goods with a witness partition.
struct MmsRecord {
  AgentId agent = 0;
  int parts = 1;
  Value value = 0;
  std::vector<Bundle> witness;
  /// 1 for exact records, 1 - eps for approximate ones.
  Ratio quality{1};

  /// Smallest witness bundle value under the agent's valuation.
  Value witness_min(const Instance& inst) const;
};

/// Exhaustive enumeration of set partitions. Throws ValidationError above cap.
MmsRecord mms_bruteforce(const Instance& inst, AgentId agent, int parts,
                         int cap = kDefaultBruteforceCap);

/// Binary search over targets with feasible_cover as the decision oracle.
MmsRecord mms_exact(const Instance& inst, AgentId agent, int parts, int exact_cap = kDefaultExactCap);

/// Partition of item positions into `parts` groups each summing to at least
/// target, or nullopt when none exists. Throws ValidationError above cap.
std::optional<std::vector<std::vector<int>>> feasible_cover(std::span<const Value> values, int parts,
                                                            Value target,
                                                            int cap = kDefaultExactCap);

/// (1 - eps)-approximate share. `value` is the witness minimum, a certified
/// lower bound with value >= (1 - eps) * MMS.
MmsRecord mms_approx(const Instance& inst, AgentId agent, int parts, const Ratio& eps,
                     int exact_cap = kDefaultExactCap);

/// Witness-bundle classes by how much value the removed goods took out.
struct ReductionBuckets {
  std::vector<int> c0;
  std::vector<int> c1;
  std::vector<int> c2;
};

struct Reduction {
  std::vector<Bundle> bundles;
  ReductionBuckets buckets;
};

/// Splits the goods outside `removed` into r bundles, each worth at least t
/// to the agent. Requires every removed bundle to be worth strictly less
/// than t and the witness minimum w to satisfy 2w >= 3t.
Reduction reduce_partition(const Instance& inst, AgentId agent, const MmsRecord& record,
                           std::span<const Bundle> removed, int r, const Threshold& t);

}  // namespace fairdiv
