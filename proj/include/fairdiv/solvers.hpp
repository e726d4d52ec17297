#pragma once

// The three allocation procedures:
//   approx_mms      complete, (2/3 - eps)-MMS
//   approx_mms_efx  partial,  (2/3 - eps)-MMS and (1 - delta)-EFX
//   approx_mms_ef1  complete, (2/3 - eps)-MMS and (1 - delta)-EF1
// plus the audit of the lexicographic potential recorded in traces.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairdiv/mms.hpp"
#include "fairdiv/model.hpp"
#include "fairdiv/verify.hpp"

namespace fairdiv {

/// Who may take over a bundle during most-envious refinement.
enum class EnvyScope {
  Allocated,  // agents already holding a committed bundle (default)
  AllAgents,  // experimental; unallocated agents compare against an empty bundle
};

enum class TieBreak { LowestIndex };

struct SolverConfig {
  Ratio epsilon{0};
  Ratio delta{0};
  int exact_cap = kDefaultExactCap;
  bool trace = false;
  TieBreak tie_break = TieBreak::LowestIndex;
  EnvyScope envy_scope = EnvyScope::Allocated;

  /// 2/3 - epsilon; throws if not positive or if a knob is outside [0, 1).
  Ratio mms_factor() const;
};

struct SolveReport {
  PartialAllocation allocation;
  std::vector<MmsRecord> records;
  std::vector<Value> mms;
  Ratio mms_factor;
  ShareRatio min_mms_ratio;
  std::optional<Violation> efx_violation;  // at alpha = 1 - delta
  std::optional<Violation> ef1_violation;
  /// Some agent values the pool above its own bundle.
  bool pool_envied = false;
  int iterations = 0;
  std::vector<int> reallocations;  // per agent
  /// Per-agent values right after the EFX stage (approx_mms_ef1 only).
  std::vector<Value> efx_stage_values;
  Trace trace;

  bool efx_holds() const { return !efx_violation.has_value(); }
  bool ef1_holds() const { return !ef1_violation.has_value(); }
};

/// Per-agent share records over all goods with parts = n (exact when
/// epsilon = 0, approximate otherwise).
std::vector<MmsRecord> compute_shares(const Instance& inst, const SolverConfig& cfg);

SolveReport approx_mms(const Instance& inst, const SolverConfig& cfg = {});
SolveReport approx_mms_efx(const Instance& inst, const SolverConfig& cfg = {});
SolveReport approx_mms_ef1(const Instance& inst, const SolverConfig& cfg = {});

/// Same as above but with share records supplied by the caller.
SolveReport approx_mms(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records);
SolveReport approx_mms_efx(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records);
SolveReport approx_mms_ef1(const Instance& inst, const SolverConfig& cfg, std::vector<MmsRecord> records);

struct AuditFailure {
  std::size_t index = 0;
  std::string reason;
};

/// Checks that every reallocation raises the value sum with the allocated
/// count fixed, and every committed matching raises the allocated count
/// without lowering the sum.
std::optional<AuditFailure> audit_potential(std::span<const TraceEvent> trace);

}  // namespace fairdiv
