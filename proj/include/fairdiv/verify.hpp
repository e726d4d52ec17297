#pragma once

// Fairness checkers. Solver output is judged only through these; they are
// plain triple loops over the definitions and never trust solver state.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fairdiv/mms.hpp"
#include "fairdiv/model.hpp"

namespace fairdiv {

/// Agent `envier` fails against `owner`'s bundle; `good` is the removed good
/// (for EF1 the most favourable removal, -1 if the bundle is empty).
struct Violation {
  AgentId envier = -1;
  AgentId owner = -1;
  GoodId good = -1;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Passes iff alpha * v_i(X_j \ g) <= v_i(X_i) for all i, j and g in X_j.
std::optional<Violation> check_efx(const Instance& inst, const PartialAllocation& x, const Ratio& alpha);

/// Passes iff every non-empty X_j has some g with alpha * v_i(X_j \ g) <= v_i(X_i).
std::optional<Violation> check_ef1(const Instance& inst, const PartialAllocation& x, const Ratio& alpha);

/// min_i v_i(X_i) / MMS_i; agents with MMS_i = 0 are always satisfied and
/// are excluded, so the result is unbounded when every share is zero.
struct ShareRatio {
  std::optional<Ratio> value;

  bool unbounded() const { return !value.has_value(); }
  bool at_least(const Ratio& alpha) const { return unbounded() || *value >= alpha; }
  std::string str() const { return value ? value->str() : "inf"; }
};

ShareRatio check_mms_ratio(const Instance& inst, const PartialAllocation& x, std::span<const MmsRecord> records);
ShareRatio check_mms_ratio(const Instance& inst, const PartialAllocation& x, std::span<const Value> mms);

struct FairnessReport {
  Ratio efx_factor;  // largest alpha <= 1 for which alpha-EFX holds
  Ratio ef1_factor;
  std::optional<ShareRatio> mms_ratio;
  Ratio alpha;
  std::vector<Violation> efx_violations;
  std::vector<Violation> ef1_violations;
};

/// Full report at the given alpha; MMS ratio only when shares are supplied.
FairnessReport fairness_report(const Instance& inst, const PartialAllocation& x, const Ratio& alpha,
                               std::optional<std::span<const Value>> mms = std::nullopt);

/// Instance and allocation showing EF1 does not imply better than 1/n-MMS.
std::pair<Instance, PartialAllocation> fixture_prop1(int n);

/// Instance and allocation showing alpha-MMS does not imply any beta-EF1.
std::pair<Instance, PartialAllocation> fixture_prop2(int n);

}  // namespace fairdiv
