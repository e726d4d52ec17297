#pragma once

// Core domain types for indivisible-goods fair division with additive,
// non-negative integer valuations. Every fairness comparison in the
// library goes through the exact helpers declared here.

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fairdiv {

using Value = std::int64_t;
using Wide = __int128;

using AgentId = int;
using GoodId = int;

/// Upper bound on the total value an agent assigns to all goods.
inline constexpr Value kMaxAgentTotal = Value{1} << 60;

/// Base class for everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad input or a violated precondition (CLI exit code 2).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A broken internal invariant (CLI exit code 3). Never expected on valid input.
class InvariantError : public Error {
 public:
  using Error::Error;
};

/// Non-negative rational p/q kept in lowest terms.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t p, std::int64_t q = 1);

  /// Parses "p/q" or "p". Whitespace is not accepted.
  static Ratio parse(std::string_view text);

  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }

  bool is_zero() const { return p_ == 0; }

  /// 1 - r; requires r <= 1.
  Ratio complement() const;

  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend bool operator==(const Ratio& a, const Ratio& b) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

  std::string str() const;

 private:
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
};

std::ostream& operator<<(std::ostream& os, const Ratio& r);

/// True iff value >= factor * base, evaluated by cross-multiplication.
inline bool meets(Value value, const Ratio& factor, Value base) {
  return Wide{factor.den()} * value >= Wide{factor.num()} * base;
}

/// True iff factor * value > base.
inline bool scaled_exceeds(const Ratio& factor, Value value, Value base) {
  return Wide{factor.num()} * value > Wide{factor.den()} * base;
}

/// A share threshold factor * base, where base is usually an agent's MMS value.
struct Threshold {
  Ratio factor;
  Value base = 0;

  bool met_by(Value v) const { return meets(v, factor, base); }
};

/// Sorted, duplicate-free list of good indices.
class Bundle {
 public:
  Bundle() = default;
  Bundle(std::initializer_list<GoodId> goods);
  /// Sorts the input; throws ValidationError on duplicates or negative ids.
  explicit Bundle(std::vector<GoodId> goods);

  const std::vector<GoodId>& goods() const { return goods_; }
  std::size_t size() const { return goods_.size(); }
  bool empty() const { return goods_.empty(); }
  bool contains(GoodId g) const;

  auto begin() const { return goods_.begin(); }
  auto end() const { return goods_.end(); }

  Bundle without(GoodId g) const;
  Bundle merged(const Bundle& other) const;

  friend bool operator==(const Bundle&, const Bundle&) = default;

 private:
  std::vector<GoodId> goods_;
};

/// Additive valuation matrix: agents x goods.
class Instance {
 public:
  /// Validates shape, sign and the per-agent total bound.
  static Instance from_matrix(std::vector<std::vector<Value>> rows);

  /// Instance with n agents over zero goods.
  static Instance without_goods(int agents);

  int agents() const { return n_; }
  int goods() const { return m_; }

  Value value(AgentId agent, GoodId good) const { return rows_[agent][good]; }
  std::span<const Value> row(AgentId agent) const { return rows_[agent]; }
  const std::vector<std::vector<Value>>& matrix() const { return rows_; }

  Value total(AgentId agent) const;

 private:
  int n_ = 0;
  int m_ = 0;
  std::vector<std::vector<Value>> rows_;
};

/// Exact additive value of a bundle; throws ValidationError on bad indices.
Value bundle_value(const Instance& inst, AgentId agent, const Bundle& b);

/// Per-agent bundles plus the pool of unallocated goods.
struct PartialAllocation {
  std::vector<Bundle> bundles;
  Bundle pool;

  bool complete() const { return pool.empty(); }

  /// Empty bundles, every good in the pool.
  static PartialAllocation empty_for(const Instance& inst);
};

/// Returns nullopt when the allocation partitions all goods, otherwise
/// a description of the first violated invariant.
std::optional<std::string> validate_allocation(const Instance& inst, const PartialAllocation& x);

/// Rebuilds the pool as every good not held by an agent.
Bundle unallocated_goods(const Instance& inst, std::span<const Bundle> bundles);

/// Value agent holds under x.
inline Value own_value(const Instance& inst, const PartialAllocation& x, AgentId agent) {
  return bundle_value(inst, agent, x.bundles[agent]);
}

enum class TraceKind {
  PartitionBuilt,
  BundleShrunk,
  Reallocation,
  MatchingCommitted,
  CycleRotated,
  GoodPlaced,
};

std::string_view to_string(TraceKind kind);

/// (sum of values held by allocated agents, number of allocated agents)
struct Potential {
  Wide value_sum = 0;
  int allocated = 0;

  friend bool operator==(const Potential&, const Potential&) = default;
};

struct TraceEvent {
  int iteration = 0;
  TraceKind kind = TraceKind::PartitionBuilt;
  std::vector<AgentId> allocated_set;
  Potential potential;

  // Payload; which fields are filled depends on kind.
  AgentId agent = -1;
  std::vector<Bundle> bundles;
  std::vector<Bundle> before;
  std::vector<std::pair<AgentId, int>> pairs;
};

using Trace = std::vector<TraceEvent>;

}  // namespace fairdiv
