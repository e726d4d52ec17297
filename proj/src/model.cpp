#include "fairdiv/model.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace fairdiv {

namespace {

std::int64_t narrow(Wide w, const char* what) {
  if (w > std::numeric_limits<std::int64_t>::max() || w < std::numeric_limits<std::int64_t>::min()) {
    throw ValidationError(std::string("ratio overflow in ") + what);
  }
  return static_cast<std::int64_t>(w);
}

Ratio reduce(Wide p, Wide q, const char* what) {
  if (q == 0) throw ValidationError(std::string("zero denominator in ") + what);
  if (q < 0) {
    p = -p;
    q = -q;
  }
  if (p < 0) throw ValidationError(std::string("negative ratio in ") + what);
  Wide a = p, b = q;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    p /= a;
    q /= a;
  }
  return Ratio(narrow(p, what), narrow(q, what));
}

}  // namespace

Ratio::Ratio(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw ValidationError("ratio denominator must be positive");
  if (p < 0) throw ValidationError("ratio must be non-negative");
  std::int64_t g = std::gcd(p, q);
  p_ = p / g;
  q_ = q / g;
}

Ratio Ratio::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t out = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ValidationError("malformed fraction '" + std::string(text) + "'");
    }
    return out;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Ratio(parse_int(text), 1);
  std::int64_t p = parse_int(text.substr(0, slash));
  std::int64_t q = parse_int(text.substr(slash + 1));
  if (q <= 0 || p < 0) throw ValidationError("fraction '" + std::string(text) + "' out of range");
  return Ratio(p, q);
}

Ratio Ratio::complement() const {
  if (p_ > q_) throw ValidationError("complement of a ratio above one");
  return Ratio(q_ - p_, q_);
}

Ratio operator-(const Ratio& a, const Ratio& b) {
  Wide p = Wide{a.p_} * b.q_ - Wide{b.p_} * a.q_;
  return reduce(p, Wide{a.q_} * b.q_, "subtraction");
}

Ratio operator*(const Ratio& a, const Ratio& b) {
  return reduce(Wide{a.p_} * b.p_, Wide{a.q_} * b.q_, "multiplication");
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  Wide lhs = Wide{a.p_} * b.q_;
  Wide rhs = Wide{b.p_} * a.q_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Ratio::str() const {
  if (q_ == 1) return std::to_string(p_);
  return std::to_string(p_) + "/" + std::to_string(q_);
}

std::ostream& operator<<(std::ostream& os, const Ratio& r) { return os << r.str(); }

Bundle::Bundle(std::initializer_list<GoodId> goods) : Bundle(std::vector<GoodId>(goods)) {}

Bundle::Bundle(std::vector<GoodId> goods) : goods_(std::move(goods)) {
  std::sort(goods_.begin(), goods_.end());
  if (std::adjacent_find(goods_.begin(), goods_.end()) != goods_.end()) {
    throw ValidationError("bundle contains a duplicated good");
  }
  if (!goods_.empty() && goods_.front() < 0) throw ValidationError("negative good index");
}

bool Bundle::contains(GoodId g) const { return std::binary_search(goods_.begin(), goods_.end(), g); }

Bundle Bundle::without(GoodId g) const {
  Bundle out;
  out.goods_.reserve(goods_.size());
  for (GoodId h : goods_) {
    if (h != g) out.goods_.push_back(h);
  }
  return out;
}

Bundle Bundle::merged(const Bundle& other) const {
  Bundle out;
  out.goods_.reserve(goods_.size() + other.goods_.size());
  std::set_union(goods_.begin(), goods_.end(), other.goods_.begin(), other.goods_.end(),
                 std::back_inserter(out.goods_));
  if (out.goods_.size() != goods_.size() + other.goods_.size()) {
    throw ValidationError("merging overlapping bundles");
  }
  return out;
}

Instance Instance::from_matrix(std::vector<std::vector<Value>> rows) {
  if (rows.empty()) throw ValidationError("instance needs at least one agent");
  const std::size_t m = rows.front().size();
  if (m > static_cast<std::size_t>(std::numeric_limits<int>::max())) throw ValidationError("too many goods");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) {
      std::ostringstream msg;
      msg << "ragged valuation matrix: row " << i << " has " << rows[i].size() << " entries, expected " << m;
      throw ValidationError(msg.str());
    }
    Value total = 0;
    for (std::size_t g = 0; g < m; ++g) {
      Value v = rows[i][g];
      if (v < 0) {
        std::ostringstream msg;
        msg << "negative valuation at row " << i << ", column " << g;
        throw ValidationError(msg.str());
      }
      if (v > kMaxAgentTotal - total) {
        std::ostringstream msg;
        msg << "row " << i << " total exceeds 2^60 at column " << g;
        throw ValidationError(msg.str());
      }
      total += v;
    }
  }
  Instance inst;
  inst.n_ = static_cast<int>(rows.size());
  inst.m_ = static_cast<int>(m);
  inst.rows_ = std::move(rows);
  return inst;
}

Instance Instance::without_goods(int agents) {
  if (agents < 1) throw ValidationError("instance needs at least one agent");
  return from_matrix(std::vector<std::vector<Value>>(agents));
}

Value Instance::total(AgentId agent) const {
  Value s = 0;
  for (Value v : rows_[agent]) s += v;
  return s;
}

Value bundle_value(const Instance& inst, AgentId agent, const Bundle& b) {
  if (agent < 0 || agent >= inst.agents()) {
    throw ValidationError("agent index " + std::to_string(agent) + " out of range");
  }
  auto row = inst.row(agent);
  Value s = 0;
  for (GoodId g : b) {
    if (g >= inst.goods()) throw ValidationError("good index " + std::to_string(g) + " out of range");
    s += row[g];
  }
  return s;
}

PartialAllocation PartialAllocation::empty_for(const Instance& inst) {
  PartialAllocation x;
  x.bundles.resize(inst.agents());
  std::vector<GoodId> all(inst.goods());
  std::iota(all.begin(), all.end(), 0);
  x.pool = Bundle(std::move(all));
  return x;
}

std::optional<std::string> validate_allocation(const Instance& inst, const PartialAllocation& x) {
  if (x.bundles.size() != static_cast<std::size_t>(inst.agents())) {
    return "expected " + std::to_string(inst.agents()) + " bundles, got " + std::to_string(x.bundles.size());
  }
  std::vector<int> seen(inst.goods(), 0);
  auto mark = [&](const Bundle& b) -> std::optional<std::string> {
    for (GoodId g : b) {
      if (g < 0 || g >= inst.goods()) return "good index " + std::to_string(g) + " out of range";
      if (seen[g]++) return "good " + std::to_string(g) + " duplicated";
    }
    return std::nullopt;
  };
  for (const Bundle& b : x.bundles) {
    if (auto err = mark(b)) return err;
  }
  if (auto err = mark(x.pool)) return err;
  for (GoodId g = 0; g < inst.goods(); ++g) {
    if (!seen[g]) return "good " + std::to_string(g) + " unplaced";
  }
  return std::nullopt;
}

Bundle unallocated_goods(const Instance& inst, std::span<const Bundle> bundles) {
  std::vector<char> held(inst.goods(), 0);
  for (const Bundle& b : bundles) {
    for (GoodId g : b) held[g] = 1;
  }
  std::vector<GoodId> pool;
  for (GoodId g = 0; g < inst.goods(); ++g) {
    if (!held[g]) pool.push_back(g);
  }
  return Bundle(std::move(pool));
}

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::PartitionBuilt: return "partition-built";
    case TraceKind::BundleShrunk: return "bundle-shrunk";
    case TraceKind::Reallocation: return "reallocation";
    case TraceKind::MatchingCommitted: return "matching-committed";
    case TraceKind::CycleRotated: return "cycle-rotated";
    case TraceKind::GoodPlaced: return "good-placed";
  }
  return "unknown";
}

}  // namespace fairdiv
