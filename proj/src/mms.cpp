#include "fairdiv/mms.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

namespace fairdiv {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<Value>& key) const noexcept {
    std::size_t h = 0xcbf29ce484222325ULL;
    for (Value v : key) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return h;
  }
};

// Depth-first bin completion for bin covering. Items are visited in
// descending order; bins that reach the target drop out of the state, and
// open-bin fills (sorted) plus the item cursor key a memo of failed states.
class CoverSearch {
 public:
  CoverSearch(std::span<const Value> values, int parts, Value target)
      : values_(values.begin(), values.end()), parts_(parts), target_(target) {}

  std::optional<std::vector<std::vector<int>>> run() {
    const int n = static_cast<int>(values_.size());
    std::vector<std::vector<int>> groups(parts_);
    if (target_ <= 0) {
      for (int i = 0; i < n; ++i) groups[0].push_back(i);
      return groups;
    }
    Wide total = 0;
    for (Value v : values_) total += v;
    if (total < Wide{target_} * parts_) return std::nullopt;

    // An item worth the whole target covers a bin on its own; giving each
    // such item a private bin never hurts.
    std::vector<int> large, small;
    for (int i = 0; i < n; ++i) {
      if (values_[i] >= target_) {
        large.push_back(i);
      } else if (values_[i] > 0) {
        small.push_back(i);
      }
    }
    std::stable_sort(large.begin(), large.end(), [&](int a, int b) { return values_[a] > values_[b]; });
    std::stable_sort(small.begin(), small.end(), [&](int a, int b) { return values_[a] > values_[b]; });

    assign_.assign(n, 0);
    int next_bin = 0;
    for (int i : large) {
      assign_[i] = next_bin < parts_ ? next_bin++ : 0;
    }
    const int open = parts_ - next_bin;
    if (open > 0) {
      items_ = small;
      suffix_.assign(items_.size() + 1, 0);
      for (int k = static_cast<int>(items_.size()) - 1; k >= 0; --k) suffix_[k] = suffix_[k + 1] + values_[items_[k]];
      fill_.assign(open, 0);
      covered_.assign(open, false);
      uncovered_ = open;
      deficit_ = Wide{target_} * open;
      bin_of_.assign(items_.size(), -1);
      if (!dfs(0)) return std::nullopt;
      for (std::size_t k = 0; k < items_.size(); ++k) {
        assign_[items_[k]] = bin_of_[k] >= 0 ? next_bin + bin_of_[k] : 0;
      }
    } else {
      for (int i : small) assign_[i] = 0;
    }
    for (int i = 0; i < n; ++i) groups[assign_[i]].push_back(i);
    return groups;
  }

 private:
  bool dfs(std::size_t k) {
    if (uncovered_ == 0) return true;
    if (k == items_.size()) return false;
    if (Wide{suffix_[k]} < deficit_) return false;

    std::vector<Value> key;
    key.reserve(fill_.size() + 1);
    key.push_back(static_cast<Value>(k));
    for (std::size_t b = 0; b < fill_.size(); ++b) {
      if (!covered_[b]) key.push_back(fill_[b]);
    }
    std::sort(key.begin() + 1, key.end());
    if (failed_.contains(key)) return false;

    const Value v = values_[items_[k]];
    std::vector<int> completing, partial;
    std::vector<Value> seen;
    for (int b = 0; b < static_cast<int>(fill_.size()); ++b) {
      if (covered_[b]) continue;
      if (std::find(seen.begin(), seen.end(), fill_[b]) != seen.end()) continue;
      seen.push_back(fill_[b]);
      if (fill_[b] + v == target_) {
        // An exact fit dominates every other placement.
        completing.assign(1, b);
        partial.clear();
        break;
      }
      (fill_[b] + v >= target_ ? completing : partial).push_back(b);
    }
    auto by_fill = [&](int a, int b) { return fill_[a] < fill_[b]; };
    std::sort(completing.begin(), completing.end(), by_fill);
    std::sort(partial.begin(), partial.end(), by_fill);
    completing.insert(completing.end(), partial.begin(), partial.end());

    for (int b : completing) {
      const Value before = fill_[b];
      const Value need_before = target_ - before;
      fill_[b] += v;
      bin_of_[k] = b;
      const bool closes = fill_[b] >= target_;
      deficit_ -= closes ? need_before : v;
      if (closes) {
        covered_[b] = true;
        --uncovered_;
      }
      if (dfs(k + 1)) return true;
      if (closes) {
        covered_[b] = false;
        ++uncovered_;
      }
      deficit_ += closes ? need_before : v;
      fill_[b] = before;
      bin_of_[k] = -1;
    }
    if (failed_.size() < kMemoLimit) failed_.insert(std::move(key));
    return false;
  }

  static constexpr std::size_t kMemoLimit = std::size_t{1} << 22;

  std::vector<Value> values_;
  int parts_;
  Value target_;
  std::vector<int> assign_;
  std::vector<int> items_;
  std::vector<Value> suffix_;
  std::vector<Value> fill_;
  std::vector<bool> covered_;
  std::vector<int> bin_of_;
  int uncovered_ = 0;
  Wide deficit_ = 0;
  std::unordered_set<std::vector<Value>, KeyHash> failed_;
};

std::vector<Bundle> to_bundles(const std::vector<std::vector<int>>& groups) {
  std::vector<Bundle> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.emplace_back(g);
  return out;
}

void check_agent(const Instance& inst, AgentId agent, int parts) {
  if (agent < 0 || agent >= inst.agents()) throw ValidationError("agent index out of range");
  if (parts < 1) throw ValidationError("parts must be positive");
}

// Longest-processing-time greedy: a quick feasible lower bound.
std::pair<Value, std::vector<std::vector<int>>> greedy_cover(std::span<const Value> values, int parts) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] > values[b]; });
  std::vector<std::vector<int>> groups(parts);
  std::vector<Value> fill(parts, 0);
  for (int i : order) {
    int b = static_cast<int>(std::min_element(fill.begin(), fill.end()) - fill.begin());
    fill[b] += values[i];
    groups[b].push_back(i);
  }
  return {*std::min_element(fill.begin(), fill.end()), std::move(groups)};
}

// Largest target the items can cover, by binary search over feasible_cover.
std::pair<Value, std::vector<std::vector<int>>> max_cover(std::span<const Value> values, int parts) {
  auto [lo, best] = greedy_cover(values, parts);
  Wide total = 0;
  int positive = 0;
  for (Value v : values) {
    total += v;
    positive += v > 0;
  }
  if (positive < parts) return {0, std::move(best)};
  Value hi = static_cast<Value>(total / parts);
  while (lo < hi) {
    Value mid = lo + (hi - lo + 1) / 2;
    if (auto groups = CoverSearch(values, parts, mid).run()) {
      lo = mid;
      best = std::move(*groups);
    } else {
      hi = mid - 1;
    }
  }
  return {lo, std::move(best)};
}

}  // namespace

Value MmsRecord::witness_min(const Instance& inst) const {
  if (witness.empty()) return 0;
  Value best = bundle_value(inst, agent, witness.front());
  for (const Bundle& b : witness) best = std::min(best, bundle_value(inst, agent, b));
  return best;
}

MmsRecord mms_bruteforce(const Instance& inst, AgentId agent, int parts, int cap) {
  check_agent(inst, agent, parts);
  const int m = inst.goods();
  if (m > cap) {
    throw ValidationError("brute-force MMS cap exceeded: " + std::to_string(m) + " goods > " + std::to_string(cap));
  }
  auto row = inst.row(agent);
  std::vector<int> label(m, 0), best_label(m, 0);
  std::vector<Value> sums(parts, 0);
  Value best = -1;

  // Restricted growth strings: good g joins one of the blocks used so far
  // or opens the next one, so every set partition is visited once.
  auto rec = [&](auto&& self, int g, int used) -> void {
    if (g == m) {
      Value low = used < parts ? 0 : *std::min_element(sums.begin(), sums.end());
      if (low > best) {
        best = low;
        best_label = label;
      }
      return;
    }
    const int limit = std::min(used + 1, parts);
    for (int b = 0; b < limit; ++b) {
      label[g] = b;
      sums[b] += row[g];
      self(self, g + 1, std::max(used, b + 1));
      sums[b] -= row[g];
    }
  };
  rec(rec, 0, 0);

  std::vector<std::vector<int>> groups(parts);
  for (int g = 0; g < m; ++g) groups[best_label[g]].push_back(g);
  MmsRecord rec_out;
  rec_out.agent = agent;
  rec_out.parts = parts;
  rec_out.value = std::max<Value>(best, 0);
  rec_out.witness = to_bundles(groups);
  return rec_out;
}

std::optional<std::vector<std::vector<int>>> feasible_cover(std::span<const Value> values, int parts,
                                                            Value target, int cap) {
  if (parts < 1) throw ValidationError("parts must be positive");
  if (static_cast<int>(values.size()) > cap) {
    throw ValidationError("exact cover cap exceeded: " + std::to_string(values.size()) + " items > " +
                          std::to_string(cap));
  }
  for (Value v : values) {
    if (v < 0) throw ValidationError("negative item value");
  }
  return CoverSearch(values, parts, target).run();
}

MmsRecord mms_exact(const Instance& inst, AgentId agent, int parts, int exact_cap) {
  check_agent(inst, agent, parts);
  if (inst.goods() > exact_cap) {
    throw ValidationError("exact MMS cap exceeded: " + std::to_string(inst.goods()) + " goods > " +
                          std::to_string(exact_cap));
  }
  auto [value, groups] = max_cover(inst.row(agent), parts);
  MmsRecord out;
  out.agent = agent;
  out.parts = parts;
  out.value = value;
  out.witness = to_bundles(groups);
  return out;
}

MmsRecord mms_approx(const Instance& inst, AgentId agent, int parts, const Ratio& eps, int exact_cap) {
  check_agent(inst, agent, parts);
  if (eps.is_zero() || eps >= Ratio(1)) throw ValidationError("epsilon must lie in (0, 1)");
  auto row = inst.row(agent);
  const Value total = inst.total(agent);
  const int m = inst.goods();

  MmsRecord out;
  out.agent = agent;
  out.parts = parts;
  out.quality = eps.complement();

  // Scaled values lose less than one unit per good, so a witness found at
  // scale K certifies MMS <= total * (MMS' + m) / K. Double K until the
  // witness provably reaches (1 - eps) of that bound; K >= total is the
  // identity scaling and reduces to the exact engine.
  Wide k = (Wide{std::max(m, 1)} * parts * eps.den() + eps.num() - 1) / eps.num();
  for (;;) {
    if (k >= total) {
      if (m <= exact_cap) {
        MmsRecord exact = mms_exact(inst, agent, parts, exact_cap);
        exact.quality = out.quality;
        return exact;
      }
      auto [value, groups] = max_cover(row, parts);
      out.value = value;
      out.witness = to_bundles(groups);
      return out;
    }
    std::vector<Value> scaled(m);
    for (int g = 0; g < m; ++g) scaled[g] = static_cast<Value>(Wide{row[g]} * k / total);
    auto [scaled_value, groups] = max_cover(scaled, parts);
    out.witness = to_bundles(groups);
    out.value = out.witness_min(inst);

    Wide upper = std::min<Wide>(Wide{total} / parts, Wide{total} * (Wide{scaled_value} + m) / k);
    if (Wide{eps.den()} * out.value >= Wide{eps.den() - eps.num()} * upper) return out;
    k *= 2;
  }
}

Reduction reduce_partition(const Instance& inst, AgentId agent, const MmsRecord& record,
                           std::span<const Bundle> removed, int r, const Threshold& t) {
  if (agent < 0 || agent >= inst.agents()) throw ValidationError("agent index out of range");
  if (record.agent != agent) throw ValidationError("MMS record belongs to a different agent");
  const int parts = static_cast<int>(record.witness.size());
  if (parts != record.parts) throw ValidationError("witness size does not match parts");
  if (r < 1 || r != parts - static_cast<int>(removed.size())) {
    throw ValidationError("r must equal parts minus the number of removed bundles and be positive");
  }

  std::vector<char> gone(inst.goods(), 0);
  for (std::size_t k = 0; k < removed.size(); ++k) {
    for (GoodId g : removed[k]) {
      if (g >= inst.goods()) throw ValidationError("removed bundle " + std::to_string(k) + " has a bad index");
      if (gone[g]) throw ValidationError("removed bundles overlap at good " + std::to_string(g));
      gone[g] = 1;
    }
    if (t.met_by(bundle_value(inst, agent, removed[k]))) {
      throw ValidationError("removed bundle " + std::to_string(k) + " is worth at least the threshold");
    }
  }
  std::vector<int> covered(inst.goods(), 0);
  for (const Bundle& b : record.witness) {
    for (GoodId g : b) {
      if (g >= inst.goods() || covered[g]++) {
        throw ValidationError("witness is not a partition of all goods at good " + std::to_string(g));
      }
    }
  }
  if (std::count(covered.begin(), covered.end(), 0) != 0) {
    throw ValidationError("witness does not cover every good");
  }

  const Value w = record.witness_min(inst);
  const Wide p = t.factor.num();
  const Wide q = t.factor.den();
  const Wide scaled_t = p * t.base;  // t = scaled_t / q
  if (2 * q * w < 3 * scaled_t) {
    throw ValidationError("witness minimum " + std::to_string(w) + " is below 3/2 of the threshold");
  }

  Reduction out;
  std::vector<Bundle> kept(parts);
  for (int j = 0; j < parts; ++j) {
    std::vector<GoodId> keep;
    Value removed_value = 0;
    for (GoodId g : record.witness[j]) {
      if (gone[g]) {
        removed_value += inst.value(agent, g);
      } else {
        keep.push_back(g);
      }
    }
    kept[j] = Bundle(std::move(keep));
    const Wide slack = Wide{w} - removed_value;
    if (q * slack >= scaled_t) {
      out.buckets.c0.push_back(j);
    } else if (2 * q * slack >= scaled_t) {
      out.buckets.c1.push_back(j);
    } else {
      out.buckets.c2.push_back(j);
    }
  }

  std::vector<Bundle> qualifying;
  for (int j : out.buckets.c0) qualifying.push_back(kept[j]);
  const auto& c1 = out.buckets.c1;
  for (std::size_t k = 0; k + 1 < c1.size(); k += 2) qualifying.push_back(kept[c1[k]].merged(kept[c1[k + 1]]));
  if (static_cast<int>(qualifying.size()) < r) {
    throw InvariantError("reduction produced " + std::to_string(qualifying.size()) + " bundles, needed " +
                         std::to_string(r));
  }

  out.bundles.assign(qualifying.begin(), qualifying.begin() + r);
  Bundle& last = out.bundles.back();
  for (std::size_t k = r; k < qualifying.size(); ++k) last = last.merged(qualifying[k]);
  if (c1.size() % 2 == 1) last = last.merged(kept[c1.back()]);
  for (int j : out.buckets.c2) last = last.merged(kept[j]);

  for (const Bundle& b : out.bundles) {
    if (!t.met_by(bundle_value(inst, agent, b))) throw InvariantError("reduced bundle fell below the threshold");
  }
  return out;
}

}  // namespace fairdiv
