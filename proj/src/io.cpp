#include "fairdiv/io.hpp"

#include <fstream>
#include <limits>
#include <sstream>

namespace fairdiv::io {

namespace {

Json bundle_json(const Bundle& b) { return Json(b.goods()); }

Bundle bundle_from(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array of good indices");
  std::vector<GoodId> goods;
  for (const auto& g : j) {
    if (!g.is_number_integer()) throw ValidationError(what + " holds a non-integer index");
    goods.push_back(g.get<GoodId>());
  }
  return Bundle(std::move(goods));
}

std::string wide_str(Wide w) {
  if (w == 0) return "0";
  bool neg = w < 0;
  if (neg) w = -w;
  std::string s;
  while (w > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(w % 10)));
    w /= 10;
  }
  return neg ? "-" + s : s;
}

Json wide_json(Wide w) {
  if (w <= std::numeric_limits<std::int64_t>::max() && w >= std::numeric_limits<std::int64_t>::min()) {
    return Json(static_cast<std::int64_t>(w));
  }
  return Json(wide_str(w));
}

Json violation_json(const std::optional<Violation>& v) {
  if (!v) return nullptr;
  return Json{{"envier", v->envier}, {"owner", v->owner}, {"good", v->good}};
}

}  // namespace

Instance instance_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("valuations")) throw ValidationError("instance JSON needs a valuations array");
  const Json& vals = j.at("valuations");
  if (!vals.is_array()) throw ValidationError("valuations must be an array of rows");
  std::vector<std::vector<Value>> rows;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const Json& row = vals[i];
    if (!row.is_array()) throw ValidationError("valuation row " + std::to_string(i) + " is not an array");
    std::vector<Value> r;
    for (std::size_t g = 0; g < row.size(); ++g) {
      if (!row[g].is_number_integer()) {
        throw ValidationError("valuation at row " + std::to_string(i) + ", column " + std::to_string(g) +
                              " is not an integer");
      }
      r.push_back(row[g].get<Value>());
    }
    rows.push_back(std::move(r));
  }
  Instance inst = Instance::from_matrix(std::move(rows));
  if (j.contains("agents") && j.at("agents").get<int>() != inst.agents()) {
    throw ValidationError("'agents' does not match the number of valuation rows");
  }
  if (j.contains("goods") && j.at("goods").get<int>() != inst.goods()) {
    throw ValidationError("'goods' does not match the row length");
  }
  return inst;
}

Json instance_to_json(const Instance& inst) {
  Json j;
  j["agents"] = inst.agents();
  j["goods"] = inst.goods();
  j["valuations"] = inst.matrix();
  return j;
}

PartialAllocation allocation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("bundles")) throw ValidationError("allocation JSON needs a bundles array");
  PartialAllocation x;
  for (const auto& b : j.at("bundles")) x.bundles.push_back(bundle_from(b, "bundle"));
  if (j.contains("pool")) x.pool = bundle_from(j.at("pool"), "pool");
  return x;
}

Json allocation_to_json(const PartialAllocation& x) {
  Json bundles = Json::array();
  for (const Bundle& b : x.bundles) bundles.push_back(bundle_json(b));
  return Json{{"bundles", bundles}, {"pool", bundle_json(x.pool)}};
}

Json record_to_json(const MmsRecord& r) {
  Json witness = Json::array();
  for (const Bundle& b : r.witness) witness.push_back(bundle_json(b));
  return Json{{"agent", r.agent}, {"parts", r.parts},        {"value", r.value},
              {"quality", r.quality.str()}, {"witness", witness}};
}

Json trace_to_json(const Trace& trace) {
  Json out = Json::array();
  for (const TraceEvent& ev : trace) {
    Json e;
    e["iteration"] = ev.iteration;
    e["kind"] = std::string(to_string(ev.kind));
    e["allocated_set"] = ev.allocated_set;
    e["potential"] = Json{{"value_sum", wide_json(ev.potential.value_sum)}, {"allocated", ev.potential.allocated}};
    if (ev.agent >= 0) e["agent"] = ev.agent;
    if (!ev.bundles.empty()) {
      Json bs = Json::array();
      for (const Bundle& b : ev.bundles) bs.push_back(bundle_json(b));
      e["bundles"] = bs;
    }
    if (!ev.before.empty()) {
      Json bs = Json::array();
      for (const Bundle& b : ev.before) bs.push_back(bundle_json(b));
      e["before"] = bs;
    }
    if (!ev.pairs.empty()) {
      Json ps = Json::array();
      for (auto [a, b] : ev.pairs) ps.push_back(Json::array({a, b}));
      e["pairs"] = ps;
    }
    out.push_back(std::move(e));
  }
  return out;
}

Json report_to_json(const SolveReport& rep) {
  Json j;
  j["allocation"] = allocation_to_json(rep.allocation);
  j["mms"] = rep.mms;
  j["mms_factor"] = rep.mms_factor.str();
  j["min_mms_ratio"] = rep.min_mms_ratio.str();
  j["efx_holds"] = rep.efx_holds();
  j["efx_violation"] = violation_json(rep.efx_violation);
  j["ef1_holds"] = rep.ef1_holds();
  j["ef1_violation"] = violation_json(rep.ef1_violation);
  j["pool_size"] = rep.allocation.pool.size();
  j["pool_envied"] = rep.pool_envied;
  j["iterations"] = rep.iterations;
  j["reallocations"] = rep.reallocations;
  if (!rep.efx_stage_values.empty()) j["efx_stage_values"] = rep.efx_stage_values;
  return j;
}

Json fairness_to_json(const FairnessReport& rep) {
  auto list = [](const std::vector<Violation>& vs) {
    Json out = Json::array();
    for (const Violation& v : vs) out.push_back(Json::array({v.envier, v.owner, v.good}));
    return out;
  };
  Json j;
  j["alpha"] = rep.alpha.str();
  j["efx_factor"] = rep.efx_factor.str();
  j["ef1_factor"] = rep.ef1_factor.str();
  j["efx_pass"] = rep.efx_violations.empty();
  j["ef1_pass"] = rep.ef1_violations.empty();
  if (rep.mms_ratio) {
    j["mms_ratio"] = rep.mms_ratio->str();
    j["mms_pass"] = rep.mms_ratio->at_least(rep.alpha);
  }
  j["efx_witnesses"] = list(rep.efx_violations);
  j["ef1_witnesses"] = list(rep.ef1_violations);
  return j;
}

std::string format_instance(const Json& j) {
  std::string out = "{\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += "  " + Json(it.key()).dump() + ": ";
    if (it.key() == "valuations" && it->is_array()) {
      out += "[";
      for (std::size_t r = 0; r < it->size(); ++r) out += (r ? ",\n    " : "\n    ") + (*it)[r].dump();
      out += it->empty() ? "]" : "\n  ]";
    } else {
      out += it->dump();
    }
  }
  return out + "\n}\n";
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

}  // namespace fairdiv::io
