#include "fairdiv/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "fairdiv/verify.hpp"

namespace fairdiv::workbench {

namespace fs = std::filesystem;

void GenSpec::validate() const {
  if (n < 1) throw ValidationError("n must be at least 1");
  if (m < 0) throw ValidationError("m must be non-negative");
  switch (distribution) {
    case Distribution::Uniform:
    case Distribution::Identical:
      if (lo < 0 || lo > hi) throw ValidationError("need 0 <= lo <= hi");
      break;
    case Distribution::Bivalued:
      if (a < 0 || b < 0) throw ValidationError("bivalued values must be non-negative");
      if (a == b) throw ValidationError("bivalued needs a != b");
      if (p > Ratio(1)) throw ValidationError("probability must lie in [0, 1]");
      break;
  }
}

Distribution parse_distribution(const std::string& name) {
  if (name == "uniform") return Distribution::Uniform;
  if (name == "bivalued") return Distribution::Bivalued;
  if (name == "identical") return Distribution::Identical;
  throw ValidationError("unknown distribution '" + name + "'");
}

std::string to_string(Distribution d) {
  switch (d) {
    case Distribution::Uniform: return "uniform";
    case Distribution::Bivalued: return "bivalued";
    case Distribution::Identical: return "identical";
  }
  return "?";
}

Instance generate(const GenSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  auto uniform = [&] { return std::uniform_int_distribution<Value>(spec.lo, spec.hi)(rng); };
  auto bivalued = [&] {
    std::uniform_int_distribution<std::int64_t> coin(0, spec.p.den() - 1);
    return coin(rng) < spec.p.num() ? spec.a : spec.b;
  };
  std::vector<std::vector<Value>> rows(spec.n, std::vector<Value>(spec.m));
  for (int i = 0; i < spec.n; ++i) {
    if (spec.distribution == Distribution::Identical && i > 0) {
      rows[i] = rows[0];
      continue;
    }
    for (int g = 0; g < spec.m; ++g) {
      rows[i][g] = spec.distribution == Distribution::Bivalued ? bivalued() : uniform();
    }
  }
  return Instance::from_matrix(std::move(rows));
}

std::string cmd_gen(const GenSpec& spec) {
  io::Json j = io::instance_to_json(generate(spec));
  io::Json meta;
  meta["generator"] = to_string(spec.distribution);
  meta["seed"] = spec.seed;
  if (spec.distribution == Distribution::Bivalued) {
    meta["a"] = spec.a;
    meta["b"] = spec.b;
    meta["p"] = spec.p.str();
  } else {
    meta["lo"] = spec.lo;
    meta["hi"] = spec.hi;
  }
  j["metadata"] = meta;
  return io::format_instance(j);
}

Goal parse_goal(const std::string& name) {
  if (name == "mms") return Goal::Mms;
  if (name == "efx-mms") return Goal::EfxMms;
  if (name == "ef1-mms") return Goal::Ef1Mms;
  throw ValidationError("unknown goal '" + name + "'");
}

std::string to_string(Goal g) {
  switch (g) {
    case Goal::Mms: return "mms";
    case Goal::EfxMms: return "efx-mms";
    case Goal::Ef1Mms: return "ef1-mms";
  }
  return "?";
}

SolveReport run_goal(Goal goal, const Instance& inst, const SolverConfig& cfg) {
  switch (goal) {
    case Goal::Mms: return approx_mms(inst, cfg);
    case Goal::EfxMms: return approx_mms_efx(inst, cfg);
    case Goal::Ef1Mms: return approx_mms_ef1(inst, cfg);
  }
  throw ValidationError("unknown goal");
}

std::vector<std::string> corpus_files(const std::string& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw ValidationError("corpus directory not found: " + dir);
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<BenchRow> bench_one(const std::string& file, const BenchOptions& opts) {
  std::vector<BenchRow> rows;
  std::string id = fs::path(file).stem().string();
  auto blank = [&](Goal g) {
    BenchRow r;
    r.instance_id = id;
    r.goal = g;
    r.epsilon = opts.epsilon;
    r.delta = opts.delta;
    r.mms_ratio = "n/a";
    return r;
  };

  std::optional<Instance> inst;
  try {
    inst = io::instance_from_json(io::read_json_file(file));
  } catch (const std::exception& e) {
    for (Goal g : opts.goals) {
      BenchRow r = blank(g);
      r.status = std::string("failed: ") + e.what();
      rows.push_back(r);
    }
    return rows;
  }

  // Reference shares for verification, independent of the solver's records.
  std::optional<std::vector<Value>> shares;
  try {
    std::vector<Value> v;
    for (AgentId i = 0; i < inst->agents(); ++i) {
      v.push_back(mms_exact(*inst, i, inst->agents(), opts.exact_cap).value);
    }
    shares = std::move(v);
  } catch (const ValidationError&) {
  }

  SolverConfig cfg;
  cfg.epsilon = opts.epsilon;
  cfg.delta = opts.delta;
  cfg.exact_cap = opts.exact_cap;
  Ratio alpha = opts.delta.complement();

  for (Goal g : opts.goals) {
    BenchRow r = blank(g);
    try {
      auto t0 = std::chrono::steady_clock::now();
      SolveReport rep = run_goal(g, *inst, cfg);
      auto t1 = std::chrono::steady_clock::now();
      r.wall_millis = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
      if (auto bad = validate_allocation(*inst, rep.allocation)) throw InvariantError(*bad);
      r.efx_pass = !check_efx(*inst, rep.allocation, alpha).has_value();
      r.ef1_pass = !check_ef1(*inst, rep.allocation, alpha).has_value();
      if (shares) r.mms_ratio = check_mms_ratio(*inst, rep.allocation, std::span<const Value>(*shares)).str();
      r.pool_size = rep.allocation.pool.size();
      r.iterations = rep.iterations;
      r.status = "ok";
    } catch (const std::exception& e) {
      r.status = std::string("failed: ") + e.what();
    }
    rows.push_back(r);
  }
  return rows;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<BenchRow> bench(const std::vector<std::string>& files, const BenchOptions& opts) {
  std::vector<std::vector<BenchRow>> results(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < files.size();) results[k] = bench_one(files[k], opts);
  };
  int jobs = std::max(1, std::min<int>(opts.jobs, static_cast<int>(files.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<BenchRow> rows;
  for (auto& rs : results) rows.insert(rows.end(), rs.begin(), rs.end());
  return rows;
}

std::string bench_csv(const std::vector<BenchRow>& rows, bool zero_wall) {
  std::ostringstream os;
  os << kBenchHeader << "\n";
  for (const BenchRow& r : rows) {
    os << csv_field(r.instance_id) << ',' << to_string(r.goal) << ',' << r.epsilon.str() << ','
       << r.delta.str() << ',' << r.mms_ratio << ',' << (r.efx_pass ? "true" : "false") << ','
       << (r.ef1_pass ? "true" : "false") << ',' << r.pool_size << ',' << r.iterations << ','
       << (zero_wall ? 0 : r.wall_millis) << ',' << csv_field(r.status) << "\n";
  }
  return os.str();
}

std::string cmd_bench(const std::string& corpus_dir, const BenchOptions& opts, bool zero_wall) {
  return bench_csv(bench(corpus_files(corpus_dir), opts), zero_wall);
}

namespace {

std::int64_t parse_int(std::string_view s, const std::string& whole) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw ValidationError("cannot parse value '" + whole + "'");
  }
  return v;
}

Ratio parse_value(const io::Json& cell) {
  if (cell.is_number_integer()) {
    if (cell.get<std::int64_t>() < 0) throw ValidationError("valuations must be non-negative");
    return Ratio(cell.get<std::int64_t>());
  }
  if (!cell.is_string()) throw ValidationError("valuations must be integers or strings");
  std::string s = cell.get<std::string>();
  if (s.find('/') != std::string::npos) {
    try {
      return Ratio::parse(s);
    } catch (const ValidationError&) {
      throw ValidationError("cannot parse value '" + s + "'");
    }
  }
  auto dot = s.find('.');
  if (dot == std::string::npos) return Ratio(parse_int(s, s));
  std::string_view whole(s.data(), dot);
  std::string_view frac(s.data() + dot + 1, s.size() - dot - 1);
  if (frac.size() > 17) throw ValidationError("too many decimal places in '" + s + "'");
  std::int64_t den = 1;
  for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
  std::int64_t ip = whole.empty() ? 0 : parse_int(whole, s);
  std::int64_t fp = frac.empty() ? 0 : parse_int(frac, s);
  if (ip > (kMaxAgentTotal / den)) throw ValidationError("value too large: '" + s + "'");
  return Ratio(ip * den + fp, den);
}

}  // namespace

Scaled scale_valuations(const io::Json& input, std::int64_t denominator_bound) {
  if (denominator_bound < 1) throw ValidationError("denominator bound must be positive");
  if (!input.is_object() || !input.contains("valuations") || !input.at("valuations").is_array()) {
    throw ValidationError("instance JSON needs a valuations array");
  }
  std::vector<std::vector<Ratio>> vals;
  std::int64_t lcm = 1;
  for (const auto& row : input.at("valuations")) {
    if (!row.is_array()) throw ValidationError("valuation rows must be arrays");
    std::vector<Ratio> r;
    for (const auto& cell : row) {
      Ratio v = parse_value(cell);
      if (v.den() > denominator_bound) {
        throw ValidationError("value " + v.str() + " needs denominator " + std::to_string(v.den()) +
                              " above bound " + std::to_string(denominator_bound));
      }
      Wide next = Wide{lcm} / std::gcd(lcm, v.den()) * v.den();
      if (next > kMaxAgentTotal) throw ValidationError("common denominator too large");
      lcm = static_cast<std::int64_t>(next);
      r.push_back(v);
    }
    vals.push_back(std::move(r));
  }
  std::vector<std::vector<Value>> rows;
  for (const auto& r : vals) {
    std::vector<Value> out;
    for (const Ratio& v : r) {
      Wide x = Wide{v.num()} * (lcm / v.den());
      if (x > kMaxAgentTotal) throw ValidationError("scaled value too large");
      out.push_back(static_cast<Value>(x));
    }
    rows.push_back(std::move(out));
  }
  return Scaled{Instance::from_matrix(std::move(rows)), lcm};
}

std::string cmd_scale(const io::Json& input, std::int64_t denominator_bound) {
  Scaled s = scale_valuations(input, denominator_bound);
  io::Json j = io::instance_to_json(s.instance);
  io::Json meta = input.contains("metadata") && input.at("metadata").is_object() ? input.at("metadata")
                                                                                 : io::Json::object();
  meta["scale_factor"] = s.factor;
  j["metadata"] = meta;
  return io::format_instance(j);
}

}  // namespace fairdiv::workbench
