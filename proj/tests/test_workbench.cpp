#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fairdiv/io.hpp"
#include "fairdiv/verify.hpp"
#include "fairdiv/workbench.hpp"

using namespace fairdiv;
using namespace fairdiv::workbench;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("fairdiv_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST(Gen, SameSeedSameBytes) {
  GenSpec spec;
  spec.n = 4;
  spec.m = 9;
  spec.seed = 42;
  EXPECT_EQ(cmd_gen(spec), cmd_gen(spec));
  spec.seed = 43;
  GenSpec other = spec;
  other.seed = 42;
  EXPECT_NE(cmd_gen(spec), cmd_gen(other));
}

TEST(Gen, IdenticalRowsEqual) {
  GenSpec spec;
  spec.n = 5;
  spec.m = 7;
  spec.distribution = Distribution::Identical;
  spec.seed = 3;
  Instance inst = generate(spec);
  for (AgentId i = 1; i < 5; ++i) EXPECT_EQ(inst.matrix()[i], inst.matrix()[0]);
}

TEST(Gen, UniformOneOne) {
  GenSpec spec;
  spec.lo = spec.hi = 1;
  spec.seed = 9;
  Instance inst = generate(spec);
  for (const auto& row : inst.matrix())
    for (Value v : row) EXPECT_EQ(v, 1);
}

TEST(Gen, BivaluedUsesTwoValues) {
  GenSpec spec;
  spec.n = 4;
  spec.m = 40;
  spec.distribution = Distribution::Bivalued;
  spec.a = 1;
  spec.b = 5;
  spec.p = Ratio(1, 3);
  spec.seed = 17;
  Instance inst = generate(spec);
  int ones = 0;
  for (const auto& row : inst.matrix())
    for (Value v : row) {
      EXPECT_TRUE(v == 1 || v == 5);
      ones += v == 1;
    }
  EXPECT_GT(ones, 0);
  EXPECT_LT(ones, 160);
}

TEST(Gen, InvalidSpecs) {
  GenSpec spec;
  spec.lo = 5;
  spec.hi = 4;
  EXPECT_THROW(generate(spec), ValidationError);
  spec = GenSpec{};
  spec.distribution = Distribution::Bivalued;
  spec.a = spec.b = 2;
  EXPECT_THROW(generate(spec), ValidationError);
  spec.b = 3;
  spec.p = Ratio(3, 2);
  EXPECT_THROW(generate(spec), ValidationError);
  EXPECT_THROW(parse_distribution("gaussian"), ValidationError);
  EXPECT_THROW(parse_goal("envy-free"), ValidationError);
}

TEST(Io, InstanceRoundTrip) {
  Instance inst = Instance::from_matrix({{1, 2, 3}, {4, 5, 6}});
  Instance back = io::instance_from_json(io::instance_to_json(inst));
  EXPECT_EQ(back.matrix(), inst.matrix());
  io::Json bad = io::Json::parse(R"({"agents": 2, "goods": 2, "valuations": [[1,2],[3]]})");
  EXPECT_THROW(io::instance_from_json(bad), ValidationError);
  io::Json wrong = io::Json::parse(R"({"agents": 3, "goods": 2, "valuations": [[1,2],[3,4]]})");
  EXPECT_THROW(io::instance_from_json(wrong), ValidationError);
}

TEST(Io, AllocationRoundTrip) {
  PartialAllocation x{{Bundle{2, 0}, Bundle{}}, Bundle{1}};
  io::Json j = io::allocation_to_json(x);
  EXPECT_EQ(j.dump(), R"({"bundles":[[0,2],[]],"pool":[1]})");
  PartialAllocation back = io::allocation_from_json(j);
  EXPECT_EQ(back.bundles, x.bundles);
  EXPECT_EQ(back.pool, x.pool);
}

TEST(Bench, EmptyCorpusHeaderOnly) {
  fs::path dir = scratch("empty");
  EXPECT_EQ(cmd_bench(dir.string(), BenchOptions{}), std::string(kBenchHeader) + "\n");
}

TEST(Bench, FixtureCorpusRecomputedTrue) {
  fs::path dir = scratch("fixtures");
  io::write_text_file((dir / "prop1.json").string(), io::instance_to_json(fixture_prop1(3).first).dump());
  io::write_text_file((dir / "prop2.json").string(), io::instance_to_json(fixture_prop2(3).first).dump());
  BenchOptions opts;
  opts.goals = {Goal::Ef1Mms};
  auto rows = bench(corpus_files(dir.string()), opts);
  ASSERT_EQ(rows.size(), 2u);
  for (const BenchRow& r : rows) {
    EXPECT_EQ(r.status, "ok");
    EXPECT_TRUE(r.efx_pass) << r.instance_id;
    EXPECT_TRUE(r.ef1_pass) << r.instance_id;
    EXPECT_EQ(r.pool_size, 0u);
  }
  EXPECT_EQ(rows[1].mms_ratio, "inf");
}

TEST(Bench, UnreadableFileMarkedFailed) {
  fs::path dir = scratch("broken");
  io::write_text_file((dir / "a_bad.json").string(), "{not json");
  io::write_text_file((dir / "b_ok.json").string(), io::instance_to_json(fixture_prop1(2).first).dump());
  BenchOptions opts;
  opts.jobs = 2;
  auto rows = bench(corpus_files(dir.string()), opts);
  ASSERT_EQ(rows.size(), 6u);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(rows[k].status.rfind("failed", 0), 0u);
  for (int k = 3; k < 6; ++k) EXPECT_EQ(rows[k].status, "ok");
}

TEST(Bench, MissingDirectory) {
  EXPECT_THROW(corpus_files("/nonexistent/fairdiv/corpus"), ValidationError);
}

TEST(Bench, GoldenCsvAndParallelDeterminism) {
  std::string dir = std::string(FAIRDIV_TEST_DATA) + "/bench_corpus";
  BenchOptions opts;
  std::string serial = cmd_bench(dir, opts, true);
  opts.jobs = 3;
  std::string parallel = cmd_bench(dir, opts, true);
  EXPECT_EQ(serial, parallel);
  EXPECT_EQ(serial, slurp(std::string(FAIRDIV_TEST_DATA) + "/bench_golden.csv"));
}

TEST(Scale, OneOverN) {
  io::Json in = io::Json::parse(R"({"valuations": [["1","1","1/3","1/3","1/3"],["1","1","1/3","1/3","1/3"]]})");
  Scaled s = scale_valuations(in, 10);
  EXPECT_EQ(s.factor, 3);
  EXPECT_EQ(s.instance.matrix()[0], (std::vector<Value>{3, 3, 1, 1, 1}));
  io::Json out = io::Json::parse(cmd_scale(in, 10));
  EXPECT_EQ(out["metadata"]["scale_factor"], 3);
}

TEST(Scale, Decimals) {
  io::Json in = io::Json::parse(R"({"valuations": [["0.5","0.25", 2]]})");
  Scaled s = scale_valuations(in, 4);
  EXPECT_EQ(s.factor, 4);
  EXPECT_EQ(s.instance.matrix()[0], (std::vector<Value>{2, 1, 8}));
}

TEST(Scale, IntegersIdentity) {
  io::Json in = io::Json::parse(R"({"valuations": [[1, 2], ["3", 4]]})");
  Scaled s = scale_valuations(in, 1);
  EXPECT_EQ(s.factor, 1);
  EXPECT_EQ(s.instance.matrix(), (std::vector<std::vector<Value>>{{1, 2}, {3, 4}}));
}

TEST(Scale, DenominatorBoundExceeded) {
  io::Json in = io::Json::parse(R"({"valuations": [["1/7"]]})");
  EXPECT_THROW(scale_valuations(in, 5), ValidationError);
  io::Json neg = io::Json::parse(R"({"valuations": [["-1"]]})");
  EXPECT_THROW(scale_valuations(neg, 5), ValidationError);
}

TEST(RoundTrip, GenSolveVerifySeeds) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GenSpec spec;
    spec.n = 2 + static_cast<int>(seed % 4);
    spec.m = 4 + static_cast<int>(seed % 9);
    spec.distribution = static_cast<Distribution>(seed % 3);
    spec.a = 1;
    spec.b = 9;
    spec.seed = seed;
    Instance inst = io::instance_from_json(io::Json::parse(cmd_gen(spec)));
    for (Goal g : {Goal::Mms, Goal::EfxMms, Goal::Ef1Mms}) {
      SolveReport rep = run_goal(g, inst, SolverConfig{});
      PartialAllocation x = io::allocation_from_json(io::Json::parse(io::allocation_to_json(rep.allocation).dump()));
      std::vector<Value> mms;
      for (AgentId i = 0; i < inst.agents(); ++i) mms.push_back(mms_bruteforce(inst, i, inst.agents()).value);
      FairnessReport fr = fairness_report(inst, x, Ratio(1), std::span<const Value>(mms));
      EXPECT_TRUE(fr.mms_ratio->at_least(Ratio(2, 3))) << "seed " << seed;
      if (g == Goal::EfxMms) EXPECT_TRUE(fr.efx_violations.empty()) << "seed " << seed;
      if (g == Goal::Ef1Mms) EXPECT_TRUE(fr.ef1_violations.empty()) << "seed " << seed;
    }
  }
}
