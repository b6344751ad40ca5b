#include <gtest/gtest.h>

#include <sstream>

#include "mwc/report.hpp"

using namespace mwc;

namespace {

RunConfig exact_run() {
  RunConfig cfg;
  cfg.pipeline.utc = "exact";
  cfg.oracle = true;
  return cfg;
}

std::vector<Json> lines(const std::string& text) {
  std::vector<Json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(Json::parse(line));
  return out;
}

}  // namespace

TEST(Digest, KnownValues) {
  EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(RunInstance, RecordSchema) {
  const auto inst = parse_instance("p mwc 3 2 2\nt 1\nt 3\ne 1 2 1\ne 2 3 1\n");
  const auto r = run_instance("path", inst, exact_run());
  for (const char* key : {"type", "id", "digest", "n", "m", "k", "config", "oracle_objective", "status", "backend", "objective", "cuts",
                          "partition", "p_effective", "weight_scales", "cover", "trials", "checks", "ratio"})
    EXPECT_TRUE(r.contains(key)) << key;
  EXPECT_FALSE(r.contains("seconds"));
  EXPECT_EQ(r["status"], "ok");
  EXPECT_EQ(r["objective"].get<double>(), 2.0);
  EXPECT_EQ(r["ratio"].get<double>(), 1.0);
  for (const char* key : {"variant", "norm", "utc", "seed", "trials", "eps", "alpha_mult", "mode", "oracle"}) EXPECT_TRUE(r["config"].contains(key)) << key;
  EXPECT_EQ(r["trials"].size(), 7u);
}

TEST(RunInstance, ErrorsBecomeStatuses) {
  const auto inst = parse_instance("p mwc 3 2 2\nt 1\nt 3\ne 1 2 1\ne 2 3 1\n");
  auto cfg = exact_run();
  cfg.norm = "wlp:1:1,2";
  cfg.p.reset();
  EXPECT_EQ(run_instance("x", inst, cfg)["status"], "invalid");  // lp variant with a weighted norm
  cfg = exact_run();
  cfg.budget.max_assignments = 1;
  EXPECT_EQ(run_instance("x", inst, cfg)["status"], "budget");
}

TEST(Benchmark, OracleOnlyRatiosAreOne) {
  RunConfig cfg;
  cfg.mode = RunMode::oracle_only;
  GeneratorParams params;
  params.n = 10;
  params.k = 3;
  std::ostringstream out;
  const auto sum = run_benchmark(generated_items("gnp", params, 6, 11), cfg, out);
  EXPECT_EQ(sum.instances, 6);
  const auto recs = lines(out.str());
  ASSERT_EQ(recs.size(), 7u);
  for (std::size_t i = 0; i + 1 < recs.size(); ++i) {
    EXPECT_EQ(recs[i]["type"], "instance");
    EXPECT_EQ(recs[i]["ratio"].get<double>(), 1.0);
  }
  EXPECT_EQ(recs.back()["type"], "summary");
  EXPECT_EQ(recs.back()["max_ratio"].get<double>(), 1.0);
  EXPECT_EQ(recs.back()["rejection_rate"].get<double>(), 0.0);
}

TEST(Benchmark, ByteIdenticalReplay) {
  auto cfg = exact_run();
  cfg.pipeline.seed = 99;
  GeneratorParams params;
  params.n = 9;
  params.k = 3;
  const auto items = generated_items("planted-k-part", params, 4, 5);
  std::ostringstream a, b;
  run_benchmark(items, cfg, a);
  run_benchmark(generated_items("planted-k-part", params, 4, 5), cfg, b);
  EXPECT_EQ(a.str(), b.str());
  for (const auto& r : lines(a.str()))
    if (r["type"] == "instance") {
      EXPECT_EQ(r["status"], "ok");
      EXPECT_GE(r["ratio"].get<double>(), 1.0 - 1e-9);
    }
}

TEST(Checks, AllPassOnSmallInstance) {
  GeneratorParams params;
  params.n = 9;
  params.k = 3;
  params.weights = WeightMode::integer;
  const auto inst = generate_instance("gnp", params, 3);
  const auto r = run_instance_checks(inst, exact_run());
  EXPECT_TRUE(r["passed"].get<bool>()) << r.dump(2);
  EXPECT_EQ(r["checks"].size(), 6u);
}
