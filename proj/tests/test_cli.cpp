#include <gtest/gtest.h>

#include <json.hpp>

#include "process.hpp"
#include "support.hpp"

using namespace mdrpp;
using support::quote;
using support::run_cli;
using support::u;

namespace {

const char* kPath3 =
    "NAME path3\nNODES 3\nDEPOTS 1 3\nEDGES 2\n1 2 2\n2 3 2\nREQUIRED 2\n1 2\n2 3\nVEHICLES 3\n"
    "CAPACITY 10\nRECHARGE 1\n";

std::string fixture() { return quote(support::data_path("worked_example.txt")); }

}  // namespace

TEST(Cli, UsageErrorsExitTwo) {
  support::TempDir dir;
  EXPECT_EQ(run_cli(dir, "").status, 2);
  EXPECT_EQ(run_cli(dir, "plan").status, 2);
  EXPECT_EQ(run_cli(dir, "plan " + fixture() + " --seed 1 --bogus").status, 2);
  EXPECT_EQ(run_cli(dir, "--help").status, 0);
}

TEST(Cli, ModuleErrorsExitOne) {
  support::TempDir dir;
  auto r = run_cli(dir, "plan " + quote(dir.file("missing.txt")) + " --seed 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u) << r.err;
  const std::string bad = dir.write("bad.txt", "NODES 2\nDEPOTS 1\nEDGES 1\n1 2 x\n");
  r = run_cli(dir, "plan " + quote(bad) + " --seed 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("line 4"), std::string::npos) << r.err;
}

TEST(Cli, PlanAndOracleOnWorkedExample) {
  support::TempDir dir;
  auto r = run_cli(dir, "plan " + fixture() + " --seed 1");
  ASSERT_EQ(r.status, 0) << r.err;
  const Instance inst = support::worked_example();
  EXPECT_EQ(mission_time(parse_plan(r.out, inst)), u(11.8));
  EXPECT_NE(r.err.find("beta 11.8"), std::string::npos);
  r = run_cli(dir, "oracle " + fixture());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(r.out.rfind("no failures: beta 11.8\n", 0), 0u) << r.out;
  r = run_cli(dir, "gen-scenarios " + fixture() + " " + quote(dir.write("p.txt", "V1: (1 3 5)(5 7 8 5)\n")) +
                       " --seed 1");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("cannot create failure scenario"), std::string::npos);
}

TEST(Cli, SimulateWaitModes) {
  support::TempDir dir;
  const std::string inst = quote(dir.write("i.txt", kPath3));
  const std::string plan = quote(dir.write("p.txt", "V1: (1 2 1)\nV2: (3 2 3)\nV3: (1 2 3)\n"));
  const std::string scen = quote(dir.write("s.txt", "SCENARIO path3.f1\nFAILURES 2\n2 1\n3 2\n"));
  auto zero = run_cli(dir, "simulate " + inst + " " + plan + " " + scen + " --wait 0 --log " +
                               quote(dir.file("log.csv")));
  ASSERT_EQ(zero.status, 0) << zero.err;
  auto end = run_cli(dir, "simulate " + inst + " " + plan + " " + scen + " --wait end");
  ASSERT_EQ(end.status, 0) << end.err;
  const auto jz = nlohmann::json::parse(zero.out);
  const auto je = nlohmann::json::parse(end.out);
  ASSERT_EQ(jz.size(), 1u);
  EXPECT_EQ(jz[0]["auctions"], 2);
  EXPECT_EQ(je[0]["auctions"], 1);
  EXPECT_EQ(jz[0]["coverage_complete"], true);
  EXPECT_EQ(je[0]["coverage_complete"], true);
  EXPECT_EQ(jz[0]["beta_initial"], 4.0);
  const std::string log = support::read_file(dir.file("log.csv"));
  EXPECT_EQ(log.rfind("auction,time,iteration,trip,winner,anchor_depot,bid,radius\n", 0), 0u);
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 4);
  EXPECT_EQ(run_cli(dir, "simulate " + inst + " " + plan + " " + scen + " --wait -5").status, 1);
}

TEST(Cli, BenchIsReproducible) {
  support::TempDir dir;
  const auto a = run_cli(dir, "bench --instance " + fixture() + " --seed 1");
  ASSERT_EQ(a.status, 0) << a.err;
  const auto b = run_cli(dir, "bench --instance " + fixture() + " --seed 1");
  EXPECT_EQ(a.out, b.out);
  const auto rows = parse_report(a.out);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].beta_sa, u(11.8));
  EXPECT_EQ(rows[0].beta_opt, u(11.8));
  EXPECT_EQ(rows[0].failures, 0);
  const auto c = run_cli(dir, "bench --carp " + quote(support::data_path("gdb_sample.dat")) +
                                  " --seed 17 --iters 20 --restarts 1");
  ASSERT_EQ(c.status, 0) << c.err;
  const auto d = run_cli(dir, "bench --carp " + quote(support::data_path("gdb_sample.dat")) +
                                  " --seed 17 --iters 20 --restarts 1");
  EXPECT_EQ(c.out, d.out);
  EXPECT_GE(parse_report(c.out).size(), 1u);
}

TEST(Cli, ConvertEmitMilpAndMetrics) {
  support::TempDir dir;
  auto r = run_cli(dir, "convert " + quote(support::data_path("gdb_sample.dat")) + " " +
                            quote(dir.file("g.txt")) + " --seed 3");
  ASSERT_EQ(r.status, 0) << r.err;
  const Instance g = parse_instance(support::read_file(dir.file("g.txt")));
  EXPECT_EQ(g.vehicle_count, 3);
  EXPECT_EQ(g.capacity, u(40));

  const std::string inst = quote(dir.write("i.txt", kPath3));
  r = run_cli(dir, "emit-milp " + inst);
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("\nMinimize\n"), std::string::npos);
  EXPECT_NE(r.out.find("Binaries"), std::string::npos);
  const std::string scen = quote(dir.write("s.txt", "SCENARIO a\nFAILURES 1\n2 1\n"));
  r = run_cli(dir, "emit-milp " + inst + " --scenarios " + scen + " --scenario nope");
  EXPECT_EQ(r.status, 1);

  const std::string report = dir.write(
      "r.csv", std::string(kReportHeader) + "\ngdb.1,11,19,5,40,80,2,3,1,148,-,251,0,-,148,-,364,0,0,2.43,-\n");
  r = run_cli(dir, "metrics " + quote(report));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("gdb.1,11,19,5,40,80,2,3,1,148,-,251,69.59,-,148,-,364,145.95,1.45,2.43,-"),
            std::string::npos)
      << r.out;
}
