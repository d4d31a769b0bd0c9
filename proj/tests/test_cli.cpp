#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "helpers.hpp"
#include "json.hpp"

using testutil::kFixtures;
using tgfd::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "tgfd");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string dosage(const std::string& f) { return kFixtures + "/dosage/" + f; }

std::filesystem::path temp_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto d = std::filesystem::temp_directory_path() / "tgfd_cli" / info->name();
  std::filesystem::create_directories(d);
  return d;
}

}  // namespace

TEST(Cli, DetectText) {
  auto r = cli({"detect", "--graph", dosage("graph.txt"), "--changes", dosage("changes.txt"), "--tgfds",
                dosage("rules.tgfd")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("dosage CONST t=6"), std::string::npos);
}

TEST(Cli, DetectJson) {
  auto r = cli({"detect", "--graph", dosage("graph.txt"), "--changes", dosage("changes.txt"), "--tgfds",
                dosage("rules.tgfd"), "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto doc = nlohmann::json::parse(r.out);
  ASSERT_EQ(doc["violations"].size(), 1u);
  EXPECT_EQ(doc["violations"][0]["kind"], "constant");
  EXPECT_EQ(doc["violations"][0]["t"], 6);
}

TEST(Cli, DetectGfdModeKeepsSameSnapshotFailure) {
  auto r = cli({"detect", "--graph", dosage("graph.txt"), "--changes", dosage("changes.txt"), "--tgfds",
                dosage("rules.tgfd"), "--mode", "gfd"});
  ASSERT_EQ(r.code, 0);
  // In a single snapshot the failing match is its own only partner.
  EXPECT_NE(r.out.find("CONST t=6"), std::string::npos);
}

TEST(Cli, DetectParallelMatchesSequential) {
  auto d = temp_dir();
  auto report = (d / "run.txt").string();
  auto seq = cli({"detect", "--graph", dosage("graph.txt"), "--changes", dosage("changes.txt"), "--tgfds",
                  dosage("rules.tgfd")});
  auto par = cli({"detect-parallel", "--graph", dosage("graph.txt"), "--changes", dosage("changes.txt"), "--tgfds",
                  dosage("rules.tgfd"), "--workers", "2", "--force-rebalance", "3", "--report", report});
  ASSERT_EQ(par.code, 0) << par.err;
  EXPECT_EQ(par.out, seq.out);
  std::ifstream in(report);
  std::string line;
  int supersteps = 0, rebalances = 0;
  while (std::getline(in, line)) {
    supersteps += line.rfind("superstep t=", 0) == 0;
    rebalances += line.rfind("rebalance after t=3 trigger=\"forced\"", 0) == 0;
  }
  EXPECT_EQ(supersteps, 6);
  EXPECT_EQ(rebalances, 1);
}

TEST(Cli, SatExitCodes) {
  auto bad = cli({"sat", "--tgfds", kFixtures + "/conflict/rules.tgfd"});
  EXPECT_EQ(bad.code, 3);
  EXPECT_NE(bad.out.find("unsatisfiable"), std::string::npos);
  EXPECT_NE(bad.out.find("conflict anchor=sigma_prime"), std::string::npos);
  auto ok = cli({"sat", "--tgfds", kFixtures + "/conflict/disjoint.tgfd"});
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(ok.out, "satisfiable\n");
}

TEST(Cli, Implies) {
  auto d = temp_dir();
  auto phi = (d / "phi.tgfd").string();
  std::ofstream(phi) << "tgfd phi\nvertex x patient\nvertex z disease\nvertex y medication\nvertex w dosage\n"
                        "edge x diagnosed_with z\nedge x treated_with y\nedge x received w\nedge w of y\n"
                        "delta (40, 100)\nx: x.name == x.name; z.name = \"Covid19\"; y.name = \"Veklury\"\n"
                        "y: w.val = \"100mg\"\n";
  auto r = cli({"implies", "--tgfds", kFixtures + "/conflict/rules.tgfd", "--phi", phi});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("implied\n"), std::string::npos);
  EXPECT_EQ(r.out.find("not implied"), std::string::npos);
  EXPECT_NE(r.out.find("derivable on (40,100)"), std::string::npos);
}

TEST(Cli, GenInjectEval) {
  auto d = temp_dir();
  auto g = (d / "g.txt").string(), c = (d / "c.txt").string();
  auto rules = (d / "r.tgfd").string();
  std::ofstream(rules) << "tgfd r\nvertex x T0\nvertex y T1\nedge x l0 y\ndelta (0, 2)\nx: x.a0 == x.a0\n"
                          "y: y.a1 == y.a1\n";
  auto gen = cli({"gen", "--vertices", "80", "--edges", "240", "--labels", "2", "--T", "4", "--seed", "3",
                  "--out-graph", g, "--out-changes", c});
  ASSERT_EQ(gen.code, 0) << gen.err;
  auto ev = cli({"eval", "--graph", g, "--changes", c, "--tgfds", rules, "--err", "0.05"});
  ASSERT_EQ(ev.code, 0) << ev.err;
  EXPECT_NE(ev.out.find("precision 1\nrecall 1\nf1 1\n"), std::string::npos) << ev.out;
  auto ledger = (d / "ledger.txt").string();
  auto inj = cli({"inject", "--graph", g, "--changes", c, "--tgfds", rules, "--out-graph", (d / "g2.txt").string(),
                  "--out-changes", (d / "c2.txt").string(), "--ledger", ledger});
  ASSERT_EQ(inj.code, 0) << inj.err;
  EXPECT_TRUE(std::filesystem::exists(d / "g2.txt"));
  EXPECT_GT(std::filesystem::file_size(ledger), 0u);
  auto plan = cli({"plan", "--graph", g, "--changes", c, "--tgfds", rules, "--workers", "2"});
  EXPECT_EQ(plan.code, 0) << plan.err;
  EXPECT_FALSE(plan.out.empty());
}

TEST(Cli, ErrorCodes) {
  EXPECT_EQ(cli({}).code, 1);
  EXPECT_EQ(cli({"detect", "--graph", dosage("graph.txt")}).code, 1);
  EXPECT_EQ(cli({"detect-parallel", "--graph", dosage("graph.txt"), "--tgfds", dosage("rules.tgfd"), "--workers",
                 "0"})
                .code,
            1);
  auto missing = cli({"detect", "--graph", "/nonexistent", "--tgfds", dosage("rules.tgfd")});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("cannot open"), std::string::npos);
  auto d = temp_dir();
  auto bad = (d / "bad.tgfd").string();
  std::ofstream(bad) << "tgfd r\nvertex x t\ndelta (4, 1)\ny: x.a == x.a\n";
  auto parse = cli({"sat", "--tgfds", bad});
  EXPECT_EQ(parse.code, 2);
  EXPECT_NE(parse.err.find("line 3"), std::string::npos);
}
