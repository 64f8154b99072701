#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using tagtrace::cli::run;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Result r;
  r.code = run(args, {in, out, err});
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / ("tagtrace_cli_" + std::string(info->name()) + "_" +
                                        std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path synth_file(const std::string& seed = "7") {
    const auto path = dir_ / "trace.tsv";
    const auto r = invoke({"synth", "--seed", seed, "--users", "40", "--days", "6", "--events-per-day", "200",
                           "--communities", "2", "--trace-out", path.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    return path;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, VersionAndHelp) {
  auto r = invoke({"--version"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tagtrace "), std::string::npos);
  r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("similarity"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsExitTwoWithJson) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"frobnicate"},
           {"reuse", "--dimension", "colour"},
           {"similarity", "--mode", "cosine"},
           {"graph", "--threshold", "0"},
           {"recommend", "--cutoff", "5", "--train-fraction", "0.5"},
           {"validate", "--columns", "user,item"},
       }) {
    const auto r = invoke(args, "u\ti\tt\t1\n");
    EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args[0]);
    const auto j = json::parse(r.err);
    EXPECT_TRUE(j.contains("error"));
    EXPECT_TRUE(j.contains("message"));
  }
}

TEST_F(CliTest, DataErrorsExitOne) {
  auto r = invoke({"validate", "--input", (dir_ / "missing.tsv").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.err)["error"], "io");
  r = invoke({"validate"}, "# only a comment\n");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(json::parse(r.err)["error"], "empty_input");
}

TEST_F(CliTest, ValidateFromStdin) {
  const auto r = invoke({"validate"}, "u1\ti1\tml\t100\nu2\ti1\tml\t200\nu1\ti1\tml\t100\nbad line\n");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["total_lines"], 4);
  EXPECT_EQ(j["parsed"], 2);
  EXPECT_EQ(j["rejected_by_reason"]["duplicate"], 1);
  EXPECT_EQ(j["rejected_by_reason"]["malformed"], 1);
}

TEST_F(CliTest, CustomColumns) {
  const auto r = invoke({"validate", "--delimiter", ",", "--columns", "timestamp,-,user,item,tag"},
                        "100,x,u1,i1,ml\n200,x,u2,i1,db\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["users"], 2);
}

TEST_F(CliTest, SynthPipeMatchesFileRun) {
  const auto synth = invoke({"synth", "--seed", "7", "--users", "40", "--days", "6", "--events-per-day", "200",
                                    "--communities", "2"});
  ASSERT_EQ(synth.code, 0);
  const auto file = synth_file("7");
  EXPECT_EQ(slurp(file), synth.out);

  const auto piped = dir_ / "piped";
  const auto filed = dir_ / "filed";
  ASSERT_EQ(invoke({"reuse", "--out", piped.string()}, synth.out).code, 0);
  ASSERT_EQ(invoke({"reuse", "--input", file.string(), "--out", filed.string()}).code, 0);
  for (const auto* name : {"reuse_item.csv", "reuse_tag.csv", "reuse_user.csv", "reuse_summary.json"}) {
    EXPECT_EQ(slurp(piped / name), slurp(filed / name)) << name;
    EXPECT_FALSE(slurp(piped / name).empty());
  }
}

TEST_F(CliTest, ReusePrintsTableLayout) {
  const auto file = synth_file();
  const auto r = invoke({"reuse", "-i", file.string(), "-o", (dir_ / "o").string(), "--dimension", "item"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("items"), std::string::npos);
  EXPECT_NE(r.out.find("average"), std::string::npos);
  EXPECT_NE(r.out.find("median"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir_ / "o" / "reuse_item.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "o" / "reuse_tag.csv"));
}

TEST_F(CliTest, EverySubcommandIsIdempotentAndLeavesInputAlone) {
  const auto file = synth_file();
  const auto before = slurp(file);
  const auto out = dir_ / "out";
  const std::vector<std::vector<std::string>> commands{
      {"validate"},
      {"reuse"},
      {"similarity", "--mode", "user-item"},
      {"similarity", "--mode", "user-tag", "--population", "all"},
      {"windows", "--window-days", "2"},
      {"graph", "--mode", "user-tag"},
      {"graph", "--knee"},
      {"recommend", "--per-user"},
      {"report"},
  };
  auto run_all = [&] {
    for (auto args : commands) {
      args.insert(args.end(), {"--input", file.string(), "--out", out.string()});
      const auto r = invoke(args);
      EXPECT_EQ(r.code, 0) << args[0] << ": " << r.err;
    }
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(out)) {
      files[entry.path().filename().string()] = slurp(entry.path());
    }
    return files;
  };
  const auto first = run_all();
  const auto second = run_all();
  EXPECT_EQ(first, second);
  EXPECT_EQ(slurp(file), before);
  for (const auto* name : {"validation.json", "pairs_user-item.csv", "cdf_user-tag.csv", "windows_user-item.csv",
                           "edges_user-tag.csv", "nodes_user-item.csv", "topology_user-item.json", "eval.json",
                           "outcomes.csv", "report.json"}) {
    EXPECT_EQ(first.count(name), 1u) << name;
  }
  for (const auto& [name, body] : first) EXPECT_EQ(name.find(".tmp"), std::string::npos) << name;
  const auto report = json::parse(first.at("report.json"));
  for (const auto* key : {"validation", "reuse", "similarity", "graph", "recommendation"}) {
    EXPECT_TRUE(report.contains(key)) << key;
  }
}

TEST_F(CliTest, GraphOnToyTraceMatchesHandFiltering) {
  // ann/bob: 1 shared of 2 items (0.5); bob/cat: 1 shared of 22 items (below 0.05).
  std::string input = "ann\ta\tt\t1\nbob\ta\tt\t2\nbob\tb\tt\t3\n";
  for (int i = 0; i < 20; ++i) input += "cat\tc" + std::to_string(i) + "\tt\t" + std::to_string(10 + i) + "\n";
  input += "cat\tb\tt\t100\n";
  const auto r = invoke({"graph", "--threshold", "0.05", "--mode", "user-item", "--out", dir_.string()}, input);
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(dir_ / "edges_user-item.csv"), "user_a,user_b,weight\nann,bob,0.5\n");
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["nodes"], 3);
  EXPECT_EQ(j["isolated"], 1);
  EXPECT_EQ(j["threshold"], 0.05);
}

TEST_F(CliTest, OutputDirectoryFromEnvironment) {
  const auto file = synth_file();
  const auto target = dir_ / "from_env";
  ::setenv("TAGTRACE_OUTPUT_DIR", target.c_str(), 1);
  const auto r = invoke({"similarity", "--input", file.string(), "--no-pairs"});
  ::unsetenv("TAGTRACE_OUTPUT_DIR");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(target / "cdf_user-item.csv"));
  EXPECT_FALSE(fs::exists(target / "pairs_user-item.csv"));
}

TEST_F(CliTest, SynthTruthSidecar) {
  const auto truth = dir_ / "truth.json";
  const auto r = invoke({"synth", "--users", "12", "--communities", "3", "--days", "1", "--events-per-day", "50",
                         "--truth-out", truth.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json::parse(slurp(truth));
  EXPECT_EQ(j["community_of"].size(), 12u);
  EXPECT_EQ(j["config"]["communities"], 3);
}

TEST_F(CliTest, RecommendRejectsBadCutoff) {
  const auto file = synth_file();
  const auto r = invoke({"recommend", "--input", file.string(), "--out", dir_.string(), "--cutoff", "5"});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(json::parse(r.err)["error"], "configuration");
}
