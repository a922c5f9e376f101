// Copyright 2026 The faassim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace {

namespace fs = std::filesystem;

const fs::path kScratch = fs::temp_directory_path() / "faassim_cli_test";

struct Result {
  int code = -1;
  std::string out;
  std::string err;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result Cli(const std::string& args) {
  fs::create_directories(kScratch);
  const fs::path out = kScratch / "stdout.txt", err = kScratch / "stderr.txt";
  const std::string cmd = std::string(FAASSIM_CLI) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = Slurp(out);
  r.err = Slurp(err);
  return r;
}

std::string Config(const std::string& name) {
  return (fs::path(FAASSIM_SOURCE_DIR) / "configs" / name).string();
}

fs::path WriteFile(const std::string& name, const std::string& body) {
  fs::create_directories(kScratch);
  const fs::path p = kScratch / name;
  std::ofstream(p) << body;
  return p;
}

TEST(CliTest, RunWritesArtifacts) {
  const fs::path out = kScratch / "run";
  const Result r = Cli("run --config " + Config("fig9_latency.json") +
                       " --policy FixedGSL --override workload.duration_s=5 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "invocations.csv"));
  EXPECT_TRUE(fs::exists(out / "memory.csv"));
}

TEST(CliTest, CompareWithPolicyList) {
  const fs::path out = kScratch / "cmp";
  const Result r = Cli("compare --config " + Config("fig9_latency.json") +
                       " --policies FixedGSL,SAGE --override workload.duration_s=5 --out " + out.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out / "compare.json"));
  EXPECT_TRUE(fs::exists(out / "FixedGSL" / "summary.json"));
  EXPECT_TRUE(fs::exists(out / "SAGE" / "summary.json"));
}

TEST(CliTest, UnknownFunctionIsConfigError) {
  const fs::path cfg =
      WriteFile("bad.json", R"({"workload": {"kind": "poisson", "mix": ["resnet50", "nosuchnet"]}})");
  const Result r = Cli("run --config " + cfg.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nosuchnet"), std::string::npos) << r.err;
}

TEST(CliTest, BadArgumentsAreConfigErrors) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("run").code, 2);
  EXPECT_EQ(Cli("run --config " + Config("fig9_latency.json") + " --policy NotAPolicy").code, 2);
  EXPECT_EQ(Cli("run --config /nonexistent.json").code, 2);
}

TEST(CliTest, SimulationFailureExitsOne) {
  const fs::path cfg = WriteFile("tiny_gpu.json",
                                 R"({"policy": "DGSF", "cluster": {"gpu_mem_mb": 500},
                                     "workload": {"kind": "poisson", "rate_per_s": 1, "duration_s": 5}})");
  const Result r = Cli("run --config " + cfg.string() + " --out " + (kScratch / "fail").string());
  EXPECT_EQ(r.code, 1) << r.out << r.err;
}

TEST(CliTest, ValidatePasses) {
  const Result r = Cli("validate");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
  EXPECT_EQ(Cli("validate --config " + Config("validate_table5.json")).code, 0);
}

TEST(CliTest, TraceFlatten) {
  std::string header = "function", row = "f";
  for (int m = 1; m <= 1440; ++m) {
    header += "," + std::to_string(m);
    row += m == 1 ? ",3" : ",0";
  }
  const fs::path in = WriteFile("counts.csv", header + "\n" + row + "\n");
  const fs::path out = kScratch / "flat.csv";
  const Result r = Cli("trace flatten " + in.string() + " " + out.string());
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Slurp(out), "timestamp_ms,function\n0,f\n20000,f\n40000,f\n");
}

}  // namespace
