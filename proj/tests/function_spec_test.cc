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

#include "faassim/function_spec.h"

#include <nlohmann/json.hpp>

#include <gtest/gtest.h>

namespace faassim {
namespace {

using nlohmann::json;

TEST(FunctionSpecTest, DefaultTableHasTenBenchmarks) {
  const FunctionTable& t = DefaultFunctionTable();
  EXPECT_EQ(t.size(), 10u);
  for (const char* name :
       {"bert", "deepspeech", "inception3", "nasnet", "resnet50", "seq2seq", "vgg11", "lbm", "mrif", "tpacf"}) {
    EXPECT_TRUE(t.contains(name)) << name;
  }
}

TEST(FunctionSpecTest, MemoryColumns) {
  const FunctionTable& t = DefaultFunctionTable();
  EXPECT_EQ(t.at("bert").context_mem, Megabytes::FromMb(414));
  EXPECT_EQ(t.at("bert").ro_mem, Megabytes::FromMb(1282.5));
  EXPECT_EQ(t.at("bert").writable_mem, Megabytes::FromMb(60.1));
  EXPECT_EQ(t.at("lbm").ro_mem, Megabytes());
  EXPECT_EQ(t.at("lbm").writable_mem, Megabytes::FromMb(330));
}

TEST(FunctionSpecTest, ResnetStageTimes) {
  const FunctionSpec& r = DefaultFunctionTable().at("resnet50");
  EXPECT_EQ(r.gpu_ctx_time, Millis(285.1));
  EXPECT_EQ(r.compute_time, Millis(24.3));
  EXPECT_EQ(r.return_time, Millis(0.1));
  EXPECT_EQ(r.cpu_ctx_time, Millis(1.0));
  EXPECT_EQ(r.container_time, Duration::zero());
  EXPECT_EQ(r.input_bytes_host, Megabytes::FromMb(5.9));
  EXPECT_EQ(r.input_bytes_pcie, Megabytes::FromMb(4.5));
  EXPECT_EQ(r.ro_bytes_host + r.input_bytes_host, Megabytes::FromMb(109.6));
  EXPECT_EQ(r.ro_bytes_pcie + r.input_bytes_pcie, Megabytes::FromMb(109.6));
}

TEST(FunctionSpecTest, ParseAppliesDefaults) {
  const FunctionSpec s = ParseFunctionSpec(json{{"name", "f"}, {"ro_mem", 100}, {"writable_mem", 20}, {"compute_time", 5}});
  EXPECT_EQ(s.context_mem, Megabytes::FromMb(414));
  EXPECT_EQ(s.ro_bytes_host, Megabytes::FromMb(100));
  EXPECT_EQ(s.input_bytes_pcie, Megabytes::FromMb(6));
  EXPECT_EQ(s.gpu_ctx_time, Millis(285.1));
  EXPECT_EQ(s.compute_time, Millis(5));
}

TEST(FunctionSpecTest, ParseErrorsNameTheField) {
  auto message = [](const json& j) -> std::string {
    try {
      ParseFunctionSpec(j);
    } catch (const SpecParseError& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(message(json{{"name", "f"}, {"writable_mem", 1}, {"compute_time", 1}}).find("ro_mem"), std::string::npos);
  EXPECT_NE(message(json{{"name", "f"}, {"ro_mem", -1}, {"writable_mem", 1}, {"compute_time", 1}}).find("ro_mem"),
            std::string::npos);
  EXPECT_NE(message(json{{"name", "f"}, {"ro_mem", 1}, {"writable_mem", 1}, {"compute_time", 1}, {"colour", 1}})
                .find("colour"),
            std::string::npos);
}

TEST(FunctionSpecTest, TableRoundTripsThroughJson) {
  const FunctionTable& t = DefaultFunctionTable();
  const FunctionTable back = ParseFunctionTable(ToJson(t));
  ASSERT_EQ(back.size(), t.size());
  for (const auto& [name, spec] : t) {
    const FunctionSpec& b = back.at(name);
    EXPECT_EQ(b.total_mem(), spec.total_mem()) << name;
    EXPECT_EQ(b.ro_bytes_pcie, spec.ro_bytes_pcie) << name;
    EXPECT_EQ(b.input_bytes_host, spec.input_bytes_host) << name;
    EXPECT_EQ(b.compute_time, spec.compute_time) << name;
  }
}

TEST(FunctionSpecTest, DuplicateNamesRejected) {
  const json rec = {{"name", "f"}, {"ro_mem", 1}, {"writable_mem", 1}, {"compute_time", 1}};
  EXPECT_THROW(ParseFunctionTable(json::array({rec, rec})), SpecParseError);
}

}  // namespace
}  // namespace faassim
