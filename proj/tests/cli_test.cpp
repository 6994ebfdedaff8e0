// Copyright 2026 The dprl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Runs the dprl binary end to end. DPRL_CLI_PATH is set by the build.

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "json.hpp"
#include "test_util.hpp"

namespace dprl {
namespace {

struct Outcome {
  int code = -1;
  std::string out;
};

Outcome Cli(const std::string& args) {
  const std::string cmd = std::string(DPRL_CLI_PATH) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return o;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) o.out.append(buf, got);
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string DataFile() {
  static const std::string path = [] {
    std::mt19937_64 rng(3);
    std::ostringstream csv;
    csv << "a,b,c,d,y\n";
    for (int i = 0; i < 400; ++i) {
      const int a = rng() & 1U, b = rng() & 1U, c = rng() & 1U, d = rng() & 1U;
      const int y = rng() % 5 == 0 ? static_cast<int>(rng() & 1U) : (a & b) | c;
      csv << a << ',' << b << ',' << c << ',' << d << ',' << y << '\n';
    }
    return testing_util::WriteTemp("cli_data.csv", csv.str()).string();
  }();
  return path;
}

TEST(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Cli("").code, 1);
  EXPECT_EQ(Cli("train --data " + DataFile() + " --label y --epsilon 0 --seed 1").code, 1);
  EXPECT_EQ(Cli("train --data " + DataFile() + " --label y --mechanism bogus --seed 1").code, 1);
  EXPECT_EQ(Cli("train --data " + DataFile() + " --label y --no-such-flag").code, 1);
}

TEST(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(Cli("train --data /nonexistent.csv --label y --seed 1").code, 2);
  EXPECT_EQ(Cli("train --data " + DataFile() + " --label missing --seed 1").code, 2);
}

TEST(CliTest, TrainEvaluateAuditRoundTrip) {
  const auto model = testing_util::TempPath("cli_model.json").string();
  const auto trace = testing_util::TempPath("cli_trace.json").string();
  const Outcome t = Cli("train --data " + DataFile() +
                        " --label y --mechanism sm-laplace --epsilon 5 --seed 7 --split-seed 3"
                        " --release-counts --output " + model + " --trace " + trace);
  ASSERT_EQ(t.code, 0);
  std::ifstream in(model);
  const auto j = nlohmann::json::parse(in);
  ASSERT_TRUE(j.is_array());
  EXPECT_TRUE(j.back()["antecedent"].empty());
  EXPECT_TRUE(j.back().contains("noisy_c0"));

  const Outcome e = Cli("evaluate --data " + DataFile() + " --label y --model " + model +
                        " --split-seed 3");
  ASSERT_EQ(e.code, 0);
  const auto ev = nlohmann::json::parse(e.out);
  EXPECT_GE(ev["accuracy"].get<double>(), 0.0);
  EXPECT_GE(ev["vulnerability"]["overall"].get<double>(), 0.5);

  EXPECT_EQ(Cli("audit --trace " + trace).code, 0);
  std::ifstream tin(trace);
  auto tj = nlohmann::json::parse(tin);
  tj["accesses"].push_back(tj["accesses"][0]);
  tj["accesses"].back()["group"] = 1000;
  std::ofstream(trace) << tj.dump();
  EXPECT_EQ(Cli("audit --trace " + trace).code, 3);
}

TEST(CliTest, SameSeedSameModel) {
  const std::string args = "train --data " + DataFile() +
                           " --label y --mechanism gl-gaussian --epsilon 2 --seed 11";
  const Outcome a = Cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(Cli(args).out, a.out);
}

TEST(CliTest, MineThenTrainWithRules) {
  const auto rules = testing_util::TempPath("cli_rules.json").string();
  ASSERT_EQ(Cli("mine --data " + DataFile() + " --label y --max-arity 1 --output " + rules).code,
            0);
  std::ifstream in(rules);
  EXPECT_EQ(nlohmann::json::parse(in)["rules"].size(), 8u);
  EXPECT_EQ(Cli("train --data " + DataFile() + " --label y --mechanism none --rules " + rules +
                " --seed 1")
                .code,
            0);
}

TEST(CliTest, NoiseTableHeader) {
  const Outcome o = Cli("noise-table --n 10,100,1000");
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(o.out.substr(0, o.out.find('\n')), "n,smooth_scale,global_scale");
}

}  // namespace
}  // namespace dprl
