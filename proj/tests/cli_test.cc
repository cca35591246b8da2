/* Copyright 2026 The DGDF Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Runs the dgdf binary as a subprocess and checks exit codes and outputs.

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun Exec(const std::string& args) {
  const std::string cmd = std::string(DGDF_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string TempDir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dgdf_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p.string();
}

std::string Slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

TEST(CliTest, CostTable) {
  CliRun r = Exec("cost --n 16 --c 4 --k 3 --m 2 --sigma 0.25");
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  bool found = false;
  while (std::getline(lines, line)) {
    std::istringstream f(line);
    std::string name;
    long params, gen_flops;
    if (f >> name >> params >> gen_flops && name == "scheme_a") {
      EXPECT_EQ(params, 80);
      EXPECT_EQ(gen_flops, 2304);
      found = true;
    }
  }
  EXPECT_TRUE(found) << r.out;
}

TEST(CliTest, CostCsv) {
  CliRun r = Exec("cost --n 16 --c 4 --k 3 --csv --methods scheme_b");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("scheme_b,16,4,3,"), std::string::npos) << r.out;
}

TEST(CliTest, VerifyDeterministic) {
  CliRun a = Exec("verify --seed 7");
  CliRun b = Exec("verify --seed 7");
  EXPECT_EQ(a.code, 0);
  // Strip wall-clock figures before comparing.
  auto strip = [](std::string s) {
    std::string out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line))
      if (line.find(" s)") == std::string::npos && line.find("elapsed") == std::string::npos)
        out += line + "\n";
    return out;
  };
  EXPECT_EQ(strip(a.out), strip(b.out));
  EXPECT_NE(a.out.find("PASS"), std::string::npos);
}

TEST(CliTest, BenchMemoryRatio) {
  const std::string dir = TempDir("bench");
  CliRun r = Exec("bench --methods scheme_a,scheme_b --c 64 --hw 64x64 --m 8 --repeats 11 --out " +
               dir + "/b.csv");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(Slurp(dir + "/b.csv"));
  std::string line;
  long mem_a = -1, mem_b = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("method", 0) == 0) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) cols.push_back(c);
    ASSERT_GE(cols.size(), 11u);
    if (cols[0] == "scheme_a") mem_a = std::stol(cols[10]);
    if (cols[0] == "scheme_b") mem_b = std::stol(cols[10]);
  }
  EXPECT_EQ(mem_b, 64 * 64 * 9);
  EXPECT_EQ(mem_a, mem_b * 8);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, UsageErrors) {
  EXPECT_EQ(Exec("").code, 2);
  EXPECT_EQ(Exec("bench --repeats 3").code, 2);
  EXPECT_EQ(Exec("cost --methods nonsense").code, 2);
  EXPECT_EQ(Exec("train-toy --fusion mul --iterations 1").code, 2);
}

TEST(CliTest, GenDataAndIoError) {
  const std::string dir = TempDir("gen");
  CliRun r = Exec("gen-data --out " + dir + " --count 2 --height 16 --width 16 --seed 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(std::filesystem::exists(dir + "/scene_0001.sparse.pgm"));
  EXPECT_TRUE(std::filesystem::exists(dir + "/scene_0000.guidance.dgdf"));
  EXPECT_EQ(Exec("gen-data --out /proc/no/such/dir --count 1").code, 3);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, TrainToyWritesCsv) {
  const std::string dir = TempDir("train");
  CliRun r = Exec("train-toy --fusion scheme_b --iterations 3 --scenes 2 --held-out 1 --size 16 "
               "--trace-out " + dir + "/t.csv --summary-out " + dir + "/s.csv");
  ASSERT_EQ(r.code, 0);
  const std::string trace = Slurp(dir + "/t.csv");
  EXPECT_NE(trace.find("\nfusion,iter,loss\n"), std::string::npos);
  EXPECT_NE(trace.find("scheme_b,3,"), std::string::npos);
  EXPECT_NE(Slurp(dir + "/s.csv").find("# aggregation="), std::string::npos);
  std::filesystem::remove_all(dir);
}

}  // namespace
