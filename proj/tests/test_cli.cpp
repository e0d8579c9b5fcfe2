// Copyright 2026 The qcflate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = QCFLATE_CLI_PATH;
const std::string kData = QCFLATE_DATA_DIR;

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("qcflate_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    /// Runs the CLI with `args`; stdout and stderr go to files in the scratch dir.
    int run(const std::string& args, const std::string& env = "") {
        const std::string cmd = env + " " + kCli + " " + args + " > " + (dir_ / "stdout").string() + " 2> " +
                                (dir_ / "stderr").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    std::string read(const fs::path& p) const {
        std::ifstream in(p.is_absolute() ? p : dir_ / p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    void write(const std::string& name, const std::string& text) const { std::ofstream(dir_ / name) << text; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, ValidatesShippedCalibrations) {
    EXPECT_EQ(run("calibration validate " + kData + "/calibrations/bogota_like.json --backend line"), 0);
    EXPECT_EQ(run("calibration validate " + kData + "/calibrations/yorktown_like.json --backend triangle"), 0);
}

TEST_F(Cli, ValidationNamesTheMissingEdge) {
    EXPECT_EQ(run("calibration validate " + kData + "/calibrations/bogota_like.json --backend triangle"), 2);
    EXPECT_NE(read("stderr").find("(0,2)"), std::string::npos) << read("stderr");
}

TEST_F(Cli, ValidationReportsT2AboveTwiceT1) {
    write("bad.json",
          "{\"backend\": \"b\",\n \"qubits\": [{\"t1_us\": 20, \"t2_us\": 60, \"readout_p01\": 0, \"readout_p10\": 0}],\n"
          " \"gates_1q\": {\"duration_ns\": 30, \"depolarizing\": 0},\n \"cnot\": []}\n");
    EXPECT_EQ(run("calibration validate " + (dir_ / "bad.json").string()), 2);
    EXPECT_NE(read("stderr").find("line 2"), std::string::npos) << read("stderr");
}

TEST_F(Cli, TranspileBuiltInCircuit) {
    ASSERT_EQ(run("transpile --backend triangle --strategy efficient --trials 2 --out " + dir_.string()), 0);
    const auto rep = nlohmann::json::parse(read("transpile_report.json"));
    EXPECT_EQ(rep.at("counts").at("CNOT").get<int>(), 9);
    EXPECT_FALSE(read("transpiled.qasm").empty());
}

TEST_F(Cli, TranspileQasmFile) {
    ASSERT_EQ(run("transpile " + kData + "/circuits/compression.qasm --backend line --strategy default --trials 5 --seed 3 --out " +
                  dir_.string()),
              0);
    const auto rep = nlohmann::json::parse(read("transpile_report.json"));
    // The reported seed is the winning trial's.
    EXPECT_GE(rep.at("seed").get<int>(), 3);
    EXPECT_LT(rep.at("seed").get<int>(), 8);
    EXPECT_EQ(rep.at("trials_run").get<int>(), 5);
}

TEST_F(Cli, IdentityCircuitTranspilesToNothing) {
    write("id.qasm", "qasm2-subset\nqubits 3\nclbits 0\n");
    ASSERT_EQ(run("transpile " + (dir_ / "id.qasm").string() + " --trials 1 --out " + dir_.string()), 0);
    const auto rep = nlohmann::json::parse(read("transpile_report.json"));
    EXPECT_TRUE(rep.at("counts").empty());
}

TEST_F(Cli, ExitCodes) {
    write("bad.qasm", "qasm2-subset\nqubits 2\nclbits 0\nfrobnicate q[0]\n");
    EXPECT_EQ(run("transpile " + (dir_ / "bad.qasm").string() + " --out " + dir_.string()), 2);
    EXPECT_EQ(run("transpile --backend hexagon"), 2);
    EXPECT_EQ(run("nonsense"), 2);
    EXPECT_EQ(run("experiment --label PLUS --runs 0"), 2);
    // A calibration without the (0,2) edge cannot serve the triangle.
    EXPECT_EQ(run("experiment --backend triangle --calibration " + kData + "/calibrations/bogota_like.json --out " +
                  dir_.string()),
              3);
    // Parses fine but does not fit on three qubits.
    write("wide.qasm", "qasm2-subset\nqubits 4\nclbits 0\ncx q[0] q[3]\n");
    EXPECT_EQ(run("transpile " + (dir_ / "wide.qasm").string() + " --trials 1 --out " + dir_.string()), 3);
    EXPECT_EQ(run("calibration validate " + (dir_ / "missing.json").string()), 2);
}

TEST_F(Cli, ExperimentIsReproducibleAndSeedFallsBackToEnvironment) {
    const std::string args = "experiment --experiment compdecomp --backend line --label PLUS,ZERO --runs 2 --shots 500 "
                             "--trials 3 --calibration " + kData + "/calibrations/bogota_like.json --out ";
    ASSERT_EQ(run(args + (dir_ / "a").string(), "QCFLATE_SEED=41"), 0);
    ASSERT_EQ(run(args + (dir_ / "b").string() + " --seed 41"), 0);
    EXPECT_EQ(read("a/report.json"), read("b/report.json"));
    EXPECT_EQ(read("a/report.csv"), read("b/report.csv"));
    EXPECT_EQ(nlohmann::json::parse(read("a/report.json")).at("seed").get<int>(), 41);
    EXPECT_EQ(run(args + (dir_ / "c").string(), "QCFLATE_SEED=abc"), 2);
}

TEST_F(Cli, ReportMerge) {
    const std::string base = "experiment --label ONE --runs 1 --shots 100 --trials 2 --out ";
    ASSERT_EQ(run(base + (dir_ / "e").string() + " --strategy efficient"), 0);
    ASSERT_EQ(run(base + (dir_ / "d").string() + " --strategy default"), 0);
    ASSERT_EQ(run("report merge " + (dir_ / "e/report.json").string() + " " + (dir_ / "d/report.json").string() +
                  " --out " + (dir_ / "m").string()),
              0);
    const auto merged = nlohmann::json::parse(read("m/merged.json"));
    ASSERT_EQ(merged.at("rows").size(), 2U);
    EXPECT_EQ(merged.at("rows")[0].at("strategy"), "default");
    EXPECT_EQ(read("m/merged.csv").substr(0, 5), "label");
}
