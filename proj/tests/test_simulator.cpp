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

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcflate/calibration.hpp"
#include "qcflate/channels.hpp"
#include "qcflate/simulator.hpp"

using namespace qcflate;

namespace {

CalibrationData simple_calibration(double t1 = 100.0, double t2 = 80.0) {
    CalibrationData cal;
    cal.backend = "test";
    for (int q = 0; q < 3; ++q) cal.qubits.push_back({t1, t2, 0.0, 0.0});
    cal.gates_1q = {35.0, 0.001};
    cal.cnot = {{make_edge(0, 1), 400.0, 0.01}, {make_edge(1, 2), 400.0, 0.01}, {make_edge(0, 2), 400.0, 0.01}};
    return cal;
}

std::string shipped(const std::string& name) { return std::string(QCFLATE_DATA_DIR) + "/calibrations/" + name; }

}  // namespace

TEST(StateVector, MatchesOracleUnitaryOnRandomCircuits) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    for (int trial = 0; trial < 20; ++trial) {
        Circuit c(4);
        for (int i = 0; i < 20; ++i) {
            const int a = static_cast<int>(rng() % 4), b = (a + 1 + static_cast<int>(rng() % 3)) % 4;
            if (i % 3 == 0) c.cu3(a, b, ang(rng), ang(rng), ang(rng));
            else if (i % 3 == 1) c.u3(a, ang(rng), ang(rng), ang(rng));
            else c.cx(b, a);
        }
        const Vector expect = oracle::unitary(c).col(0);
        const Vector got = run_ideal(c).vector();
        EXPECT_LT((expect - got).norm(), 1e-10);
    }
}

TEST(StateVector, ResetOnDefiniteQubit) {
    Circuit c(2);
    c.x(1).reset(1);
    EXPECT_NEAR(run_ideal(c).probabilities()[0], 1.0, 1e-12);
}

TEST(StateVector, MidCircuitMeasurementIsRejected) {
    Circuit c(1, 1);
    c.h(0).measure(0, 0).h(0);
    EXPECT_THROW(run_ideal(c), ValidationError);
}

TEST(DensityMatrix, NoiselessAgreesWithStateVector) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    Circuit c(3);
    for (int i = 0; i < 12; ++i) c.u3(i % 3, ang(rng), ang(rng), ang(rng)).cx(i % 3, (i + 1) % 3);
    c.ccx(0, 1, 2).ch(2, 0);
    const auto psi = run_ideal(c);
    const auto rho = run_density(c);
    const Vector v = psi.vector();
    EXPECT_LT((rho.matrix() - v * v.adjoint()).norm(), 1e-10);
}

TEST(DensityMatrix, ResetOfSuperpositionIsNonSelective) {
    Circuit c(1);
    c.h(0).reset(0);
    const auto rho = run_density(c);
    EXPECT_NEAR(rho.matrix()(0, 0).real(), 1.0, 1e-12);
    EXPECT_NEAR(rho.purity(), 1.0, 1e-12);
}

TEST(Channels, AreTracePreserving) {
    EXPECT_LT(thermal_relaxation_channel(50.0, 40.0, 400.0).trace_preservation_error(), 1e-12);
    EXPECT_LT(depolarizing_channel(0.3, 2).trace_preservation_error(), 1e-12);
    EXPECT_LT(reset_channel(0.05).trace_preservation_error(), 1e-12);
    EXPECT_LT(dephasing_measurement_channel().trace_preservation_error(), 1e-12);
}

TEST(Channels, DepolarizingExamples) {
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    const Matrix full = depolarizing_channel(1.0, 1).apply(zero);
    EXPECT_LT((full - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-12);
    const Matrix half = depolarizing_channel(0.5, 1).apply(zero);
    EXPECT_NEAR(half(0, 0).real(), 0.75, 1e-12);
    EXPECT_NEAR(half(1, 1).real(), 0.25, 1e-12);
    EXPECT_THROW(depolarizing_channel(1.5, 1), InputError);
}

TEST(Channels, ThermalRelaxationFollowsT1AndT2) {
    const double t1 = 60.0, t2 = 45.0, ns = 2500.0, t = ns * 1e-3;
    Matrix one = Matrix::Zero(2, 2);
    one(1, 1) = 1.0;
    const Matrix r1 = thermal_relaxation_channel(t1, t2, ns).apply(one);
    EXPECT_NEAR(r1(1, 1).real(), std::exp(-t / t1), 1e-12);
    Matrix plus = Matrix::Constant(2, 2, 0.5);
    const Matrix r2 = thermal_relaxation_channel(t1, t2, ns).apply(plus);
    EXPECT_NEAR(std::abs(r2(0, 1)), 0.5 * std::exp(-t / t2), 1e-12);
    EXPECT_THROW(thermal_relaxation_channel(10.0, 25.0, 100.0), ValidationError);
}

TEST(Channels, ComposedSuperoperatorEqualsSequentialApplication) {
    const auto a = thermal_relaxation_channel(70.0, 50.0, 300.0);
    const auto b = depolarizing_channel(0.2, 1);
    std::mt19937_64 rng(8);
    const Vector psi = oracle::haar_state(2, rng);
    const Matrix rho = psi * psi.adjoint();
    EXPECT_LT((a.then(b).apply(rho) - b.apply(a.apply(rho))).norm(), 1e-12);
}

TEST(NoisySimulation, StaysPhysicalAndLosesFidelity) {
    const NoiseModel nm{simple_calibration(), 1.0, true};
    Circuit c(3);
    c.h(0).cx(0, 1).cx(1, 2).rz(2, 0.4).sx(1).cx(0, 2);
    const auto rho = run_density(c, &nm);
    EXPECT_NEAR(rho.trace(), 1.0, 1e-10);
    EXPECT_GT(rho.min_eigenvalue(), -1e-10);
    const double f = state_fidelity(run_ideal(c), rho);
    EXPECT_LT(f, 1.0 - 1e-4);
    EXPECT_GT(f, 0.8);
}

TEST(NoisySimulation, RzIsNoiseless) {
    const NoiseModel nm{simple_calibration(), 1.0, false};
    Circuit c(1);
    c.rz(0, 0.7).rz(0, -0.2);
    EXPECT_NEAR(run_density(c, &nm).purity(), 1.0, 1e-12);
}

TEST(NoisySimulation, UnsupportedGatesThrow) {
    const NoiseModel nm{simple_calibration(), 1.0, false};
    Circuit c(2);
    c.ch(0, 1);
    EXPECT_THROW(run_density(c, &nm), ValidationError);
}

TEST(NoisySimulation, MissingEdgeThrows) {
    auto cal = simple_calibration();
    cal.cnot.pop_back();  // drop (0,2)
    const NoiseModel nm{cal, 1.0, false};
    Circuit c(3);
    c.cx(0, 2);
    EXPECT_THROW(run_density(c, &nm), ValidationError);
}

TEST(Readout, ConfusionIsAppliedPerBit) {
    const std::vector<double> p{1.0, 0.0, 0.0, 0.0};
    const auto q = apply_readout(p, {{0.0, 0.1}, {0.0, 0.2}});
    EXPECT_NEAR(q[0], 0.9 * 0.8, 1e-15);
    EXPECT_NEAR(q[1], 0.1 * 0.8, 1e-15);
    EXPECT_NEAR(q[2], 0.9 * 0.2, 1e-15);
    EXPECT_NEAR(q[3], 0.1 * 0.2, 1e-15);
}

TEST(Sampling, CountsAreWithinBinomialBounds) {
    const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
    const std::uint64_t shots = 100000;
    const auto r = sample_shots(p, shots, 42);
    std::uint64_t total = 0;
    for (const auto& [k, v] : r.counts) total += v;
    EXPECT_EQ(total, shots);
    for (std::size_t i = 0; i < 4; ++i) {
        const double sd = std::sqrt(p[i] * (1 - p[i]) / static_cast<double>(shots));
        EXPECT_NEAR(r.frequency(bitstring(i, 2)), p[i], 5 * sd);
    }
}

TEST(Sampling, DeterministicPerSeedAndZeroProbabilityNeverDrawn) {
    const std::vector<double> p{0.5, 0.0, 0.5, 0.0};
    const auto a = sample_shots(p, 1000, 7), b = sample_shots(p, 1000, 7), c = sample_shots(p, 1000, 8);
    EXPECT_EQ(a.counts, b.counts);
    EXPECT_NE(a.counts, c.counts);
    EXPECT_EQ(a.counts.count("01"), 0U);
    EXPECT_EQ(a.counts.count("11"), 0U);
}

TEST(Sampling, RejectsBadDistributions) {
    EXPECT_THROW(sample_shots({0.5, 0.6}, 10, 0), InputError);
    EXPECT_THROW(sample_shots({0.5, 0.2, 0.3}, 10, 0), InputError);
}

TEST(Sampling, BitstringPutsClbitZeroRightmost) {
    EXPECT_EQ(bitstring(1, 3), "001");
    EXPECT_EQ(bitstring(6, 3), "110");
}

TEST(MeasurementDistribution, FollowsClbitMapping) {
    Circuit c(2, 2);
    c.x(0).measure(0, 1).measure(1, 0);
    const auto d = measurement_distribution(c, run_ideal(c).probabilities());
    EXPECT_NEAR(d[2], 1.0, 1e-12);  // clbit 1 set
}

TEST(Calibration, ShippedFilesAreValid) {
    const CouplingMap line = CouplingMap::line3(), tri = CouplingMap::triangle3();
    EXPECT_NO_THROW(load_calibration(shipped("bogota_like.json"), &line));
    EXPECT_NO_THROW(load_calibration(shipped("yorktown_like.json"), &tri));
}

TEST(Calibration, MissingEdgeIsNamed) {
    const CouplingMap tri = CouplingMap::triangle3();
    const auto check = check_calibration(read_text_file(shipped("bogota_like.json")), &tri);
    ASSERT_FALSE(check.ok());
    EXPECT_NE(check.diagnostics.front().message.find("(0,2)"), std::string::npos) << check.diagnostics.front().str();
}

TEST(Calibration, T2AboveTwiceT1IsReportedWithLine) {
    const std::string text =
        "{\n"
        "  \"backend\": \"x\",\n"
        "  \"qubits\": [\n"
        "    {\"t1_us\": 10, \"t2_us\": 30, \"readout_p01\": 0, \"readout_p10\": 0}\n"
        "  ],\n"
        "  \"gates_1q\": {\"duration_ns\": 30, \"depolarizing\": 0.001},\n"
        "  \"cnot\": []\n"
        "}\n";
    const auto check = check_calibration(text);
    ASSERT_EQ(check.diagnostics.size(), 1U);
    EXPECT_EQ(check.diagnostics[0].line, 4);
    EXPECT_EQ(check.diagnostics[0].pointer, "/qubits/0/t2_us");
    EXPECT_THROW(parse_calibration(text), ValidationError);
}

TEST(Calibration, UnknownFieldsAndSyntaxErrors) {
    EXPECT_THROW(parse_calibration("{\"backend\": \"x\", \"qubits\": [], "), InputError);
    const auto check = check_calibration(
        "{\"backend\": \"x\", \"qubits\": [{\"t1_us\": 10, \"t2_us\": 5, \"readout_p01\": 0, \"readout_p10\": 0}],"
        " \"gates_1q\": {\"duration_ns\": 30, \"depolarizing\": 0.001}, \"cnot\": [], \"colour\": 1}");
    ASSERT_EQ(check.diagnostics.size(), 1U);
    EXPECT_NE(check.diagnostics[0].message.find("colour"), std::string::npos);
}

TEST(Calibration, JsonRoundTrip) {
    const auto cal = load_calibration(shipped("yorktown_like.json"));
    const auto back = parse_calibration(to_json(cal).dump());
    EXPECT_EQ(to_json(back), to_json(cal));
}
