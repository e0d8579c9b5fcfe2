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

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qcflate/calibration.hpp"
#include "qcflate/compression.hpp"
#include "qcflate/qasm.hpp"
#include "qcflate/simulator.hpp"

using namespace qcflate;

namespace {

std::vector<Gate> haar_preps(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Gate> out;
    for (int i = 0; i < count; ++i) {
        const oracle::Vec v = oracle::haar_state(2, rng);
        const double theta = 2.0 * std::atan2(std::abs(v(1)), std::abs(v(0)));
        const double phi = std::arg(v(1)) - std::arg(v(0));
        out.push_back(prep_unitary(theta, phi));
    }
    return out;
}

double qubit2_ground(const Gate& prep, double t1, double t2) {
    Circuit c = prep_layer(prep);
    c.cx(0, 1).ch(1, 0).ccx(1, 2, 0).cx(2, 1).cu3(0, 2, t1, kPi, kPi).cu3(1, 2, t2, 0.0, kPi);
    return 1.0 - run_ideal(c).probability_one(2);
}

double mean_ground(const std::vector<Gate>& preps, double t1, double t2) {
    double s = 0.0;
    for (const auto& p : preps) s += qubit2_ground(p, t1, t2);
    return s / static_cast<double>(preps.size());
}

template <class F>
double golden_max(F f, double lo, double hi) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi, c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > 1e-11) {
        if (fc > fd) {
            b = d, d = c, fd = fc, c = b - g * (b - a), fc = f(c);
        } else {
            a = c, c = d, fc = fd, d = a + g * (b - a), fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST(CompressionAngles, MatchNumericalSearch) {
    const auto preps = haar_preps(20, 2024);
    double best = -1.0, t1 = 0.0, t2 = 0.0;
    const int grid = 48;
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j) {
            const double a = kPi * i / grid, b = kPi * j / grid;
            const double f = mean_ground(preps, a, b);
            if (f > best) best = f, t1 = a, t2 = b;
        }
    for (int round = 0; round < 12; ++round) {
        t1 = golden_max([&](double x) { return mean_ground(preps, x, t2); }, t1 - 0.1, t1 + 0.1);
        t2 = golden_max([&](double x) { return mean_ground(preps, t1, x); }, t2 - 0.1, t2 + 0.1);
    }
    const auto a = compression_angles();
    EXPECT_NEAR(a.theta1, t1, 1e-5);
    EXPECT_NEAR(a.theta2, t2, 1e-5);
    EXPECT_NEAR(mean_ground(preps, t1, t2), 1.0, 1e-9);
}

TEST(CompressionAngles, RoundToPrintedValues) {
    const auto a = compression_angles();
    EXPECT_NEAR(std::round(a.theta1 * 100) / 100, 1.91, 1e-12);
    EXPECT_NEAR(std::round(a.theta2 * 100) / 100, 1.23, 1e-12);
}

TEST(Prep, FirstColumnIsTheLabelledState) {
    const double r = 1.0 / std::sqrt(2.0);
    const std::vector<std::pair<InputState, std::array<cplx, 2>>> expected{
        {InputState::Zero, {1.0, 0.0}},      {InputState::One, {0.0, 1.0}},
        {InputState::Plus, {r, r}},          {InputState::Minus, {r, -r}},
        {InputState::YPlus, {r, cplx(0, r)}}, {InputState::YMinus, {r, cplx(0, -r)}}};
    for (const auto& [label, v] : expected) {
        const Matrix m = oracle::local_matrix(prep_unitary(label));
        const cplx overlap = std::conj(v[0]) * m(0, 0) + std::conj(v[1]) * m(1, 0);
        EXPECT_NEAR(std::abs(overlap), 1.0, 1e-12) << label_name(label);
    }
}

TEST(Prep, LabelNamesRoundTrip) {
    for (InputState l : kAllInputStates) EXPECT_EQ(label_from_name(label_name(l)), l);
    EXPECT_FALSE(label_from_name("PLUS_Z").has_value());
}

TEST(CompressionCircuit, GateCountsFollowTheFigure) {
    const auto counts = gate_counts(build_compression_circuit());
    EXPECT_EQ(count_of(counts, GateType::CNOT), 2);
    EXPECT_EQ(count_of(counts, GateType::CH), 1);
    EXPECT_EQ(count_of(counts, GateType::CCX), 1);
    EXPECT_EQ(count_of(counts, GateType::CU3), 2);
}

TEST(CompressionCircuit, FreesQubitTwoForHaarInputs) {
    for (const auto& prep : haar_preps(50, 7)) {
        Circuit c = prep_layer(prep);
        c.extend(build_compression_circuit());
        EXPECT_LT(run_ideal(c).probability_one(2), 1e-9);
    }
}

TEST(CompressionCircuit, PrintedAnglesLeakLittle) {
    for (const auto& prep : haar_preps(50, 8)) {
        Circuit c = prep_layer(prep);
        c.extend(build_compression_circuit(printed_angles()));
        EXPECT_LT(run_ideal(c).probability_one(2), 1e-5);
    }
}

TEST(Decompression, IsTheAdjoint) {
    const Matrix u = oracle::unitary(build_compression_circuit());
    const Matrix v = oracle::unitary(build_decompression_circuit());
    EXPECT_NEAR(oracle::overlap(v * u, Matrix::Identity(8, 8)), 1.0, 1e-12);
}

TEST(Decompression, RestoresThreeCopies) {
    for (const auto& prep : haar_preps(10, 9)) {
        const StateVector phi = ideal_compressed_state(prep);
        const StateVector in = StateVector::tensor(StateVector(1), phi);
        const StateVector out = run_ideal(build_decompression_circuit(), in);
        Circuit copies = prep_layer(prep);
        EXPECT_NEAR(state_fidelity(out, run_ideal(copies)), 1.0, 1e-9);
    }
}

TEST(CompDecomp, EveryLabelReturnsToZero) {
    for (InputState l : kAllInputStates) {
        const Circuit c = build_compdecomp_experiment(l);
        const auto d = measurement_distribution(c, run_density(c).probabilities());
        EXPECT_NEAR(d[0], 1.0, 1e-9) << label_name(l);
    }
}

TEST(CompDecomp, WithoutDecompressionPlusIsNotRecovered) {
    const Gate prep = prep_unitary(InputState::Plus);
    Circuit c(3, 3);
    c.extend(prep_layer(prep)).extend(build_compression_circuit()).reset(2);
    for (const auto& inst : adjoint(prep_layer(prep))) c.append(inst);
    for (int q = 0; q < 3; ++q) c.measure(q, q);
    const auto d = measurement_distribution(c, run_density(c).probabilities());
    EXPECT_LT(d[0], 1.0 - 1e-3);
}

TEST(CompDecomp, HasBarriersBetweenStages) {
    const Circuit c = build_compdecomp_experiment(InputState::Plus);
    const auto counts = gate_counts(c);
    EXPECT_EQ(std::count_if(c.begin(), c.end(), [](const auto& i) { return i.gate.type == GateType::Barrier; }), 5);
    EXPECT_EQ(count_of(counts, GateType::Measure), 3);
    EXPECT_EQ(count_of(counts, GateType::Reset), 1);
}

TEST(IdealCompressedState, ZeroAndPurity) {
    const auto zero = ideal_compressed_state(InputState::Zero);
    EXPECT_NEAR(std::norm(zero[0]), 1.0, 1e-12);
    for (InputState l : kAllInputStates) {
        const auto s = ideal_compressed_state(l);
        EXPECT_NEAR(s.norm(), 1.0, 1e-12);
        EXPECT_NEAR(DensityMatrix(s).purity(), 1.0, 1e-9);
    }
}

TEST(CompressionExperiment, NineTwoQubitMeasurementCircuits) {
    const auto e = build_compression_experiment(InputState::YMinus);
    ASSERT_EQ(e.settings.size(), 9U);
    for (const auto& c : e.settings) {
        EXPECT_EQ(count_of(gate_counts(c), GateType::Measure), 2);
        EXPECT_EQ(c.num_clbits(), 2);
    }
}

TEST(DataFiles, CircuitsMatchBuilders) {
    const std::string dir = std::string(QCFLATE_DATA_DIR) + "/circuits/";
    const Circuit comp = qasm::read(read_text_file(dir + "compression.qasm"));
    EXPECT_EQ(qasm::write(comp), qasm::write(build_compression_circuit()));
    const Circuit core = qasm::read(read_text_file(dir + "compdecomp_core.qasm"));
    // Same channel: compare outputs on random pure inputs.
    std::mt19937_64 rng(12);
    for (int i = 0; i < 6; ++i) {
        const DensityMatrix in(StateVector::from_vector(oracle::haar_state(8, rng)));
        const auto x = run_density(core, nullptr, in);
        const auto y = run_density(build_compdecomp_core(), nullptr, in);
        EXPECT_LT((x.matrix() - y.matrix()).norm(), 1e-9) << i;
    }
}
