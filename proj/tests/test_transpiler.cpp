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
#include <random>

#include "oracles.hpp"
#include "qcflate/compression.hpp"
#include "qcflate/qasm.hpp"
#include "qcflate/transpiler/transpile.hpp"

using namespace qcflate;

namespace {

/// Unitary of a routed circuit read back in logical order:
/// P_final^T V P_initial should equal the source unitary.
Matrix logical_view(const Circuit& physical, const LayoutPermutation& l) {
    return permutation_matrix(l.final_layout).transpose() * oracle::unitary(physical) *
           permutation_matrix(l.initial);
}

Circuit random_3q(std::mt19937_64& rng, int len) {
    std::uniform_real_distribution<double> ang(-kPi, kPi);
    Circuit c(3);
    for (int i = 0; i < len; ++i) {
        const int a = static_cast<int>(rng() % 3), b = (a + 1 + static_cast<int>(rng() % 2)) % 3;
        switch (rng() % 6) {
            case 0: c.u3(a, ang(rng), ang(rng), ang(rng)); break;
            case 1: c.cx(a, b); break;
            case 2: c.ch(a, b); break;
            case 3: c.cu3(a, b, ang(rng), ang(rng), ang(rng)); break;
            case 4: c.ccx(a, b, 3 - a - b); break;
            default: c.swap(a, b); break;
        }
    }
    return c;
}

}  // namespace

TEST(Euler, DecomposesHaarUnitariesIntoRzSx) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 300; ++i) {
        const Matrix2 u = oracle::haar(2, rng);
        const auto gates = decompose_1q_to_basis(u);
        int sx = 0;
        Circuit c(1);
        for (const auto& g : gates) {
            EXPECT_TRUE(g.type == GateType::Rz || g.type == GateType::SX);
            sx += g.type == GateType::SX;
            c.append(g, {0});
        }
        EXPECT_LE(sx, 2);
        EXPECT_LE(gates.size(), 5U);
        EXPECT_NEAR(oracle::overlap(oracle::unitary(c), u), 1.0, 1e-10);
    }
}

TEST(Euler, SpecialAnglesUseFewerGates) {
    EXPECT_EQ(decompose_u3_to_basis(0.0, 0.3, 0.4).size(), 1U);
    EXPECT_TRUE(decompose_u3_to_basis(0.0, 0.0, 0.0).empty());
    const auto half = decompose_u3_to_basis(kPi / 2, 0.2, 0.1);
    EXPECT_EQ(std::count_if(half.begin(), half.end(), [](const Gate& g) { return g.type == GateType::SX; }), 1);
}

TEST(Kak, CnotCountMatchesIndependentCriterion) {
    std::mt19937_64 rng(99);
    Matrix cx = Matrix::Zero(4, 4);
    cx(0, 0) = cx(2, 2) = cx(1, 3) = cx(3, 1) = 1.0;
    for (int k = 0; k <= 3; ++k) {
        for (int trial = 0; trial < 40; ++trial) {
            Matrix u = oracle::local_pair(rng);
            for (int j = 0; j < k; ++j) u = oracle::local_pair(rng) * cx * u;
            const int expected = oracle::cnot_class(u);
            EXPECT_LE(expected, k);
            EXPECT_EQ(kak_cnot_count(u), expected) << "k=" << k << " trial=" << trial;
        }
    }
}

TEST(Kak, NamedGatesClassify) {
    Matrix id = Matrix::Identity(4, 4);
    Matrix cx = Matrix::Zero(4, 4), swap = Matrix::Zero(4, 4);
    cx(0, 0) = cx(2, 2) = cx(1, 3) = cx(3, 1) = 1.0;
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    EXPECT_EQ(kak_cnot_count(id), 0);
    EXPECT_EQ(kak_cnot_count(cx), 1);
    EXPECT_EQ(kak_cnot_count(swap), 3);
    EXPECT_EQ(oracle::cnot_class(swap), 3);
}

TEST(Kak, ReconstructsHaarUnitaries) {
    std::mt19937_64 rng(1234);
    for (int i = 0; i < 200; ++i) {
        const Matrix u = oracle::haar(4, rng);
        const Circuit c = kak_decompose(u);
        EXPECT_EQ(count_of(gate_counts(c), GateType::CNOT), oracle::cnot_class(u));
        EXPECT_NEAR(oracle::overlap(oracle::unitary(c), u), 1.0, 1e-9);
    }
}

TEST(Synthesis, ControlledGatesAndToffoliLowerExactly) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 30; ++i) {
        Circuit c = random_3q(rng, 6);
        const Circuit low = lower_to_basis(c);
        for (const auto& inst : low) EXPECT_TRUE(BasisGateSet{}.contains(inst.gate.type));
        EXPECT_NEAR(oracle::overlap(oracle::unitary(low), oracle::unitary(c)), 1.0, 1e-10);
    }
    EXPECT_EQ(count_of(gate_counts(decompose_toffoli()), GateType::CNOT), 6);
}

TEST(Synthesis, ControlledReflectionNeedsOneCnot) {
    // U3(theta, 0, pi) has eigenvalues +1 and -1, so its controlled form is a
    // CNOT up to single-qubit gates; U3(theta, pi, pi) is a rotation and is not.
    EXPECT_TRUE(is_reflection(u3_matrix(1.2, 0.0, kPi)));
    EXPECT_FALSE(is_reflection(u3_matrix(1.2, kPi, kPi)));
    const Circuit c = decompose_controlled_u(u3_matrix(1.2, 0.0, kPi));
    EXPECT_EQ(count_of(gate_counts(c), GateType::CNOT), 1);
    Circuit ref(2);
    ref.cu3(0, 1, 1.2, 0.0, kPi);
    EXPECT_NEAR(oracle::overlap(oracle::unitary(c), oracle::unitary(ref)), 1.0, 1e-10);
    EXPECT_EQ(oracle::cnot_class(oracle::unitary(ref)), 1);
    Circuit rot(2);
    rot.cu3(0, 1, 1.2, kPi, kPi);
    EXPECT_EQ(oracle::cnot_class(oracle::unitary(rot)), 2);
}

TEST(Passes, PreserveSemantics) {
    std::mt19937_64 rng(77);
    for (int i = 0; i < 20; ++i) {
        const Circuit c = lower_to_basis(random_3q(rng, 10));
        const Matrix ref = oracle::unitary(c);
        for (const Circuit& out : {merge_1q_runs(c), cancel_adjacent_pairs(c), commute_cancel(c), commute_1q_runs(c),
                                   resynthesize_2q_blocks(c)})
            EXPECT_NEAR(oracle::overlap(oracle::unitary(out), ref), 1.0, 1e-9);
    }
}

TEST(Passes, CancelAdjacentCnots) {
    Circuit c(2);
    c.cx(0, 1).cx(0, 1).rz(0, 0.1);
    EXPECT_EQ(count_of(gate_counts(cancel_adjacent_pairs(c)), GateType::CNOT), 0);
}

TEST(Passes, XRotationCommutesThroughTarget) {
    // SX SX before a CNOT target moves across it and merges with what follows.
    Circuit c(2);
    c.sx(1).sx(1).cx(0, 1).sx(1).sx(1);
    const Circuit out = commute_1q_runs(c);
    EXPECT_EQ(count_of(gate_counts(out), GateType::SX), 0);
    EXPECT_NEAR(oracle::overlap(oracle::unitary(out), oracle::unitary(c)), 1.0, 1e-10);
}

TEST(Routing, LineCnotNeedsAtMostFourCnots) {
    Circuit c(3);
    c.cx(0, 2);
    RouteOptions opt;
    opt.initial_layout = std::vector<int>{0, 1, 2};
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        auto [routed, layout] = route(c, CouplingMap::line3(), seed, opt);
        const Circuit low = lower_to_basis(routed);
        EXPECT_LE(count_of(gate_counts(low), GateType::CNOT), 4);
        EXPECT_TRUE(validate(low, CouplingMap::line3(), BasisGateSet{}).empty());
        EXPECT_NEAR(oracle::overlap(logical_view(low, layout), oracle::unitary(c)), 1.0, 1e-10);
    }
}

TEST(Routing, BridgeTemplateIsACnot) {
    Circuit bridge(3), direct(3);
    bridge.cx(0, 1).cx(1, 2).cx(0, 1).cx(1, 2);
    direct.cx(0, 2);
    EXPECT_NEAR(oracle::overlap(oracle::unitary(bridge), oracle::unitary(direct)), 1.0, 1e-12);
}

TEST(Routing, LayoutsAreConsistentOnLongerLines) {
    std::mt19937_64 rng(4);
    Circuit c(5);
    for (int i = 0; i < 25; ++i) {
        const int a = static_cast<int>(rng() % 5), b = (a + 1 + static_cast<int>(rng() % 4)) % 5;
        c.cx(a, b).rz(b, 0.1 * i);
    }
    auto [routed, layout] = route(c, CouplingMap::line(5), 3);
    EXPECT_TRUE(is_permutation_of_range(layout.initial));
    EXPECT_TRUE(is_permutation_of_range(layout.final_layout));
    for (const auto& inst : lower_to_basis(routed))
        if (inst.qubits.size() == 2) {
            EXPECT_TRUE(CouplingMap::line(5).connected(inst.qubits[0], inst.qubits[1]));
        }
    EXPECT_NEAR(oracle::overlap(logical_view(lower_to_basis(routed), layout), oracle::unitary(c)), 1.0, 1e-9);
}

TEST(Transpile, EveryLevelPreservesSemanticsAndValidates) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 8; ++i) {
        const Circuit c = random_3q(rng, 8);
        for (const auto& cm : {CouplingMap::triangle3(), CouplingMap::line3()})
            for (int level = 0; level <= 3; ++level) {
                PassConfig cfg;
                cfg.coupling = cm;
                cfg.optimization_level = level;
                cfg.seed = static_cast<std::uint64_t>(i);
                auto [out, rep] = transpile(c, cfg);
                EXPECT_TRUE(validate(out, cm, cfg.basis).empty());
                EXPECT_NEAR(oracle::overlap(logical_view(out, rep.layout), oracle::unitary(c)), 1.0, 1e-9);
                EXPECT_GE(rep.semantic_fidelity, 1.0 - 1e-9);
            }
    }
}

TEST(Transpile, NonUnitaryCircuitsKeepResetSemantics) {
    PassConfig cfg;
    cfg.coupling = CouplingMap::line3();
    auto [out, rep] = transpile(build_compdecomp_core(), cfg);
    EXPECT_GE(rep.semantic_fidelity, 1.0 - 1e-9);
    EXPECT_EQ(count_of(rep.counts, GateType::Reset), 1);
}

TEST(Transpile, HigherLevelsNeverAddCnotsOnCompression) {
    const Circuit c = build_compression_circuit();
    for (const auto& cm : {CouplingMap::triangle3(), CouplingMap::line3()}) {
        int prev = 1 << 30;
        for (int level = 0; level <= 3; ++level) {
            PassConfig cfg;
            cfg.coupling = cm;
            cfg.optimization_level = level;
            const int n = transpile(c, cfg).second.cnots();
            EXPECT_LE(n, prev) << "level " << level;
            prev = n;
        }
    }
}

TEST(Transpile, IdentityCircuitIsEmpty) {
    PassConfig cfg;
    auto [out, rep] = transpile(Circuit(3), cfg);
    EXPECT_TRUE(out.empty());
    EXPECT_EQ(rep.total_gates(), 0);
}

TEST(BestOfTrials, SingleTrialEqualsTranspile) {
    PassConfig cfg;
    cfg.coupling = CouplingMap::line3();
    cfg.optimization_level = 2;
    cfg.seed = 17;
    const Circuit c = build_compression_circuit();
    auto [a, ra] = transpile(c, cfg);
    auto [b, rb] = best_of_trials(c, cfg);
    EXPECT_EQ(qasm::write(a), qasm::write(b));
    EXPECT_EQ(to_json(ra.layout), to_json(rb.layout));
}

TEST(BestOfTrials, DeterministicAndRecordsEveryTrial) {
    PassConfig cfg;
    cfg.coupling = CouplingMap::line3();
    cfg.max_trials = 12;
    cfg.seed = 5;
    const Circuit c = build_compression_circuit();
    auto [a, ra] = transpile_default(c, cfg);
    auto [b, rb] = transpile_default(c, cfg);
    EXPECT_EQ(to_json(ra), to_json(rb));
    ASSERT_EQ(ra.trial_cnots.size(), 12U);
    EXPECT_EQ(ra.cnots(), *std::min_element(ra.trial_cnots.begin(), ra.trial_cnots.end()));
}

TEST(PassConfigJson, RoundTripAndRejectsUnknownFields) {
    PassConfig cfg;
    cfg.optimization_level = 2;
    cfg.seed = 9;
    cfg.max_trials = 4;
    cfg.coupling = CouplingMap::line3();
    cfg.initial_layout = std::vector<int>{2, 0, 1};
    const auto back = pass_config_from_json(to_json(cfg));
    EXPECT_EQ(to_json(back), to_json(cfg));
    EXPECT_THROW(pass_config_from_json({{"optimisation", 1}}), InputError);
    EXPECT_THROW(pass_config_from_json({{"optimization_level", 4}}), InputError);
    EXPECT_THROW(pass_config_from_json({{"max_trials", 0}}), InputError);
}
