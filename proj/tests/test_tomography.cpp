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

#include <random>

#include "oracles.hpp"
#include "qcflate/simulator.hpp"
#include "qcflate/tomography.hpp"

using namespace qcflate;

namespace {

Matrix pauli(char p) {
    Matrix m(2, 2);
    switch (p) {
        case 'I': m << 1, 0, 0, 1; break;
        case 'X': m << 0, 1, 1, 0; break;
        case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
        default: m << 1, 0, 0, -1; break;
    }
    return m;
}

/// Exact per-setting outcome probabilities for a two-qubit state.
SettingProbabilities exact_probabilities(const Matrix& rho) {
    SettingProbabilities out;
    for (const auto& s : tomography_settings()) {
        Circuit c(2, 2);
        append_setting(c, s, 0, 1);
        const auto d = measurement_distribution(c, run_density(c, nullptr, DensityMatrix::from_matrix(rho)).probabilities());
        out[s.label()] = {d[0], d[1], d[2], d[3]};
    }
    return out;
}

SettingCounts sampled_counts(const Matrix& rho, std::uint64_t shots, std::uint64_t seed) {
    SettingCounts out;
    std::uint64_t k = 0;
    for (const auto& [label, p] : exact_probabilities(rho)) {
        const auto r = sample_shots({p.begin(), p.end()}, shots, seed * 16 + k++);
        out[label] = r.counts;
    }
    return out;
}

Matrix random_density(std::mt19937_64& rng, int rank) {
    Matrix g = Matrix::Zero(4, 4);
    for (int r = 0; r < rank; ++r) {
        const oracle::Vec v = oracle::haar_state(4, rng);
        g += (0.2 + 0.8 * static_cast<double>(rng() % 100) / 100.0) * v * v.adjoint();
    }
    return g / g.trace();
}

}  // namespace

TEST(Tomography, NineSettingsInFixedOrder) {
    const auto& s = tomography_settings();
    ASSERT_EQ(s.size(), 9U);
    EXPECT_EQ(s.front().label(), "XX");
    EXPECT_EQ(s.back().label(), "ZZ");
}

TEST(Tomography, MaximallyMixedGivesZeroExpectations) {
    const auto e = expectation_values(exact_probabilities(Matrix::Identity(4, 4) / 4.0));
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            if (p + q > 0) {
                EXPECT_NEAR(e.e[p][q], 0.0, 1e-12);
            }
}

TEST(Tomography, ZeroZeroExpectations) {
    Matrix rho = Matrix::Zero(4, 4);
    rho(0, 0) = 1.0;
    const auto e = expectation_values(exact_probabilities(rho));
    EXPECT_NEAR(e.get('Z', 'I'), 1.0, 1e-12);
    EXPECT_NEAR(e.get('I', 'Z'), 1.0, 1e-12);
    EXPECT_NEAR(e.get('Z', 'Z'), 1.0, 1e-12);
    EXPECT_NEAR(e.get('X', 'Y'), 0.0, 1e-12);
    EXPECT_LT((linear_inversion(e) - rho).norm(), 1e-12);
}

TEST(Tomography, ExpectationsMatchTraceOracle) {
    std::mt19937_64 rng(3);
    const Matrix rho = random_density(rng, 3);
    const auto e = expectation_values(exact_probabilities(rho));
    const std::string ps = "IXYZ";
    for (char p : ps)
        for (char q : ps) {
            // P acts on qubit 0, the less significant one: operator = Q (x) P.
            const Matrix op = kron(pauli(q), pauli(p));
            EXPECT_NEAR(e.get(p, q), (rho * op).trace().real(), 1e-12) << p << q;
        }
}

TEST(Tomography, ExactRoundTripOnRandomStates) {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 30; ++i) {
        const Matrix rho = random_density(rng, 1 + i % 4);
        const Matrix back = linear_inversion(expectation_values(exact_probabilities(rho)));
        EXPECT_LT(trace_distance(back, rho), 1e-10);
    }
}

TEST(Tomography, ZeroExpectationsInvertToIdentityQuarter) {
    PauliExpectations e;
    e.e[0][0] = 1.0;
    EXPECT_LT((linear_inversion(e) - Matrix::Identity(4, 4) / 4.0).norm(), 1e-15);
}

TEST(Tomography, FiniteShotsWithinBinomialScale) {
    std::mt19937_64 rng(5);
    const Matrix rho = random_density(rng, 2);
    const std::uint64_t shots = 8192;
    const auto exact = expectation_values(exact_probabilities(rho));
    const auto est = expectation_values(sampled_counts(rho, shots, 1));
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            EXPECT_NEAR(est.e[p][q], exact.e[p][q], 5.0 / std::sqrt(static_cast<double>(shots)));
}

TEST(ProjectToPhysical, ClipsAndRedistributes) {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1.1;
    m(1, 1) = -0.1;
    Matrix expect = Matrix::Zero(4, 4);
    expect(0, 0) = 1.0;
    EXPECT_LT((project_to_physical(m) - expect).norm(), 1e-12);
}

TEST(ProjectToPhysical, IdempotentAndIdentityOnPhysicalInput) {
    std::mt19937_64 rng(6);
    const Matrix rho = random_density(rng, 2);
    EXPECT_LT((project_to_physical(rho) - rho).norm(), 1e-12);
    for (int i = 0; i < 20; ++i) {
        const Matrix raw = linear_inversion(expectation_values(sampled_counts(random_density(rng, 1), 64, 100 + i)));
        const Matrix p = project_to_physical(raw);
        EXPECT_NEAR(p.trace().real(), 1.0, 1e-12);
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(p).eigenvalues().minCoeff(), -1e-12);
        EXPECT_LT((project_to_physical(p) - p).norm(), 1e-12);
    }
}

TEST(FidelityReport, Examples) {
    std::mt19937_64 rng(7);
    const StateVector t = StateVector::from_vector(oracle::haar_state(4, rng));
    const Vector v = t.vector();
    EXPECT_NEAR(fidelity_report(v * v.adjoint(), t), 1.0, 1e-12);
    EXPECT_NEAR(fidelity_report(Matrix::Identity(4, 4) / 4.0, t), 0.25, 1e-12);
    EXPECT_THROW(fidelity_report(Matrix::Identity(2, 2), t), InputError);
}

TEST(FidelityReport, SampledTomographyOfPureTargets) {
    std::mt19937_64 rng(8);
    double total = 0.0;
    for (int i = 0; i < 50; ++i) {
        const StateVector t = StateVector::from_vector(oracle::haar_state(4, rng));
        const Vector v = t.vector();
        const Matrix rho = linear_inversion(expectation_values(sampled_counts(v * v.adjoint(), 8192, 500 + i)));
        total += std::abs(fidelity_report(rho, t) - 1.0);
    }
    EXPECT_LE(total / 50.0, 0.02);
}

TEST(Counts, MissingSettingAndZeroShotsAreErrors) {
    SettingCounts c;
    for (const auto& s : tomography_settings()) c[s.label()] = {{"00", 10}};
    c.erase("XY");
    EXPECT_THROW(expectation_values(c), InputError);
    c["XY"] = {};
    EXPECT_THROW(expectation_values(c), InputError);
    c["XY"] = {{"0x", 3}};
    EXPECT_THROW(expectation_values(c), InputError);
}

TEST(Counts, JsonRoundTrip) {
    std::mt19937_64 rng(9);
    const auto c = sampled_counts(random_density(rng, 2), 1000, 3);
    EXPECT_EQ(setting_counts_from_json(to_json(c)), c);
}
