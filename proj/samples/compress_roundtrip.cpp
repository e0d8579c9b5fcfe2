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


// Compresses three copies of a random qubit state into two qubits, checks
// that the third qubit is free, then transpiles the circuit for a line of
// three qubits and prints the result.

#include <cstdio>
#include <iostream>
#include <random>

#include "qcflate/compression.hpp"
#include "qcflate/qasm.hpp"
#include "qcflate/transpiler/transpile.hpp"

int main() {
    using namespace qcflate;

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double theta = std::acos(1.0 - 2.0 * u(rng));
    const double phi = 2.0 * kPi * u(rng);

    Circuit c = prep_layer(prep_unitary(theta, phi));
    c.extend(build_compression_circuit());
    const StateVector out = run_ideal(c);
    std::printf("P(qubit 2 = 1) after compression: %.3g\n", out.probability_one(2));

    PassConfig cfg;
    cfg.coupling = CouplingMap::line3();
    cfg.max_trials = 20;
    auto [physical, report] = transpile_efficient(build_compression_circuit(), cfg);
    std::printf("line: %d CNOT, %d Rz, %d SX, depth %d\n", report.cnots(), count_of(report.counts, GateType::Rz),
                count_of(report.counts, GateType::SX), report.depth);
    std::cout << qasm::write(physical);
}
