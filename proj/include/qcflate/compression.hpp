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

#pragma once

// The 3 -> 2 qubit compression circuit: three copies of one pure qubit state
// are mapped onto two qubits while the third returns to |0>.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qcflate/circuit.hpp"
#include "qcflate/simulator.hpp"
#include "qcflate/state.hpp"
#include "qcflate/tomography.hpp"

namespace qcflate {

enum class InputState { Zero, One, Plus, Minus, YPlus, YMinus };

inline constexpr std::array kAllInputStates{InputState::Zero,  InputState::One,    InputState::Plus,
                                            InputState::Minus, InputState::YPlus, InputState::YMinus};

inline std::string_view label_name(InputState s) {
    switch (s) {
        case InputState::Zero: return "ZERO";
        case InputState::One: return "ONE";
        case InputState::Plus: return "PLUS";
        case InputState::Minus: return "MINUS";
        case InputState::YPlus: return "Y_PLUS";
        case InputState::YMinus: return "Y_MINUS";
    }
    return "?";
}

inline std::optional<InputState> label_from_name(std::string_view name) {
    for (InputState s : kAllInputStates)
        if (label_name(s) == name) return s;
    return std::nullopt;
}

struct CompressionAngles {
    double theta1 = 0.0;  // first controlled-U3, control 0 -> target 2
    double theta2 = 0.0;  // second controlled-U3, control 1 -> target 2
};

/// Exact disentangling angles: theta1 = 2 atan(sqrt 2), theta2 = 2 atan(1/sqrt 2).
/// Written as acos(-1/3), acos(1/3), which round correctly in double.
inline CompressionAngles compression_angles() { return {std::acos(-1.0 / 3.0), std::acos(1.0 / 3.0)}; }

/// The two-decimal values printed with the circuit diagram.
inline CompressionAngles printed_angles() { return {1.91, 1.23}; }

/// U3 whose first column is the labelled state.
inline Gate prep_unitary(InputState s) {
    switch (s) {
        case InputState::Zero: return Gate::u3(0.0, 0.0, 0.0);
        case InputState::One: return Gate::u3(kPi, 0.0, kPi);
        case InputState::Plus: return Gate::u3(kPi / 2, 0.0, kPi);
        case InputState::Minus: return Gate::u3(kPi / 2, kPi, 0.0);
        case InputState::YPlus: return Gate::u3(kPi / 2, kPi / 2, kPi / 2);
        case InputState::YMinus: return Gate::u3(kPi / 2, -kPi / 2, -kPi / 2);
    }
    throw InputError("unknown input state");
}

/// Preparation for Bloch angles: cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>.
inline Gate prep_unitary(double theta, double phi) { return Gate::u3(theta, phi, 0.0); }

inline Circuit build_compression_circuit(const CompressionAngles& a = compression_angles()) {
    Circuit c(3);
    c.cx(0, 1);                       // QSWT
    c.ch(1, 0);
    c.ccx(1, 2, 0);                   // Toffoli block
    c.cx(2, 1);
    c.cu3(0, 2, a.theta1, kPi, kPi);  // disentangle and erase qubit 2
    c.cu3(1, 2, a.theta2, 0.0, kPi);
    return c;
}

inline Circuit build_decompression_circuit(const CompressionAngles& a = compression_angles()) {
    return adjoint(build_compression_circuit(a));
}

/// Compression, reset of qubit 2, decompression.
inline Circuit build_compdecomp_core(const CompressionAngles& a = compression_angles()) {
    Circuit c = build_compression_circuit(a);
    c.reset(2);
    c.extend(build_decompression_circuit(a));
    return c;
}

inline Circuit prep_layer(const Gate& prep, int width = 3) {
    Circuit c(width);
    for (int q = 0; q < width; ++q) c.append(prep, {q});
    return c;
}

/// Prep, compression, reset of qubit 2, decompression, inverse prep and
/// measurement of every qubit, with barriers between the stages.
inline Circuit build_compdecomp_experiment(InputState label, const CompressionAngles& a = compression_angles()) {
    const Gate prep = prep_unitary(label);
    Circuit c(3, 3);
    c.extend(prep_layer(prep)).barrier();
    c.extend(build_compression_circuit(a)).barrier();
    c.reset(2).barrier();
    c.extend(build_decompression_circuit(a)).barrier();
    for (const auto& inst : adjoint(prep_layer(prep))) c.append(inst);
    c.barrier();
    for (int q = 0; q < 3; ++q) c.measure(q, q);
    return c;
}

/// Prep plus compression, followed by the nine tomography circuits on the
/// kept pair (qubits 0 and 1); qubit 2 is discarded.
struct CompressionExperiment {
    Circuit state_prep;                // prep and compression, no measurement
    std::vector<Circuit> settings;     // one per tomography setting, same order
};

inline CompressionExperiment build_compression_experiment(InputState label,
                                                          const CompressionAngles& a = compression_angles()) {
    CompressionExperiment out{Circuit(3, 2), {}};
    out.state_prep.extend(prep_layer(prep_unitary(label)));
    out.state_prep.extend(build_compression_circuit(a));
    for (const auto& s : tomography_settings()) {
        Circuit c = out.state_prep;
        c.barrier();
        append_setting(c, s, 0, 1);
        out.settings.push_back(std::move(c));
    }
    return out;
}

/// Two-qubit state left on qubits 0, 1 after compressing three copies of
/// the state prepared by `prep`.
inline StateVector ideal_compressed_state(const Gate& prep, const CompressionAngles& a = compression_angles()) {
    Circuit c = prep_layer(prep);
    c.extend(build_compression_circuit(a));
    const StateVector s = run_ideal(c);
    const double leak = s.probability_one(2);
    if (leak > 1e-9) throw NumericalError("compression left qubit 2 excited with probability " + std::to_string(leak));
    std::vector<cplx> amps(4);
    for (std::size_t i = 0; i < 4; ++i) amps[i] = s[i];
    return StateVector::from_amplitudes(std::move(amps));
}

inline StateVector ideal_compressed_state(InputState label) { return ideal_compressed_state(prep_unitary(label)); }

inline StateVector ideal_compressed_state(double theta, double phi) {
    return ideal_compressed_state(prep_unitary(theta, phi));
}

}  // namespace qcflate
