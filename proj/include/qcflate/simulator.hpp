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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qcflate/calibration.hpp"
#include "qcflate/channels.hpp"
#include "qcflate/circuit.hpp"
#include "qcflate/random.hpp"
#include "qcflate/state.hpp"

namespace qcflate {

/// Calibration-driven noise. After each gate its operands get thermal
/// relaxation for the gate duration, then depolarizing noise. Rz is a frame
/// change and stays noiseless.
struct NoiseModel {
    CalibrationData calibration;
    double depolarizing_scale = 1.0;  // multiplies every depolarizing probability
    bool idle_decay = false;          // relax waiting qubits on an ASAP schedule

    [[nodiscard]] double scaled(double p) const { return std::clamp(p * depolarizing_scale, 0.0, 1.0); }
};

namespace detail {

/// Instruction indices after which a qubit is never touched again, except by
/// barriers and further measurements.
inline std::vector<bool> terminal_measurements(const Circuit& c) {
    std::vector<bool> terminal(c.size(), false);
    std::vector<bool> later(static_cast<std::size_t>(c.num_qubits()), false);
    for (std::size_t i = c.size(); i-- > 0;) {
        const auto& inst = c[i];
        if (inst.gate.type == GateType::Barrier) continue;
        if (inst.gate.type == GateType::Measure) {
            terminal[i] = !later[static_cast<std::size_t>(inst.qubits[0])];
            continue;
        }
        for (int q : inst.qubits) later[static_cast<std::size_t>(q)] = true;
    }
    return terminal;
}

inline void check_width(const Circuit& c, int width) {
    if (c.num_qubits() != width)
        throw InputError("circuit width " + std::to_string(c.num_qubits()) + " does not match state width " +
                         std::to_string(width));
}

}  // namespace detail

/// Noiseless pure-state evolution. Reset is accepted only where the qubit is
/// in a definite basis state; measurements must be terminal and are ignored.
inline StateVector run_ideal(const Circuit& c, StateVector state) {
    detail::check_width(c, state.num_qubits());
    const auto terminal = detail::terminal_measurements(c);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& inst = c[i];
        switch (inst.gate.type) {
            case GateType::Barrier: break;
            case GateType::Measure:
                if (!terminal[i]) throw ValidationError("mid-circuit measurement is unsupported in statevector mode; use density mode");
                break;
            case GateType::Reset: {
                const double p1 = state.probability_one(inst.qubits[0]);
                if (p1 > 1e-9 && p1 < 1.0 - 1e-9)
                    throw ValidationError("reset of a qubit in superposition is unsupported in statevector mode; use density mode");
                if (p1 >= 0.5) state.apply(x_matrix(), inst.qubits);
                break;
            }
            default: state.apply(gate_matrix(inst.gate), inst.qubits);
        }
    }
    return state;
}

inline StateVector run_ideal(const Circuit& c) { return run_ideal(c, StateVector(c.num_qubits())); }

/// Density-matrix evolution with optional noise.
inline DensityMatrix run_density(const Circuit& c, const NoiseModel* noise, DensityMatrix rho) {
    detail::check_width(c, rho.num_qubits());
    const int n = c.num_qubits();
    if (noise && noise->calibration.num_qubits() < n)
        throw ValidationError("calibration covers " + std::to_string(noise->calibration.num_qubits()) +
                              " qubits but the circuit uses " + std::to_string(n));

    std::vector<bool> measured(static_cast<std::size_t>(n), false);
    std::vector<double> clock(static_cast<std::size_t>(n), 0.0);
    const Matrix measure_super = dephasing_measurement_channel().superoperator();
    const Matrix reset_super = reset_channel(noise ? noise->calibration.reset_error : 0.0).superoperator();

    auto relax = [&](int q, double duration_ns) {
        if (duration_ns <= 0.0) return;
        const auto& qc = noise->calibration.qubit(q);
        const int ops[1] = {q};
        rho.apply_superoperator(thermal_relaxation_channel(qc.t1_us, qc.t2_us, duration_ns).superoperator(), ops);
    };
    auto idle_until = [&](int q, double t) {
        auto& cl = clock[static_cast<std::size_t>(q)];
        if (noise->idle_decay && !measured[static_cast<std::size_t>(q)] && t > cl) relax(q, t - cl);
        cl = std::max(cl, t);
    };
    // Relaxation then depolarizing on `qs` for one pulse of the given calibration.
    auto pulse = [&](const std::vector<int>& qs, double duration_ns, double depol) {
        double start = 0.0;
        for (int q : qs) start = std::max(start, clock[static_cast<std::size_t>(q)]);
        for (int q : qs) idle_until(q, start);
        for (int q : qs) relax(q, duration_ns);
        const double p = noise->scaled(depol);
        if (p > 0.0) rho.apply_superoperator(depolarizing_channel(p, static_cast<int>(qs.size())).superoperator(), qs);
        for (int q : qs) clock[static_cast<std::size_t>(q)] = start + duration_ns;
    };

    for (const auto& inst : c) {
        const GateType t = inst.gate.type;
        if (t != GateType::Barrier && t != GateType::Measure)
            for (int q : inst.qubits)
                if (measured[static_cast<std::size_t>(q)])
                    throw ValidationError("operation on qubit " + std::to_string(q) + " after its measurement is unsupported");
        switch (t) {
            case GateType::Barrier:
                if (noise && noise->idle_decay) {
                    double m = 0.0;
                    for (int q : inst.qubits) m = std::max(m, clock[static_cast<std::size_t>(q)]);
                    for (int q : inst.qubits) idle_until(q, m);
                }
                break;
            case GateType::Measure:
                rho.apply_superoperator(measure_super, inst.qubits);
                measured[static_cast<std::size_t>(inst.qubits[0])] = true;
                break;
            case GateType::Reset:
                rho.apply_superoperator(reset_super, inst.qubits);
                break;
            default: {
                rho.apply_unitary(gate_matrix(inst.gate), inst.qubits);
                if (!noise || t == GateType::Rz) break;
                const auto& cal = noise->calibration;
                if (inst.qubits.size() == 1) {
                    pulse(inst.qubits, cal.gates_1q.duration_ns, cal.gates_1q.depolarizing);
                } else if (t == GateType::CNOT || t == GateType::SWAP) {
                    const auto& e = cal.edge(inst.qubits[0], inst.qubits[1]);
                    for (int k = 0; k < (t == GateType::SWAP ? 3 : 1); ++k) pulse(inst.qubits, e.duration_ns, e.depolarizing);
                } else {
                    throw ValidationError("noisy simulation of " + std::string(gate_name(t)) +
                                          " is unsupported; transpile to basis gates first");
                }
            }
        }
    }
    return rho;
}

inline DensityMatrix run_density(const Circuit& c, const NoiseModel* noise = nullptr) {
    return run_density(c, noise, DensityMatrix(c.num_qubits()));
}

/// Distribution over the classical register (clbit 0 = least significant
/// index bit) implied by the circuit's measurements on a final state.
/// Unwritten clbits read 0.
inline std::vector<double> measurement_distribution(const Circuit& c, const std::vector<double>& state_probs) {
    std::vector<int> source(static_cast<std::size_t>(c.num_clbits()), -1);
    for (const auto& inst : c)
        if (inst.gate.type == GateType::Measure) source[static_cast<std::size_t>(inst.gate.clbit)] = inst.qubits[0];
    std::vector<double> out(std::size_t{1} << c.num_clbits(), 0.0);
    for (std::size_t i = 0; i < state_probs.size(); ++i) {
        std::size_t k = 0;
        for (std::size_t b = 0; b < source.size(); ++b)
            if (source[b] >= 0 && ((i >> source[b]) & 1U)) k |= std::size_t{1} << b;
        out[k] += state_probs[i];
    }
    return out;
}

/// Per-bit classical confusion: p10 = P(read 1 | true 0), p01 = P(read 0 | true 1).
struct ReadoutError {
    double p01 = 0.0;
    double p10 = 0.0;
};

/// Readout confusion for every clbit, taken from the qubit measured into it.
inline std::vector<ReadoutError> readout_errors(const Circuit& c, const CalibrationData& cal) {
    std::vector<ReadoutError> out(static_cast<std::size_t>(c.num_clbits()));
    for (const auto& inst : c)
        if (inst.gate.type == GateType::Measure) {
            const auto& q = cal.qubit(inst.qubits[0]);
            out[static_cast<std::size_t>(inst.gate.clbit)] = {q.readout_p01, q.readout_p10};
        }
    return out;
}

/// Exact effect of independent per-bit confusion on a distribution.
inline std::vector<double> apply_readout(std::vector<double> probs, const std::vector<ReadoutError>& readout) {
    for (std::size_t b = 0; b < readout.size(); ++b) {
        const auto [p01, p10] = readout[b];
        if (p01 == 0.0 && p10 == 0.0) continue;
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            if (i & bit) continue;
            const double p0 = probs[i], p1 = probs[i | bit];
            probs[i] = p0 * (1.0 - p10) + p1 * p01;
            probs[i | bit] = p0 * p10 + p1 * (1.0 - p01);
        }
    }
    return probs;
}

/// Bitstring of `index` over `bits` bits; bit 0 is the rightmost character.
inline std::string bitstring(std::size_t index, int bits) {
    std::string s(static_cast<std::size_t>(bits), '0');
    for (int b = 0; b < bits; ++b)
        if ((index >> b) & 1U) s[static_cast<std::size_t>(bits - 1 - b)] = '1';
    return s;
}

struct ShotResult {
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t shots = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] double frequency(const std::string& outcome) const {
        const auto it = counts.find(outcome);
        return it == counts.end() || shots == 0 ? 0.0 : static_cast<double>(it->second) / static_cast<double>(shots);
    }
};

/// Draws `shots` outcomes after applying readout confusion exactly. The
/// multinomial is sampled as a chain of conditional binomials, so the cost is
/// linear in the number of outcomes rather than in the number of shots.
inline ShotResult sample_shots(const std::vector<double>& probabilities, const std::vector<ReadoutError>& readout,
                               std::uint64_t shots, std::uint64_t seed) {
    const std::size_t dim = probabilities.size();
    if (dim == 0 || (dim & (dim - 1)) != 0) throw InputError("sample_shots: outcome count must be a power of two");
    int bits = 0;
    while ((std::size_t{1} << bits) < dim) ++bits;
    if (!readout.empty() && static_cast<int>(readout.size()) != bits)
        throw InputError("sample_shots: need one readout entry per bit");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < -1e-12 || !std::isfinite(p)) throw InputError("sample_shots: negative or non-finite probability");
        total += std::max(p, 0.0);
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("sample_shots: probabilities must sum to 1");

    std::vector<double> p(dim);
    for (std::size_t i = 0; i < dim; ++i) p[i] = std::max(probabilities[i], 0.0);
    p = apply_readout(std::move(p), readout);

    ShotResult out;
    out.shots = shots;
    out.seed = seed;
    Rng rng = make_rng(seed);
    std::vector<double> suffix(dim + 1, 0.0);
    for (std::size_t i = dim; i-- > 0;) suffix[i] = suffix[i + 1] + p[i];
    std::size_t last = dim - 1;
    while (last > 0 && p[last] <= 0.0) --last;
    std::uint64_t left = shots;
    for (std::size_t i = 0; i <= last && left > 0; ++i) {
        std::uint64_t k = left;
        if (i < last) {
            const double q = suffix[i] > 0.0 ? std::clamp(p[i] / suffix[i], 0.0, 1.0) : 0.0;
            k = std::binomial_distribution<std::uint64_t>(left, q)(rng);
        }
        if (k > 0) out.counts[bitstring(i, bits)] = k;
        left -= k;
    }
    return out;
}

inline ShotResult sample_shots(const std::vector<double>& probabilities, std::uint64_t shots, std::uint64_t seed) {
    return sample_shots(probabilities, {}, shots, seed);
}

/// Sums counts; the merged seed is the first operand's.
inline ShotResult merge(ShotResult a, const ShotResult& b) {
    for (const auto& [k, v] : b.counts) a.counts[k] += v;
    a.shots += b.shots;
    return a;
}

}  // namespace qcflate
