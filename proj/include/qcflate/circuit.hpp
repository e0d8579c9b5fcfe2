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
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcflate/gate.hpp"

namespace qcflate {

/// One gate applied to an ordered list of qubits, control(s) first, target last.
struct Instruction {
    Gate gate;
    std::vector<int> qubits;

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Ordered instruction list over a fixed register. Every appended instruction
/// is checked against the register, so a constructed circuit is always valid.
class Circuit {
public:
    Circuit() = default;
    explicit Circuit(int num_qubits, int num_clbits = 0) : num_qubits_(num_qubits), num_clbits_(num_clbits) {
        if (num_qubits < 0 || num_clbits < 0) throw InputError("circuit width must be non-negative");
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] int num_clbits() const { return num_clbits_; }
    [[nodiscard]] const std::vector<Instruction>& instructions() const { return ops_; }
    [[nodiscard]] std::size_t size() const { return ops_.size(); }
    [[nodiscard]] bool empty() const { return ops_.empty(); }
    [[nodiscard]] auto begin() const { return ops_.begin(); }
    [[nodiscard]] auto end() const { return ops_.end(); }
    [[nodiscard]] const Instruction& operator[](std::size_t i) const { return ops_[i]; }

    Circuit& append(Instruction inst) {
        check(inst);
        ops_.push_back(std::move(inst));
        return *this;
    }
    Circuit& append(const Gate& g, std::vector<int> qubits) { return append(Instruction{g, std::move(qubits)}); }

    /// Appends every instruction of `other`, which must not be wider.
    Circuit& extend(const Circuit& other) {
        for (const auto& inst : other) append(inst);
        return *this;
    }

    Circuit& u3(int q, double t, double p, double l) { return append(Gate::u3(t, p, l), {q}); }
    Circuit& rz(int q, double t) { return append(Gate::rz(t), {q}); }
    Circuit& sx(int q) { return append(Gate::sx(), {q}); }
    Circuit& x(int q) { return append(Gate::x(), {q}); }
    Circuit& h(int q) { return append(Gate::h(), {q}); }
    Circuit& cx(int c, int t) { return append(Gate::cnot(), {c, t}); }
    Circuit& ch(int c, int t) { return append(Gate::ch(), {c, t}); }
    Circuit& ccx(int c1, int c2, int t) { return append(Gate::ccx(), {c1, c2, t}); }
    Circuit& cu3(int c, int t, double th, double p, double l) { return append(Gate::cu3(th, p, l), {c, t}); }
    Circuit& swap(int a, int b) { return append(Gate::swap(), {a, b}); }
    Circuit& measure(int q, int c) { return append(Gate::measure(c), {q}); }
    Circuit& reset(int q) { return append(Gate::reset(), {q}); }
    Circuit& barrier(std::vector<int> qubits) { return append(Gate::barrier(), std::move(qubits)); }
    Circuit& barrier() {
        std::vector<int> all(static_cast<std::size_t>(num_qubits_));
        for (int q = 0; q < num_qubits_; ++q) all[static_cast<std::size_t>(q)] = q;
        return barrier(std::move(all));
    }

    [[nodiscard]] bool is_unitary() const {
        return std::all_of(ops_.begin(), ops_.end(), [](const Instruction& i) {
            return i.gate.is_unitary() || i.gate.type == GateType::Barrier;
        });
    }

    friend bool operator==(const Circuit&, const Circuit&) = default;

private:
    void check(const Instruction& inst) const {
        const int arity = inst.gate.arity();
        const auto n = static_cast<int>(inst.qubits.size());
        if (arity != 0 && n != arity)
            throw InputError(std::string(gate_name(inst.gate.type)) + " expects " + std::to_string(arity) +
                             " qubit(s), got " + std::to_string(n));
        if (arity == 0 && n == 0) throw InputError("barrier needs at least one qubit");
        for (int i = 0; i < n; ++i) {
            const int q = inst.qubits[static_cast<std::size_t>(i)];
            if (q < 0 || q >= num_qubits_)
                throw InputError("qubit index " + std::to_string(q) + " outside register of width " +
                                 std::to_string(num_qubits_));
            for (int j = 0; j < i; ++j)
                if (inst.qubits[static_cast<std::size_t>(j)] == q)
                    throw InputError("repeated qubit operand " + std::to_string(q));
        }
        for (double p : inst.gate.params)
            if (!std::isfinite(p)) throw InputError("gate angle is not finite");
        if (inst.gate.type == GateType::Measure && (inst.gate.clbit < 0 || inst.gate.clbit >= num_clbits_))
            throw InputError("classical bit " + std::to_string(inst.gate.clbit) + " outside register of width " +
                             std::to_string(num_clbits_));
    }

    int num_qubits_ = 0;
    int num_clbits_ = 0;
    std::vector<Instruction> ops_;
};

inline constexpr int kMaxUnitaryQubits = 12;

/// Full 2^n x 2^n unitary, qubit 0 the least-significant index bit.
inline Matrix circuit_unitary(const Circuit& c) {
    if (c.num_qubits() > kMaxUnitaryQubits)
        throw InputError("circuit_unitary supports at most " + std::to_string(kMaxUnitaryQubits) + " qubits");
    const Eigen::Index dim = Eigen::Index{1} << c.num_qubits();
    Matrix u = Matrix::Identity(dim, dim);
    std::span<cplx> flat(u.data(), static_cast<std::size_t>(dim * dim));
    for (const auto& inst : c) {
        if (inst.gate.type == GateType::Barrier) continue;
        if (!inst.gate.is_unitary())
            throw ValidationError("circuit_unitary: non-unitary instruction " + std::string(gate_name(inst.gate.type)));
        // Column-major storage puts the row index in the low n bits.
        apply_matrix(flat, inst.qubits, gate_matrix(inst.gate));
    }
    return u;
}

/// Inverse of a single unitary gate, expressed as instructions on the same qubits.
inline std::vector<Instruction> inverse_instructions(const Instruction& inst) {
    const auto& p = inst.gate.params;
    const auto& q = inst.qubits;
    switch (inst.gate.type) {
        case GateType::U3: return {{Gate::u3(p[0], kPi - p[2], kPi - p[1]).canonical(), q}};
        // U3(t, pi-l, pi-p) is the exact inverse, so it is safe under a control.
        case GateType::CU3: return {{Gate::cu3(p[0], kPi - p[2], kPi - p[1]).canonical(), q}};
        case GateType::Rz: return {{Gate::rz(-p[0]).canonical(), q}};
        case GateType::SX: return {{Gate::rz(kPi), q}, {Gate::sx(), q}, {Gate::rz(kPi), q}};
        case GateType::X:
        case GateType::H:
        case GateType::CNOT:
        case GateType::CH:
        case GateType::CCX:
        case GateType::SWAP:
        case GateType::Barrier: return {inst};
        case GateType::Measure:
        case GateType::Reset: break;
    }
    throw ValidationError("adjoint: non-unitary instruction " + std::string(gate_name(inst.gate.type)));
}

/// Reversed circuit with every gate inverted; barriers are kept in mirrored position.
inline Circuit adjoint(const Circuit& c) {
    Circuit out(c.num_qubits(), c.num_clbits());
    for (auto it = c.instructions().rbegin(); it != c.instructions().rend(); ++it)
        for (auto& inst : inverse_instructions(*it)) out.append(std::move(inst));
    return out;
}

/// Longest dependency chain. Barriers align their qubits but take no step;
/// measure and reset count as one step.
inline int depth(const Circuit& c) {
    std::vector<int> level(static_cast<std::size_t>(c.num_qubits()), 0);
    int best = 0;
    for (const auto& inst : c) {
        int m = 0;
        for (int q : inst.qubits) m = std::max(m, level[static_cast<std::size_t>(q)]);
        if (inst.gate.type != GateType::Barrier) ++m;
        for (int q : inst.qubits) level[static_cast<std::size_t>(q)] = m;
        best = std::max(best, m);
    }
    return best;
}

using GateCounts = std::map<std::string, int>;

/// Tally per gate name; barriers are not counted.
inline GateCounts gate_counts(const Circuit& c) {
    GateCounts counts;
    for (const auto& inst : c)
        if (inst.gate.type != GateType::Barrier) ++counts[std::string(gate_name(inst.gate.type))];
    return counts;
}

inline int count_of(const GateCounts& counts, GateType t) {
    auto it = counts.find(std::string(gate_name(t)));
    return it == counts.end() ? 0 : it->second;
}

/// Number of two-qubit (and wider) unitary instructions.
inline int multi_qubit_count(const Circuit& c) {
    return static_cast<int>(std::count_if(c.begin(), c.end(), [](const Instruction& i) {
        return i.gate.is_unitary() && i.qubits.size() >= 2;
    }));
}

}  // namespace qcflate
