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

#include <vector>

#include <Eigen/Eigenvalues>

#include "qcflate/circuit.hpp"
#include "qcflate/error.hpp"
#include "qcflate/transpiler/euler.hpp"

namespace qcflate {

/// True when u is, up to phase, a reflection: eigenvalues {e^{ia}, -e^{ia}}.
inline bool is_reflection(const Matrix2& u, double tol = 1e-7) {
    return std::abs((u / std::sqrt(u.determinant())).trace()) < tol;
}

/// Controlled-u on (control 0, target 1) over {U3, Rz, CNOT}.
///
/// A reflection e^{ia} W X W^dagger needs one CNOT: conjugate it by W on the
/// target and restore the phase with Rz(a) on the control. Anything else uses
/// the A-B-C construction with two CNOTs.
inline Circuit decompose_controlled_u(const Matrix2& u) {
    if (!is_unitary(u, 1e-9)) throw InputError("decompose_controlled_u: matrix is not unitary");
    Circuit out(2);
    auto emit = [&out](const Matrix2& m, int q) {
        if (!equal_up_to_phase(m, Matrix2::Identity(), 1e-12)) out.append(u3_from_matrix(m), {q});
    };
    if (is_reflection(u)) {
        Eigen::ComplexEigenSolver<Matrix2> es(u);
        const Eigen::Vector2cd ev = es.eigenvalues();
        Matrix2 v = es.eigenvectors();
        for (int k = 0; k < 2; ++k) v.col(k).normalize();
        // Column 0 takes the eigenvalue e^{ia}; column 1 gets -e^{ia}.
        const Matrix2 w = v * h_matrix();
        emit(w.adjoint(), 1);
        out.cx(0, 1);
        emit(w, 1);
        const double a = std::arg(ev(0));
        if (!angle_is_zero(a, 1e-12)) out.rz(0, a);
        return out;
    }
    // u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta); U3(t, p, l) = e^{i(p+l)/2} Rz(p) Ry(t) Rz(l).
    const auto z = zyz_angles(u);
    const double alpha = z.global_phase + (z.phi + z.lambda) / 2.0;
    const double beta = z.phi, gamma = z.theta, delta = z.lambda;
    auto ry = [](double t) { return u3_matrix(t, 0.0, 0.0); };
    const Matrix2 a = rz_matrix(beta) * ry(gamma / 2.0);
    const Matrix2 b = ry(-gamma / 2.0) * rz_matrix(-(delta + beta) / 2.0);
    const Matrix2 c = rz_matrix((delta - beta) / 2.0);
    emit(c, 1);
    out.cx(0, 1);
    emit(b, 1);
    out.cx(0, 1);
    emit(a, 1);
    if (!angle_is_zero(alpha, 1e-12)) out.rz(0, alpha);
    return out;
}

/// CCX with controls 0, 1 and target 2 as six CNOTs plus H and T-type Rz
/// gates (T = Rz(pi/4) up to phase).
inline Circuit decompose_toffoli() {
    constexpr int c1 = 0, c2 = 1, t = 2;
    constexpr double q = kPi / 4;
    Circuit out(3);
    out.h(t).rz(t, q);
    out.cx(c1, t).rz(t, -q);
    out.cx(c2, t).rz(t, q);
    out.cx(c1, t).rz(t, -q);
    out.cx(c2, t).h(t);
    out.rz(c1, q).rz(c2, q);
    out.cx(c1, c2).rz(c2, -q).cx(c1, c2);
    return out;
}

/// Rewrites every unitary into {Rz, SX, CNOT}; Measure, Reset and Barrier pass
/// through. Single-qubit gates are lowered one by one (merging is a separate
/// pass) and SWAP becomes three CNOTs.
inline Circuit lower_to_basis(const Circuit& c) {
    Circuit out(c.num_qubits(), c.num_clbits());
    auto lower_1q = [&out](const Matrix2& m, int q) {
        for (const auto& g : decompose_1q_to_basis(m)) out.append(g, {q});
    };
    auto remap = [&](const Circuit& sub, const std::vector<int>& qubits) {
        for (const auto& inst : sub) {
            std::vector<int> qs;
            for (int l : inst.qubits) qs.push_back(qubits[static_cast<std::size_t>(l)]);
            if (inst.gate.type == GateType::CNOT || inst.gate.type == GateType::Rz || inst.gate.type == GateType::SX)
                out.append(inst.gate, qs);
            else
                lower_1q(Matrix2(gate_matrix(inst.gate)), qs[0]);
        }
    };
    for (const auto& inst : c) {
        const auto& qs = inst.qubits;
        switch (inst.gate.type) {
            case GateType::Rz:
            case GateType::SX:
            case GateType::CNOT:
            case GateType::Measure:
            case GateType::Reset:
            case GateType::Barrier: out.append(inst); break;
            case GateType::X: out.sx(qs[0]).sx(qs[0]); break;
            case GateType::U3:
            case GateType::H: lower_1q(Matrix2(gate_matrix(inst.gate)), qs[0]); break;
            case GateType::SWAP: out.cx(qs[0], qs[1]).cx(qs[1], qs[0]).cx(qs[0], qs[1]); break;
            case GateType::CH: remap(decompose_controlled_u(h_matrix()), qs); break;
            case GateType::CU3: {
                const auto& p = inst.gate.params;
                remap(decompose_controlled_u(u3_matrix(p[0], p[1], p[2])), qs);
                break;
            }
            case GateType::CCX: remap(decompose_toffoli(), qs); break;
        }
    }
    return out;
}

}  // namespace qcflate
