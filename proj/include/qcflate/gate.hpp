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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "qcflate/error.hpp"
#include "qcflate/linalg.hpp"

namespace qcflate {

enum class GateType : std::uint8_t {
    U3,
    Rz,
    SX,
    X,
    H,
    CNOT,
    CH,
    CCX,
    CU3,
    SWAP,
    Measure,
    Reset,
    Barrier,
};

inline constexpr std::array kAllGateTypes{
    GateType::U3,  GateType::Rz,  GateType::SX,   GateType::X,       GateType::H,
    GateType::CNOT, GateType::CH, GateType::CCX,  GateType::CU3,     GateType::SWAP,
    GateType::Measure, GateType::Reset, GateType::Barrier,
};

/// Display name used in gate-count tables and reports.
inline std::string_view gate_name(GateType t) {
    switch (t) {
        case GateType::U3: return "U3";
        case GateType::Rz: return "Rz";
        case GateType::SX: return "SX";
        case GateType::X: return "X";
        case GateType::H: return "H";
        case GateType::CNOT: return "CNOT";
        case GateType::CH: return "CH";
        case GateType::CCX: return "CCX";
        case GateType::CU3: return "CU3";
        case GateType::SWAP: return "SWAP";
        case GateType::Measure: return "Measure";
        case GateType::Reset: return "Reset";
        case GateType::Barrier: return "Barrier";
    }
    return "?";
}

inline std::optional<GateType> gate_type_from_name(std::string_view name) {
    for (GateType t : kAllGateTypes)
        if (gate_name(t) == name) return t;
    return std::nullopt;
}

/// Number of qubit operands; 0 means variadic (barrier).
inline int gate_arity(GateType t) {
    switch (t) {
        case GateType::CNOT:
        case GateType::CH:
        case GateType::CU3:
        case GateType::SWAP: return 2;
        case GateType::CCX: return 3;
        case GateType::Barrier: return 0;
        default: return 1;
    }
}

inline int gate_param_count(GateType t) {
    switch (t) {
        case GateType::U3:
        case GateType::CU3: return 3;
        case GateType::Rz: return 1;
        default: return 0;
    }
}

inline bool gate_is_unitary(GateType t) {
    return t != GateType::Measure && t != GateType::Reset && t != GateType::Barrier;
}

/// One operation kind with its real parameters. U3/CU3 use (theta, phi, lambda);
/// Rz uses params[0]; Measure carries the classical bit it writes.
struct Gate {
    GateType type = GateType::Barrier;
    std::array<double, 3> params{0.0, 0.0, 0.0};
    int clbit = -1;

    static Gate u3(double theta, double phi, double lambda) { return {GateType::U3, {theta, phi, lambda}}; }
    static Gate rz(double theta) { return {GateType::Rz, {theta, 0.0, 0.0}}; }
    static Gate sx() { return {GateType::SX}; }
    static Gate x() { return {GateType::X}; }
    static Gate h() { return {GateType::H}; }
    static Gate cnot() { return {GateType::CNOT}; }
    static Gate ch() { return {GateType::CH}; }
    static Gate ccx() { return {GateType::CCX}; }
    static Gate cu3(double theta, double phi, double lambda) { return {GateType::CU3, {theta, phi, lambda}}; }
    static Gate swap() { return {GateType::SWAP}; }
    static Gate measure(int clbit) { return {GateType::Measure, {0.0, 0.0, 0.0}, clbit}; }
    static Gate reset() { return {GateType::Reset}; }
    static Gate barrier() { return {GateType::Barrier}; }

    [[nodiscard]] int arity() const { return gate_arity(type); }
    [[nodiscard]] bool is_unitary() const { return gate_is_unitary(type); }

    /// Same gate with angles wrapped into (-pi, pi]. CU3 keeps theta modulo
    /// 4*pi instead: a 2*pi shift negates U3, which is a relative phase once
    /// the gate is controlled.
    [[nodiscard]] Gate canonical() const {
        Gate g = *this;
        for (int i = 0; i < gate_param_count(type); ++i) {
            auto& a = g.params[static_cast<std::size_t>(i)];
            a = (type == GateType::CU3 && i == 0) ? 2.0 * wrap_angle(a / 2.0) : wrap_angle(a);
        }
        return g;
    }

    friend bool operator==(const Gate&, const Gate&) = default;
};

inline Matrix2 u3_matrix(double theta, double phi, double lambda) {
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    Matrix2 m;
    m << c, -std::exp(kI * lambda) * s,
         std::exp(kI * phi) * s, std::exp(kI * (phi + lambda)) * c;
    return m;
}

inline Matrix2 rz_matrix(double theta) {
    Matrix2 m;
    m << std::exp(-kI * theta / 2.0), 0.0, 0.0, std::exp(kI * theta / 2.0);
    return m;
}

inline Matrix2 sx_matrix() {
    Matrix2 m;
    m << cplx(0.5, 0.5), cplx(0.5, -0.5), cplx(0.5, -0.5), cplx(0.5, 0.5);
    return m;
}

inline Matrix2 x_matrix() {
    Matrix2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Matrix2 h_matrix() {
    Matrix2 m;
    const double r = 1.0 / std::sqrt(2.0);
    m << r, r, r, -r;
    return m;
}

/// Controlled-u with operand 0 the control (low bit) and operand 1 the target.
inline Matrix controlled(const Matrix2& u) {
    Matrix m = Matrix::Identity(4, 4);
    // Local index = control + 2*target; control set -> indices 1 and 3.
    m(1, 1) = u(0, 0);
    m(1, 3) = u(0, 1);
    m(3, 1) = u(1, 0);
    m(3, 3) = u(1, 1);
    return m;
}

/// Exact matrix of a unitary gate over its operands (operand j = local bit j).
inline Matrix gate_matrix(const Gate& g) {
    const auto& p = g.params;
    switch (g.type) {
        case GateType::U3: return u3_matrix(p[0], p[1], p[2]);
        case GateType::Rz: return rz_matrix(p[0]);
        case GateType::SX: return sx_matrix();
        case GateType::X: return x_matrix();
        case GateType::H: return h_matrix();
        case GateType::CNOT: return controlled(x_matrix());
        case GateType::CH: return controlled(h_matrix());
        case GateType::CU3: return controlled(u3_matrix(p[0], p[1], p[2]));
        case GateType::SWAP: {
            Matrix m = Matrix::Zero(4, 4);
            m(0, 0) = m(3, 3) = 1.0;
            m(1, 2) = m(2, 1) = 1.0;
            return m;
        }
        case GateType::CCX: {
            Matrix m = Matrix::Identity(8, 8);
            // Controls are bits 0 and 1, target bit 2: swap |011> and |111>.
            m(3, 3) = m(7, 7) = 0.0;
            m(3, 7) = m(7, 3) = 1.0;
            return m;
        }
        case GateType::Measure:
        case GateType::Reset:
        case GateType::Barrier: break;
    }
    throw ValidationError(std::string("no matrix for non-unitary gate ") + std::string(gate_name(g.type)));
}

}  // namespace qcflate
