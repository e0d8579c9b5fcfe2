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

#include <cmath>
#include <vector>

#include "qcflate/circuit.hpp"
#include "qcflate/error.hpp"

namespace qcflate {

struct ZyzAngles {
    double theta = 0.0;
    double phi = 0.0;
    double lambda = 0.0;
    double global_phase = 0.0;
};

/// U = exp(i*global_phase) * U3(theta, phi, lambda) with theta in [0, pi].
inline ZyzAngles zyz_angles(const Matrix2& u) {
    if (!is_unitary(u, 1e-9)) throw InputError("zyz_angles: matrix is not unitary");
    ZyzAngles a;
    const double c = std::abs(u(0, 0)), s = std::abs(u(1, 0));
    a.theta = 2.0 * std::atan2(s, c);
    if (s < 1e-10) {
        // Diagonal: only phi + lambda matters; put it all in lambda.
        a.global_phase = std::arg(u(0, 0));
        a.lambda = wrap_angle(std::arg(u(1, 1)) - a.global_phase);
    } else if (c < 1e-10) {
        a.global_phase = std::arg(-u(0, 1));
        a.phi = wrap_angle(std::arg(u(1, 0)) - a.global_phase);
    } else {
        a.global_phase = std::arg(u(0, 0));
        a.phi = wrap_angle(std::arg(u(1, 0)) - a.global_phase);
        a.lambda = wrap_angle(std::arg(-u(0, 1)) - a.global_phase);
    }
    return a;
}

inline Gate u3_from_matrix(const Matrix2& u) {
    const auto a = zyz_angles(u);
    return Gate::u3(a.theta, a.phi, a.lambda);
}

namespace detail {
inline constexpr double kElideTol = 1e-10;
inline void push_rz(std::vector<Gate>& out, double angle) {
    const double a = wrap_angle(angle);
    if (std::abs(a) > kElideTol) out.push_back(Gate::rz(a));
}
}  // namespace detail

/// U3 as Rz/SX gates (circuit order), equal up to global phase. The general
/// form is Rz(lambda) SX Rz(theta+pi) SX Rz(phi+pi); theta = 0 collapses to one
/// Rz and theta = pi/2 to Rz SX Rz. Rz gates whose angle vanishes are dropped.
inline std::vector<Gate> decompose_u3_to_basis(double theta, double phi, double lambda) {
    const auto a = zyz_angles(u3_matrix(theta, phi, lambda));
    std::vector<Gate> out;
    if (std::abs(a.theta) < detail::kElideTol) {
        detail::push_rz(out, a.phi + a.lambda);
    } else if (std::abs(a.theta - kPi / 2) < detail::kElideTol) {
        detail::push_rz(out, a.lambda - kPi / 2);
        out.push_back(Gate::sx());
        detail::push_rz(out, a.phi + kPi / 2);
    } else {
        detail::push_rz(out, a.lambda);
        out.push_back(Gate::sx());
        detail::push_rz(out, a.theta + kPi);
        out.push_back(Gate::sx());
        detail::push_rz(out, a.phi + kPi);
    }
    return out;
}

inline std::vector<Gate> decompose_1q_to_basis(const Matrix2& u) {
    const auto a = zyz_angles(u);
    return decompose_u3_to_basis(a.theta, a.phi, a.lambda);
}

/// Product of a list of single-qubit gates in circuit order.
inline Matrix2 product_1q(const std::vector<Gate>& gates) {
    Matrix2 m = Matrix2::Identity();
    for (const auto& g : gates) m = Matrix2(gate_matrix(g)) * m;
    return m;
}

}  // namespace qcflate
