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
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qcflate {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) {
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

/// True when `a` is a multiple of 2*pi within `tol`.
inline bool angle_is_zero(double a, double tol = 1e-12) {
    return std::abs(wrap_angle(a)) <= tol;
}

/// Kronecker product a (x) b; `a` acts on the more significant index bits.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
    if (u.rows() != u.cols()) return false;
    return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

/// |tr(a^dagger b)| / dim, which is 1 exactly when a and b agree up to global phase.
inline double phase_insensitive_overlap(const Matrix& a, const Matrix& b) {
    return std::abs((a.adjoint() * b).trace()) / static_cast<double>(a.rows());
}

inline bool equal_up_to_phase(const Matrix& a, const Matrix& b, double tol = 1e-10) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    // Align phases on the largest entry of `a`, then compare entrywise.
    Eigen::Index r = 0, c = 0;
    a.cwiseAbs().maxCoeff(&r, &c);
    if (std::abs(b(r, c)) < 1e-14) return false;
    const cplx phase = a(r, c) / b(r, c);
    if (std::abs(std::abs(phase) - 1.0) > tol) return false;
    return (a - phase * b).cwiseAbs().maxCoeff() <= tol;
}

/// Applies a 2^k x 2^k matrix to the listed qubits of a state over `num_qubits`
/// qubits. Operand j of the matrix corresponds to bit j of its local index,
/// and `qubits[j]` is the global bit it acts on (qubit 0 = least significant).
inline void apply_matrix(std::span<cplx> amps, std::span<const int> qubits, const Matrix& m) {
    const int k = static_cast<int>(qubits.size());
    const std::size_t dim = std::size_t{1} << k;
    std::size_t mask = 0;
    for (int q : qubits) mask |= std::size_t{1} << q;

    std::vector<std::size_t> offsets(dim, 0);
    for (std::size_t local = 0; local < dim; ++local)
        for (int j = 0; j < k; ++j)
            if ((local >> j) & 1U) offsets[local] |= std::size_t{1} << qubits[j];

    std::vector<cplx> in(dim), out(dim);
    for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & mask) continue;
        for (std::size_t l = 0; l < dim; ++l) in[l] = amps[base | offsets[l]];
        for (std::size_t r = 0; r < dim; ++r) {
            cplx acc = 0.0;
            for (std::size_t l = 0; l < dim; ++l) acc += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(l)) * in[l];
            out[r] = acc;
        }
        for (std::size_t l = 0; l < dim; ++l) amps[base | offsets[l]] = out[l];
    }
}

}  // namespace qcflate
