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
#include <cmath>
#include <string>
#include <vector>

#include "qcflate/error.hpp"
#include "qcflate/gate.hpp"
#include "qcflate/linalg.hpp"

namespace qcflate {

/// Completely positive map given by its Kraus operators, all of one size.
class KrausChannel {
public:
    KrausChannel() = default;
    explicit KrausChannel(std::vector<Matrix> ops) : ops_(std::move(ops)) {
        if (ops_.empty()) throw InputError("Kraus channel needs at least one operator");
        const auto d = ops_.front().rows();
        for (const auto& k : ops_)
            if (k.rows() != d || k.cols() != d) throw InputError("Kraus operators must share one square shape");
    }

    static KrausChannel identity(int num_qubits) {
        const auto d = Eigen::Index{1} << num_qubits;
        return KrausChannel({Matrix::Identity(d, d)});
    }

    [[nodiscard]] const std::vector<Matrix>& operators() const { return ops_; }
    [[nodiscard]] Eigen::Index dim() const { return ops_.empty() ? 0 : ops_.front().rows(); }
    [[nodiscard]] int num_qubits() const {
        int k = 0;
        while ((Eigen::Index{1} << k) < dim()) ++k;
        return k;
    }

    /// max |sum K^dagger K - I|.
    [[nodiscard]] double trace_preservation_error() const {
        Matrix s = Matrix::Zero(dim(), dim());
        for (const auto& k : ops_) s += k.adjoint() * k;
        return (s - Matrix::Identity(dim(), dim())).cwiseAbs().maxCoeff();
    }

    /// sum_k conj(K) (x) K, acting on vec(rho) with row bits low.
    [[nodiscard]] Matrix superoperator() const {
        const auto d = dim();
        Matrix s = Matrix::Zero(d * d, d * d);
        for (const auto& k : ops_) s += kron(k.conjugate(), k);
        return s;
    }

    /// The channel `other` applied after this one.
    [[nodiscard]] KrausChannel then(const KrausChannel& other) const {
        std::vector<Matrix> out;
        for (const auto& b : other.ops_)
            for (const auto& a : ops_) {
                Matrix m = b * a;
                if (m.cwiseAbs().maxCoeff() > 0.0) out.push_back(std::move(m));
            }
        if (out.empty()) out.push_back(Matrix::Zero(dim(), dim()));
        return KrausChannel(std::move(out));
    }

    /// Applies the channel to a density matrix of matching size.
    [[nodiscard]] Matrix apply(const Matrix& rho) const {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto& k : ops_) out += k * rho * k.adjoint();
        return out;
    }

private:
    std::vector<Matrix> ops_;
};

/// Amplitude damping with decay probability 1 - exp(-d/T1) followed by the
/// pure dephasing needed to make coherences decay as exp(-d/T2).
/// T1 and T2 are in microseconds, the duration in nanoseconds.
inline KrausChannel thermal_relaxation_channel(double t1_us, double t2_us, double duration_ns) {
    if (!(t1_us > 0.0) || !(t2_us > 0.0)) throw ValidationError("thermal relaxation needs T1 > 0 and T2 > 0");
    if (t2_us > 2.0 * t1_us * (1.0 + 1e-12)) throw ValidationError("thermal relaxation needs T2 <= 2*T1");
    if (!(duration_ns >= 0.0) || !std::isfinite(duration_ns))
        throw ValidationError("thermal relaxation needs a finite, non-negative duration");
    const double t = duration_ns * 1e-3;
    const double gamma = 1.0 - std::exp(-t / t1_us);
    // Coherence factor left after amplitude damping is exp(-t/(2 T1)).
    const double extra = std::exp(-t * (1.0 / t2_us - 0.5 / t1_us));
    const double lambda = std::max(0.0, 1.0 - extra * extra);

    Matrix a0 = Matrix::Zero(2, 2), a1 = Matrix::Zero(2, 2);
    a0(0, 0) = 1.0;
    a0(1, 1) = std::sqrt(1.0 - gamma);
    a1(0, 1) = std::sqrt(gamma);
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p0(1, 1) = std::sqrt(1.0 - lambda);
    p1(1, 1) = std::sqrt(lambda);
    return KrausChannel({a0, a1}).then(KrausChannel({p0, p1}));
}

/// rho -> (1-p) rho + p I/2^k, written as a Pauli mixture.
inline KrausChannel depolarizing_channel(double p, int k) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("depolarizing probability must lie in [0, 1]");
    if (k != 1 && k != 2) throw InputError("depolarizing channel supports 1 or 2 qubits");
    const std::array<Matrix2, 4> paulis = [] {
        Matrix2 i = Matrix2::Identity(), x, y, z;
        x << 0, 1, 1, 0;
        y << 0, -kI, kI, 0;
        z << 1, 0, 0, -1;
        return std::array<Matrix2, 4>{i, x, y, z};
    }();
    const int terms = k == 1 ? 4 : 16;
    const double w = p / terms;
    std::vector<Matrix> ops;
    for (int t = 0; t < terms; ++t) {
        Matrix m = k == 1 ? Matrix(paulis[static_cast<std::size_t>(t)])
                          : kron(paulis[static_cast<std::size_t>(t / 4)], paulis[static_cast<std::size_t>(t % 4)]);
        const double weight = t == 0 ? 1.0 - p + w : w;
        if (weight > 0.0) ops.push_back(std::sqrt(weight) * m);
    }
    return KrausChannel(std::move(ops));
}

/// Reset to |0>; with probability `error` the qubit ends in |1> instead.
inline KrausChannel reset_channel(double error = 0.0) {
    if (!(error >= 0.0 && error <= 1.0)) throw InputError("reset error must lie in [0, 1]");
    std::vector<Matrix> ops;
    for (int to = 0; to < 2; ++to) {
        const double w = to == 0 ? 1.0 - error : error;
        if (w <= 0.0) continue;
        for (int from = 0; from < 2; ++from) {
            Matrix m = Matrix::Zero(2, 2);
            m(to, from) = std::sqrt(w);
            ops.push_back(std::move(m));
        }
    }
    return KrausChannel(std::move(ops));
}

/// Non-selective computational-basis measurement.
inline KrausChannel dephasing_measurement_channel() {
    Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    return KrausChannel({p0, p1});
}

}  // namespace qcflate
