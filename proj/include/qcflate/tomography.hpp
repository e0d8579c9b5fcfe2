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

// Two-qubit state tomography by linear inversion.
//
// A setting label such as "XZ" names the measured Pauli basis of tomography
// qubit 0 and then qubit 1. Outcome bitstrings follow the simulator: clbit 0
// (tomography qubit 0) is the rightmost character.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "qcflate/circuit.hpp"
#include "qcflate/error.hpp"
#include "qcflate/state.hpp"

namespace qcflate {

struct TomographySetting {
    char basis0 = 'Z';
    char basis1 = 'Z';

    [[nodiscard]] std::string label() const { return {basis0, basis1}; }

    /// Rotation taking the basis eigenstates to |0>, |1>.
    static std::vector<Gate> rotation(char basis) {
        if (basis == 'X') return {Gate::h()};
        if (basis == 'Y') return {Gate::rz(-kPi / 2), Gate::h()};  // S^dagger then H
        if (basis == 'Z') return {};
        throw InputError(std::string("unknown tomography basis '") + basis + "'");
    }
};

inline const std::vector<TomographySetting>& tomography_settings() {
    static const std::vector<TomographySetting> s = [] {
        std::vector<TomographySetting> out;
        for (char a : {'X', 'Y', 'Z'})
            for (char b : {'X', 'Y', 'Z'}) out.push_back({a, b});
        return out;
    }();
    return s;
}

/// Appends the setting's rotations on (q0, q1) and measures them into clbits 0 and 1.
inline void append_setting(Circuit& c, const TomographySetting& s, int q0, int q1) {
    for (const auto& g : TomographySetting::rotation(s.basis0)) c.append(g, {q0});
    for (const auto& g : TomographySetting::rotation(s.basis1)) c.append(g, {q1});
    c.measure(q0, 0).measure(q1, 1);
}

using SettingCounts = std::map<std::string, std::map<std::string, std::uint64_t>>;
/// Outcome probabilities per setting, indexed b0 + 2*b1.
using SettingProbabilities = std::map<std::string, std::array<double, 4>>;

/// <P (x) Q> for P, Q in {I, X, Y, Z} (index 0..3), P on qubit 0. e[0][0] = 1.
struct PauliExpectations {
    std::array<std::array<double, 4>, 4> e{};

    [[nodiscard]] double get(char p, char q) const { return e[index(p)][index(q)]; }

    static std::size_t index(char p) {
        switch (p) {
            case 'I': return 0;
            case 'X': return 1;
            case 'Y': return 2;
            case 'Z': return 3;
            default: throw InputError(std::string("unknown Pauli '") + p + "'");
        }
    }
};

inline SettingProbabilities frequencies(const SettingCounts& counts) {
    SettingProbabilities out;
    for (const auto& [label, hist] : counts) {
        std::uint64_t total = 0;
        std::array<double, 4> p{};
        for (const auto& [bits, n] : hist) {
            if (bits.size() != 2 || bits.find_first_not_of("01") != std::string::npos)
                throw InputError("setting " + label + ": outcome '" + bits + "' is not a 2-bit string");
            const std::size_t idx = static_cast<std::size_t>(bits[1] - '0') + 2 * static_cast<std::size_t>(bits[0] - '0');
            p[idx] += static_cast<double>(n);
            total += n;
        }
        if (total == 0) throw InputError("setting " + label + " has zero shots");
        for (auto& v : p) v /= static_cast<double>(total);
        out[label] = p;
    }
    return out;
}

/// Parity estimates; single-qubit terms are averaged over the three
/// settings that measure that qubit in the right basis.
inline PauliExpectations expectation_values(const SettingProbabilities& probs) {
    PauliExpectations out;
    out.e[0][0] = 1.0;
    std::array<std::array<int, 4>, 4> n{};
    for (const auto& s : tomography_settings()) {
        const auto it = probs.find(s.label());
        if (it == probs.end()) throw InputError("missing tomography setting " + s.label());
        const auto& p = it->second;
        const std::size_t a = PauliExpectations::index(s.basis0), b = PauliExpectations::index(s.basis1);
        out.e[a][b] = p[0] - p[1] - p[2] + p[3];
        out.e[a][0] += p[0] - p[1] + p[2] - p[3];
        out.e[0][b] += p[0] + p[1] - p[2] - p[3];
        ++n[a][0];
        ++n[0][b];
    }
    for (std::size_t k = 1; k < 4; ++k) {
        out.e[k][0] /= n[k][0];
        out.e[0][k] /= n[0][k];
    }
    return out;
}

inline PauliExpectations expectation_values(const SettingCounts& counts) { return expectation_values(frequencies(counts)); }

/// rho = (1/4) sum e_PQ P (x) Q, with qubit 1 on the high index bit.
inline Matrix linear_inversion(const PauliExpectations& e) {
    std::array<Matrix2, 4> s;
    s[0] = Matrix2::Identity();
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -kI, kI, 0;
    s[3] << 1, 0, 0, -1;
    Matrix rho = Matrix::Zero(4, 4);
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = 0; q < 4; ++q)
            if (e.e[p][q] != 0.0) rho += e.e[p][q] * kron(s[q], s[p]);
    return rho / 4.0;
}

/// Closest density matrix by eigenvalue clipping: negative eigenvalues are
/// zeroed from the bottom up and their deficit is spread evenly over the
/// rest until what remains is non-negative.
inline Matrix project_to_physical(const Matrix& rho) {
    const Matrix h = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Eigen::VectorXd mu = es.eigenvalues();  // ascending
    const Eigen::Index d = mu.size();
    const double trace = mu.sum();
    mu /= trace;
    double acc = 0.0;
    Eigen::Index i = 0;
    while (i < d && mu(i) + acc / static_cast<double>(d - i) < 0.0) {
        acc += mu(i);
        mu(i) = 0.0;
        ++i;
    }
    for (Eigen::Index j = i; j < d; ++j) mu(j) += acc / static_cast<double>(d - i);
    if (i == 0) return h / trace;  // already physical
    return es.eigenvectors() * mu.asDiagonal() * es.eigenvectors().adjoint();
}

/// <target| rho |target> after physical projection.
inline double fidelity_report(const Matrix& rho, const StateVector& target) {
    if (rho.rows() != static_cast<Eigen::Index>(target.dim()) || rho.cols() != rho.rows())
        throw InputError("fidelity_report: dimension mismatch");
    const Matrix p = project_to_physical(rho);
    const Vector v = target.vector();
    return clamp_unit((v.adjoint() * p * v)(0, 0).real());
}

/// Counts file: {"XZ": {"00": 10, "01": 3, ...}, ...}.
inline SettingCounts setting_counts_from_json(const nlohmann::json& j) {
    SettingCounts out;
    try {
        for (const auto& [label, hist] : j.items())
            for (const auto& [bits, n] : hist.items()) out[label][bits] = n.get<std::uint64_t>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("counts file: ") + e.what());
    }
    return out;
}

inline nlohmann::json to_json(const SettingCounts& c) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [label, hist] : c)
        for (const auto& [bits, n] : hist) j[label][bits] = n;
    return j;
}

}  // namespace qcflate
