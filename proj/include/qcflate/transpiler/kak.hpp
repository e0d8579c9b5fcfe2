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

// Two-qubit synthesis through the canonical (Cartan) decomposition
//
//   U = e^{i g} (K1_1 (x) K1_0) exp(i(a XX + b YY + c ZZ)) (K2_1 (x) K2_0)
//
// computed in the magic basis, where local gates become real orthogonal and
// the entangling core becomes diagonal.

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcflate/circuit.hpp"
#include "qcflate/error.hpp"
#include "qcflate/random.hpp"
#include "qcflate/transpiler/euler.hpp"

namespace qcflate {

namespace kak_detail {

inline const Matrix2& pauli(int p) {
    static const std::array<Matrix2, 4> ps = [] {
        Matrix2 i = Matrix2::Identity(), x, y, z;
        x << 0, 1, 1, 0;
        y << 0, -kI, kI, 0;
        z << 1, 0, 0, -1;
        return std::array<Matrix2, 4>{i, x, y, z};
    }();
    return ps[static_cast<std::size_t>(p)];
}

inline const Matrix4& magic_basis() {
    static const Matrix4 b = [] {
        Matrix4 m;
        const double r = 1.0 / std::sqrt(2.0);
        m << r, kI * r, 0, 0,
             0, 0, kI * r, r,
             0, 0, kI * r, -r,
             r, -kI * r, 0, 0;
        return m;
    }();
    return b;
}

/// Diagonal of B^dagger (P (x) P) B for P = X, Y, Z: every entry is +-1.
inline const std::array<Eigen::Vector4d, 3>& magic_signs() {
    static const std::array<Eigen::Vector4d, 3> s = [] {
        std::array<Eigen::Vector4d, 3> out;
        const Matrix4& b = magic_basis();
        for (int p = 1; p <= 3; ++p) {
            const Matrix4 d = b.adjoint() * Matrix4(kron(pauli(p), pauli(p))) * b;
            for (int k = 0; k < 4; ++k) out[static_cast<std::size_t>(p - 1)](k) = d(k, k).real();
        }
        return out;
    }();
    return s;
}

/// Splits K = A1 (x) A0 (A1 on the high bit) into unitary factors.
inline std::pair<Matrix2, Matrix2> kron_factor(const Matrix4& k) {
    Eigen::Index r = 0, c = 0;
    k.cwiseAbs().maxCoeff(&r, &c);
    const Eigen::Index r1 = r / 2, r0 = r % 2, c1 = c / 2, c0 = c % 2;
    Matrix2 a0 = k.block<2, 2>(2 * r1, 2 * c1);
    a0 /= std::sqrt(a0.determinant());
    Matrix2 a1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a1(i, j) = k(2 * i + r0, 2 * j + c0) / a0(r0, c0);
    return {a1, a0};
}

inline Matrix2 rx(double t) {
    Matrix2 m;
    m << std::cos(t / 2), -kI * std::sin(t / 2), -kI * std::sin(t / 2), std::cos(t / 2);
    return m;
}

inline Matrix2 ry(double t) {
    Matrix2 m;
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}

inline Matrix2 s_gate() {
    Matrix2 m = Matrix2::Identity();
    m(1, 1) = kI;
    return m;
}

/// Time-ordered two-qubit program: single-qubit matrices and CNOTs.
struct Op {
    bool is_cnot = false;
    int q = 0;  // 1q target, or CNOT control
    int t = 0;  // CNOT target
    Matrix2 m = Matrix2::Identity();
};

inline Op one(int q, const Matrix2& m) { return {false, q, 0, m}; }
inline Op cx(int c, int t) { return {true, c, t, Matrix2::Identity()}; }

/// Wraps `core` as (W (x) W) core (W (x) W)^dagger.
inline std::vector<Op> conjugated(const Matrix2& w, const std::vector<Op>& core) {
    std::vector<Op> out{one(0, w.adjoint()), one(1, w.adjoint())};
    out.insert(out.end(), core.begin(), core.end());
    out.push_back(one(0, w));
    out.push_back(one(1, w));
    return out;
}

inline Matrix2 to_x(int p) {  // W with W X W^dagger = +-P
    if (p == 1) return Matrix2::Identity();
    if (p == 2) return s_gate();
    return h_matrix();
}

/// exp(i pi/4 P0 P1).
inline std::vector<Op> core_one(int p) {
    // exp(i pi/4 Z0 X1) ~ exp(i pi/4 Z0) exp(i pi/4 X1) CX(0->1); H on q0 turns Z0 into X0.
    const std::vector<Op> zx{cx(0, 1), one(0, rz_matrix(-kPi / 2)), one(1, rx(-kPi / 2))};
    std::vector<Op> xx{one(0, h_matrix())};
    xx.insert(xx.end(), zx.begin(), zx.end());
    xx.push_back(one(0, h_matrix()));
    return conjugated(to_x(p), xx);
}

/// exp(i(u P0P1 + v Q0Q1)) for the two Paulis other than `zero`.
inline std::vector<Op> core_two(int zero, double u, double v) {
    // CX(0->1) exp(i u X0) exp(i v Z1) CX(0->1) = exp(i u X0X1) exp(i v Z0Z1).
    const std::vector<Op> xz{cx(0, 1), one(0, rx(-2 * u)), one(1, rz_matrix(-2 * v)), cx(0, 1)};
    if (zero == 2) return xz;                        // (X, Z)
    if (zero == 3) return conjugated(rx(kPi / 2), xz);  // (X, Y): Z -> Y, X fixed
    return conjugated(s_gate(), xz);                 // (Y, Z): X -> Y, Z fixed
}

/// exp(i(a XX + b YY + c ZZ)) with three CNOTs.
inline std::vector<Op> core_three(double a, double b, double c) {
    return {one(1, rz_matrix(-kPi / 2)),
            cx(1, 0),
            one(0, rz_matrix(kPi / 2 - 2 * c)),
            one(1, ry(2 * a - kPi / 2)),
            cx(0, 1),
            one(1, ry(kPi / 2 - 2 * b)),
            cx(1, 0),
            one(0, rz_matrix(kPi / 2))};
}

}  // namespace kak_detail

inline constexpr double kKakClassTol = 1e-7;

struct KakDecomposition {
    // U ~ (after1 (x) after0) exp(i(a XX + b YY + c ZZ)) (before1 (x) before0),
    // with a, b, c in (-pi/4, pi/4].
    Matrix2 before0 = Matrix2::Identity(), before1 = Matrix2::Identity();
    Matrix2 after0 = Matrix2::Identity(), after1 = Matrix2::Identity();
    double a = 0.0, b = 0.0, c = 0.0;

    [[nodiscard]] std::array<double, 3> coords() const { return {a, b, c}; }

    /// Minimal CNOT count for this local-equivalence class.
    [[nodiscard]] int cnot_count(double tol = kKakClassTol) const {
        int zeros = 0, quarters = 0;
        for (double x : coords()) {
            if (std::abs(x) < tol) ++zeros;
            else if (std::abs(x - kPi / 4) < tol) ++quarters;
        }
        if (zeros == 3) return 0;
        if (zeros == 2 && quarters == 1) return 1;
        if (zeros >= 1) return 2;
        return 3;
    }
};

inline KakDecomposition kak_decomposition(const Matrix4& u_in) {
    using namespace kak_detail;
    if (!is_unitary(u_in, 1e-9)) throw InputError("kak_decompose: matrix is not unitary");
    const Matrix4 u = u_in * std::pow(u_in.determinant(), -0.25);
    const Matrix4& bm = magic_basis();
    const Matrix4 um = bm.adjoint() * u * bm;
    const Matrix4 m2 = um.transpose() * um;

    // Re(M2) and Im(M2) are commuting real symmetric matrices; a generic real
    // combination of them has their joint eigenbasis.
    Eigen::Matrix4d p;
    bool found = false;
    Rng rng(0x6b616bULL);
    std::uniform_real_distribution<double> mix(-2.0, 2.0);
    for (int attempt = 0; attempt < 32 && !found; ++attempt) {
        const double x = attempt == 0 ? 0.6180339887498949 : mix(rng);
        const Eigen::Matrix4d r = m2.real() + x * m2.imag();
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(r);
        p = es.eigenvectors();
        const Matrix4 d = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();
        const double off = (d - Matrix4(d.diagonal().asDiagonal())).cwiseAbs().maxCoeff();
        found = off < 1e-10;
    }
    if (!found) throw NumericalError("kak_decompose: failed to diagonalize the magic-basis square");
    if (p.determinant() < 0) p.col(0) *= -1.0;

    const Matrix4 d2 = p.transpose().cast<cplx>() * m2 * p.cast<cplx>();
    Eigen::Vector4d theta;
    for (int k = 0; k < 4; ++k) theta(k) = std::arg(d2(k, k)) / 2.0;
    // det(K1) must be +1, which needs sum(theta) = 0 mod 2*pi.
    if (std::cos(theta.sum()) < 0) theta(0) += kPi;
    Matrix4 dhalf = Matrix4::Zero();
    for (int k = 0; k < 4; ++k) dhalf(k, k) = std::polar(1.0, theta(k));

    const Matrix4 k1m = um * p.cast<cplx>() * dhalf.conjugate();
    const Matrix4 k1 = bm * k1m * bm.adjoint();
    const Matrix4 k2 = bm * p.transpose().cast<cplx>() * bm.adjoint();

    const auto& sg = magic_signs();
    std::array<double, 3> xyz{};
    for (std::size_t i = 0; i < 3; ++i) xyz[i] = sg[i].dot(theta) / 4.0;

    KakDecomposition out;
    std::tie(out.after1, out.after0) = kron_factor(k1);
    std::tie(out.before1, out.before0) = kron_factor(k2);

    // exp(i x PP) = exp(i r PP) (i PP)^m with r in (-pi/4, pi/4]; the (PP)^m
    // factor is local and commutes with the core.
    for (int i = 0; i < 3; ++i) {
        double x = xyz[static_cast<std::size_t>(i)];
        long m = std::lround(x / (kPi / 2));
        double r = x - static_cast<double>(m) * (kPi / 2);
        if (r <= -kPi / 4 + 1e-12) {
            r += kPi / 2;
            --m;
        }
        if (m % 2 != 0) {
            out.before0 = pauli(i + 1) * out.before0;
            out.before1 = pauli(i + 1) * out.before1;
        }
        xyz[static_cast<std::size_t>(i)] = r;
    }
    out.a = xyz[0];
    out.b = xyz[1];
    out.c = xyz[2];
    return out;
}

namespace kak_detail {

inline std::vector<Op> core_ops(const KakDecomposition& k) {
    const std::array<double, 3> x = k.coords();
    switch (k.cnot_count()) {
        case 0: return {};
        case 1: {
            int p = 0;
            for (int i = 0; i < 3; ++i)
                if (std::abs(x[static_cast<std::size_t>(i)]) >= kKakClassTol) p = i + 1;
            return core_one(p);
        }
        case 2: {
            int zero = 1;
            for (int i = 3; i >= 1; --i)
                if (std::abs(x[static_cast<std::size_t>(i - 1)]) < kKakClassTol) zero = i;
            std::vector<double> rest;
            for (int i = 1; i <= 3; ++i)
                if (i != zero) rest.push_back(x[static_cast<std::size_t>(i - 1)]);
            return core_two(zero, rest[0], rest[1]);
        }
        default: return core_three(x[0], x[1], x[2]);
    }
}

}  // namespace kak_detail

/// Two-qubit circuit over {U3, CNOT} realizing `u` (operand 0 = low bit) up to
/// global phase with the minimal number of CNOTs.
inline Circuit kak_decompose(const Matrix& u) {
    using namespace kak_detail;
    if (u.rows() != 4 || u.cols() != 4) throw InputError("kak_decompose: expected a 4x4 matrix");
    const KakDecomposition k = kak_decomposition(Matrix4(u));

    std::vector<Op> ops{one(0, k.before0), one(1, k.before1)};
    const auto core = core_ops(k);
    ops.insert(ops.end(), core.begin(), core.end());
    ops.push_back(one(0, k.after0));
    ops.push_back(one(1, k.after1));

    Circuit out(2);
    std::array<Matrix2, 2> pending{Matrix2::Identity(), Matrix2::Identity()};
    auto flush = [&](int q) {
        auto& m = pending[static_cast<std::size_t>(q)];
        if (!equal_up_to_phase(m, Matrix2::Identity(), 1e-12)) out.append(u3_from_matrix(m), {q});
        m = Matrix2::Identity();
    };
    for (const auto& op : ops) {
        if (op.is_cnot) {
            flush(op.q);
            flush(op.t);
            out.cx(op.q, op.t);
        } else {
            pending[static_cast<std::size_t>(op.q)] = op.m * pending[static_cast<std::size_t>(op.q)];
        }
    }
    flush(0);
    flush(1);

    if (phase_insensitive_overlap(circuit_unitary(out), u) < 1.0 - 1e-8)
        throw NumericalError("kak_decompose: reconstruction check failed");
    return out;
}

/// Minimal CNOT count of a two-qubit unitary.
inline int kak_cnot_count(const Matrix& u) { return kak_decomposition(Matrix4(u)).cnot_count(); }

}  // namespace qcflate
