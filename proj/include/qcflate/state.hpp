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
#include <span>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qcflate/error.hpp"
#include "qcflate/linalg.hpp"

namespace qcflate {

inline constexpr int kMaxStateVectorQubits = 24;
inline constexpr int kMaxDensityQubits = 10;

/// Pure state over n qubits; qubit 0 is the least-significant index bit.
class StateVector {
public:
    explicit StateVector(int num_qubits, std::size_t basis_index = 0) : n_(num_qubits) {
        if (num_qubits < 0 || num_qubits > kMaxStateVectorQubits)
            throw InputError("statevector width must be in [0, " + std::to_string(kMaxStateVectorQubits) + "]");
        amps_.assign(std::size_t{1} << num_qubits, cplx{0.0});
        if (basis_index >= amps_.size()) throw InputError("basis index outside the state space");
        amps_[basis_index] = 1.0;
    }

    /// Takes amplitudes as given and normalizes them.
    static StateVector from_amplitudes(std::vector<cplx> amps) {
        const std::size_t dim = amps.size();
        if (dim == 0 || (dim & (dim - 1)) != 0) throw InputError("amplitude count must be a power of two");
        int n = 0;
        while ((std::size_t{1} << n) < dim) ++n;
        StateVector s(n);
        double norm = 0.0;
        for (const auto& a : amps) norm += std::norm(a);
        if (!(norm > 0.0) || !std::isfinite(norm)) throw InputError("amplitudes have zero or non-finite norm");
        const double inv = 1.0 / std::sqrt(norm);
        for (auto& a : amps) a *= inv;
        s.amps_ = std::move(amps);
        return s;
    }

    static StateVector from_vector(const Vector& v) {
        return from_amplitudes(std::vector<cplx>(v.data(), v.data() + v.size()));
    }

    /// Tensor product with `high` on the more significant qubits.
    static StateVector tensor(const StateVector& high, const StateVector& low) {
        std::vector<cplx> out(high.dim() * low.dim());
        for (std::size_t h = 0; h < high.dim(); ++h)
            for (std::size_t l = 0; l < low.dim(); ++l) out[h * low.dim() + l] = high.amps_[h] * low.amps_[l];
        return from_amplitudes(std::move(out));
    }

    [[nodiscard]] int num_qubits() const { return n_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }
    [[nodiscard]] cplx operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] Vector vector() const { return Eigen::Map<const Vector>(amps_.data(), static_cast<Eigen::Index>(dim())); }

    void apply(const Matrix& m, std::span<const int> qubits) { apply_matrix(amps_, qubits, m); }

    [[nodiscard]] double norm() const {
        double s = 0.0;
        for (const auto& a : amps_) s += std::norm(a);
        return std::sqrt(s);
    }

    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> p(dim());
        for (std::size_t i = 0; i < dim(); ++i) p[i] = std::norm(amps_[i]);
        return p;
    }

    /// Probability that `qubit` reads 1.
    [[nodiscard]] double probability_one(int qubit) const {
        double p = 0.0;
        for (std::size_t i = 0; i < dim(); ++i)
            if ((i >> qubit) & 1U) p += std::norm(amps_[i]);
        return p;
    }

private:
    int n_;
    std::vector<cplx> amps_;
};

/// Mixed state stored as a dense 2^n x 2^n matrix.
///
/// The column-major buffer is read as a 2n-qubit vector: row bits are qubits
/// 0..n-1 and column bits are qubits n..2n-1, so a superoperator acts through
/// the same local kernel as the statevector.
class DensityMatrix {
public:
    explicit DensityMatrix(int num_qubits, std::size_t basis_index = 0) : n_(num_qubits) {
        if (num_qubits < 0 || num_qubits > kMaxDensityQubits)
            throw InputError("density matrix width must be in [0, " + std::to_string(kMaxDensityQubits) + "]");
        const auto d = static_cast<Eigen::Index>(std::size_t{1} << num_qubits);
        if (basis_index >= static_cast<std::size_t>(d)) throw InputError("basis index outside the state space");
        rho_ = Matrix::Zero(d, d);
        rho_(static_cast<Eigen::Index>(basis_index), static_cast<Eigen::Index>(basis_index)) = 1.0;
    }

    explicit DensityMatrix(const StateVector& s) : DensityMatrix(s.num_qubits()) {
        const Vector v = s.vector();
        rho_ = v * v.adjoint();
    }

    static DensityMatrix from_matrix(Matrix m) {
        const auto d = static_cast<std::size_t>(m.rows());
        if (m.rows() != m.cols() || d == 0 || (d & (d - 1)) != 0)
            throw InputError("density matrix must be square with power-of-two dimension");
        int n = 0;
        while ((std::size_t{1} << n) < d) ++n;
        DensityMatrix out(n);
        out.rho_ = std::move(m);
        return out;
    }

    static DensityMatrix maximally_mixed(int num_qubits) {
        DensityMatrix out(num_qubits);
        const auto d = out.rho_.rows();
        out.rho_ = Matrix::Identity(d, d) / static_cast<double>(d);
        return out;
    }

    [[nodiscard]] int num_qubits() const { return n_; }
    [[nodiscard]] Eigen::Index dim() const { return rho_.rows(); }
    [[nodiscard]] const Matrix& matrix() const { return rho_; }

    void apply_unitary(const Matrix& u, std::span<const int> qubits) {
        apply_matrix(flat(), qubits, u);
        apply_matrix(flat(), shifted(qubits), u.conjugate());
    }

    /// Applies a superoperator sum_k conj(K) (x) K over the listed qubits.
    void apply_superoperator(const Matrix& s, std::span<const int> qubits) {
        std::vector<int> ops(qubits.begin(), qubits.end());
        for (int q : qubits) ops.push_back(q + n_);
        apply_matrix(flat(), ops, s);
    }

    [[nodiscard]] double trace() const { return rho_.trace().real(); }
    [[nodiscard]] double purity() const { return (rho_ * rho_).trace().real(); }

    [[nodiscard]] std::vector<double> probabilities() const {
        std::vector<double> p(static_cast<std::size_t>(dim()));
        for (Eigen::Index i = 0; i < dim(); ++i) p[static_cast<std::size_t>(i)] = std::max(0.0, rho_(i, i).real());
        return p;
    }

    [[nodiscard]] double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part());
        return es.eigenvalues().minCoeff();
    }

    [[nodiscard]] Matrix hermitian_part() const { return 0.5 * (rho_ + rho_.adjoint()); }

private:
    std::span<cplx> flat() { return {rho_.data(), static_cast<std::size_t>(rho_.size())}; }

    [[nodiscard]] std::vector<int> shifted(std::span<const int> qubits) const {
        std::vector<int> out;
        out.reserve(qubits.size());
        for (int q : qubits) out.push_back(q + n_);
        return out;
    }

    int n_;
    Matrix rho_;
};

namespace detail {

inline void check_keep(int n, std::span<const int> keep) {
    if (keep.empty()) throw InputError("reduced_density: keep list is empty");
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] < 0 || keep[i] >= n) throw InputError("reduced_density: qubit index out of range");
        for (std::size_t j = 0; j < i; ++j)
            if (keep[j] == keep[i]) throw InputError("reduced_density: repeated qubit index");
    }
}

inline std::size_t scatter(std::size_t local, std::span<const int> qubits) {
    std::size_t out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j)
        if ((local >> j) & 1U) out |= std::size_t{1} << qubits[j];
    return out;
}

}  // namespace detail

/// Partial trace onto `keep`; keep[j] becomes qubit j of the result.
inline DensityMatrix reduced_density(const DensityMatrix& rho, std::span<const int> keep) {
    const int n = rho.num_qubits();
    detail::check_keep(n, keep);
    std::vector<int> rest;
    for (int q = 0; q < n; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dr = std::size_t{1} << rest.size();
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    const Matrix& m = rho.matrix();
    for (std::size_t r = 0; r < dk; ++r) {
        const std::size_t gr = detail::scatter(r, keep);
        for (std::size_t c = 0; c < dk; ++c) {
            const std::size_t gc = detail::scatter(c, keep);
            cplx acc = 0.0;
            for (std::size_t t = 0; t < dr; ++t) {
                const std::size_t gt = detail::scatter(t, rest);
                acc += m(static_cast<Eigen::Index>(gr | gt), static_cast<Eigen::Index>(gc | gt));
            }
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = acc;
        }
    }
    return DensityMatrix::from_matrix(std::move(out));
}

/// Partial trace of a pure state; avoids forming the full density matrix.
inline DensityMatrix reduced_density(const StateVector& s, std::span<const int> keep) {
    const int n = s.num_qubits();
    detail::check_keep(n, keep);
    std::vector<int> rest;
    for (int q = 0; q < n; ++q)
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) rest.push_back(q);
    const std::size_t dk = std::size_t{1} << keep.size();
    const std::size_t dr = std::size_t{1} << rest.size();
    // psi reshaped to a dk x dr matrix, then rho = A A^dagger.
    Matrix a(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dr));
    for (std::size_t k = 0; k < dk; ++k)
        for (std::size_t t = 0; t < dr; ++t)
            a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(t)) =
                s[detail::scatter(k, keep) | detail::scatter(t, rest)];
    return DensityMatrix::from_matrix(a * a.adjoint());
}

inline DensityMatrix reduced_density(const DensityMatrix& rho, std::initializer_list<int> keep) {
    return reduced_density(rho, std::span<const int>(keep.begin(), keep.size()));
}
inline DensityMatrix reduced_density(const StateVector& s, std::initializer_list<int> keep) {
    return reduced_density(s, std::span<const int>(keep.begin(), keep.size()));
}

/// Square root of a positive semidefinite Hermitian matrix (negative
/// eigenvalues from rounding are clipped).
inline Matrix psd_sqrt(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
    const Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

inline double clamp_unit(double f) { return std::clamp(f, 0.0, 1.0); }

inline double state_fidelity(const StateVector& a, const StateVector& b) {
    if (a.dim() != b.dim()) throw InputError("state_fidelity: dimension mismatch");
    return clamp_unit(std::norm(a.vector().dot(b.vector())));
}

inline double state_fidelity(const StateVector& a, const DensityMatrix& b) {
    if (static_cast<Eigen::Index>(a.dim()) != b.dim()) throw InputError("state_fidelity: dimension mismatch");
    const Vector v = a.vector();
    return clamp_unit((v.adjoint() * b.matrix() * v)(0, 0).real());
}

inline double state_fidelity(const DensityMatrix& a, const StateVector& b) { return state_fidelity(b, a); }

/// Uhlmann fidelity (tr sqrt(sqrt(a) b sqrt(a)))^2.
inline double state_fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) throw InputError("state_fidelity: dimension mismatch");
    const Matrix sa = psd_sqrt(a.matrix());
    const double t = psd_sqrt(sa * b.matrix() * sa).trace().real();
    return clamp_unit(t * t);
}

/// Half the trace norm of a - b.
inline double trace_distance(const Matrix& a, const Matrix& b) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * ((a - b) + (a - b).adjoint()), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace qcflate
