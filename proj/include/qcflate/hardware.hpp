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
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qcflate/circuit.hpp"

namespace qcflate {

using Edge = std::pair<int, int>;

inline Edge make_edge(int a, int b) { return a < b ? Edge{a, b} : Edge{b, a}; }

/// Undirected connectivity graph: which qubit pairs support a hardware CNOT
/// (in either direction).
class CouplingMap {
public:
    CouplingMap() = default;
    CouplingMap(int num_qubits, const std::vector<Edge>& edges) : num_qubits_(num_qubits) {
        for (auto [a, b] : edges) {
            if (a < 0 || b < 0 || a >= num_qubits || b >= num_qubits || a == b)
                throw InputError("coupling edge (" + std::to_string(a) + "," + std::to_string(b) + ") is invalid");
            edges_.insert(make_edge(a, b));
        }
        compute_distances();
    }

    static CouplingMap triangle3() { return {3, {{0, 1}, {1, 2}, {0, 2}}}; }
    static CouplingMap line3() { return {3, {{0, 1}, {1, 2}}}; }
    static CouplingMap complete(int n) {
        std::vector<Edge> e;
        for (int a = 0; a < n; ++a)
            for (int b = a + 1; b < n; ++b) e.emplace_back(a, b);
        return {n, e};
    }
    static CouplingMap line(int n) {
        std::vector<Edge> e;
        for (int a = 0; a + 1 < n; ++a) e.emplace_back(a, a + 1);
        return {n, e};
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::set<Edge>& edges() const { return edges_; }
    [[nodiscard]] bool connected(int a, int b) const { return edges_.count(make_edge(a, b)) > 0; }
    [[nodiscard]] int distance(int a, int b) const {
        return dist_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
    }
    [[nodiscard]] bool is_connected() const {
        for (int a = 0; a < num_qubits_; ++a)
            if (distance(0, a) == kUnreachable) return false;
        return true;
    }
    [[nodiscard]] bool is_complete() const {
        return static_cast<int>(edges_.size()) == num_qubits_ * (num_qubits_ - 1) / 2;
    }
    [[nodiscard]] std::vector<int> neighbours(int q) const {
        std::vector<int> out;
        for (auto [a, b] : edges_) {
            if (a == q) out.push_back(b);
            if (b == q) out.push_back(a);
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    static constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

    friend bool operator==(const CouplingMap& a, const CouplingMap& b) {
        return a.num_qubits_ == b.num_qubits_ && a.edges_ == b.edges_;
    }

private:
    void compute_distances() {
        const auto n = static_cast<std::size_t>(num_qubits_);
        dist_.assign(n, std::vector<int>(n, kUnreachable));
        for (int s = 0; s < num_qubits_; ++s) {
            auto& d = dist_[static_cast<std::size_t>(s)];
            d[static_cast<std::size_t>(s)] = 0;
            std::queue<int> frontier;
            frontier.push(s);
            while (!frontier.empty()) {
                const int u = frontier.front();
                frontier.pop();
                for (int v : neighbours(u)) {
                    if (d[static_cast<std::size_t>(v)] != kUnreachable) continue;
                    d[static_cast<std::size_t>(v)] = d[static_cast<std::size_t>(u)] + 1;
                    frontier.push(v);
                }
            }
        }
    }

    int num_qubits_ = 0;
    std::set<Edge> edges_;
    std::vector<std::vector<int>> dist_;
};

/// Gate kinds a backend executes natively.
class BasisGateSet {
public:
    BasisGateSet() : BasisGateSet({GateType::Rz, GateType::SX, GateType::CNOT, GateType::Measure, GateType::Reset,
                                   GateType::Barrier}) {}
    BasisGateSet(std::initializer_list<GateType> kinds) : kinds_(kinds) {}
    explicit BasisGateSet(std::set<GateType> kinds) : kinds_(std::move(kinds)) {}

    [[nodiscard]] bool contains(GateType t) const { return kinds_.count(t) > 0; }
    [[nodiscard]] const std::set<GateType>& kinds() const { return kinds_; }

    friend bool operator==(const BasisGateSet&, const BasisGateSet&) = default;

private:
    std::set<GateType> kinds_;
};

struct Violation {
    enum class Kind { Basis, Connectivity, Width };
    Kind kind;
    std::size_t index;  // instruction position
    std::string message;
};

/// Every instruction whose kind is outside `basis` or whose two-qubit operands
/// are not an edge of `cm`. Violations are data, never thrown.
inline std::vector<Violation> validate(const Circuit& c, const CouplingMap& cm, const BasisGateSet& basis) {
    std::vector<Violation> out;
    if (c.num_qubits() > cm.num_qubits())
        out.push_back({Violation::Kind::Width, 0,
                       "circuit uses " + std::to_string(c.num_qubits()) + " qubits, coupling map has " +
                           std::to_string(cm.num_qubits())});
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& inst = c[i];
        if (!basis.contains(inst.gate.type))
            out.push_back({Violation::Kind::Basis, i,
                           "instruction " + std::to_string(i) + ": " + std::string(gate_name(inst.gate.type)) +
                               " is not a basis gate"});
        if (inst.gate.is_unitary() && inst.qubits.size() == 2) {
            const int a = inst.qubits[0], b = inst.qubits[1];
            if (a >= cm.num_qubits() || b >= cm.num_qubits() || !cm.connected(a, b))
                out.push_back({Violation::Kind::Connectivity, i,
                               "instruction " + std::to_string(i) + ": no coupling edge (" + std::to_string(a) + "," +
                                   std::to_string(b) + ")"});
        }
    }
    return out;
}

}  // namespace qcflate
