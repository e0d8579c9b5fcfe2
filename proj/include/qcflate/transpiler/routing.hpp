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
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "qcflate/calibration.hpp"
#include "qcflate/circuit.hpp"
#include "qcflate/hardware.hpp"
#include "qcflate/random.hpp"

namespace qcflate {

/// Logical-to-physical maps before and after a routed circuit. Entry l is the
/// physical qubit holding logical qubit l.
struct LayoutPermutation {
    std::vector<int> initial;
    std::vector<int> final_layout;

    static LayoutPermutation identity(int n) {
        LayoutPermutation p;
        p.initial.resize(static_cast<std::size_t>(n));
        std::iota(p.initial.begin(), p.initial.end(), 0);
        p.final_layout = p.initial;
        return p;
    }

    friend bool operator==(const LayoutPermutation&, const LayoutPermutation&) = default;
};

inline bool is_permutation_of_range(const std::vector<int>& p) {
    std::vector<int> s = p;
    std::sort(s.begin(), s.end());
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s[i] != static_cast<int>(i)) return false;
    return true;
}

/// outer after inner: l -> outer[inner[l]].
inline std::vector<int> compose(const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> out(inner.size());
    for (std::size_t l = 0; l < inner.size(); ++l) out[l] = outer[static_cast<std::size_t>(inner[l])];
    return out;
}

/// Layout of a stage applied to the output of an earlier stage.
inline LayoutPermutation compose(const LayoutPermutation& later, const LayoutPermutation& earlier) {
    return {compose(later.initial, earlier.initial), compose(later.final_layout, earlier.final_layout)};
}

/// Matrix sending |x> (logical bits) to the basis state with bit x_l on
/// physical qubit layout[l].
inline Matrix permutation_matrix(const std::vector<int>& layout) {
    const std::size_t dim = std::size_t{1} << layout.size();
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t x = 0; x < dim; ++x) {
        std::size_t y = 0;
        for (std::size_t l = 0; l < layout.size(); ++l)
            if ((x >> l) & 1U) y |= std::size_t{1} << layout[l];
        p(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(x)) = 1.0;
    }
    return p;
}

/// Relabels qubits: logical qubit l becomes physical layout[l] in a circuit
/// of width `width`.
inline Circuit apply_layout(const Circuit& c, const std::vector<int>& layout, int width) {
    Circuit out(width, c.num_clbits());
    for (const auto& inst : c) {
        std::vector<int> qs;
        for (int q : inst.qubits) qs.push_back(layout[static_cast<std::size_t>(q)]);
        out.append(inst.gate, std::move(qs));
    }
    return out;
}

struct RouteOptions {
    /// Edge error rates steer the choice among equally cheap layouts.
    const CalibrationData* calibration = nullptr;
    /// Skip the layout search and start from this logical-to-physical map.
    std::optional<std::vector<int>> initial_layout;
    /// Draw one initial layout from all permutations with the seed instead
    /// of searching for the cheapest.
    bool sample_layout = false;
    int lookahead = 6;
    double lookahead_decay = 0.5;
};

namespace route_detail {

struct Routed {
    Circuit circuit;
    LayoutPermutation layout;
    int swaps = 0;
    double error_score = 0.0;
};

inline double edge_error(const CalibrationData* cal, int a, int b) {
    if (!cal) return 0.0;
    const auto* e = cal->find_edge(a, b);
    return e ? e->depolarizing : 1.0;
}

/// Greedy SWAP insertion from a fixed initial layout over `m` physical qubits.
inline Routed route_from(const Circuit& c, const CouplingMap& cm, std::vector<int> layout, Rng& rng,
                         const RouteOptions& opt) {
    const int m = cm.num_qubits();
    Routed r{Circuit(m, c.num_clbits()), {}, 0, 0.0};
    r.layout.initial = layout;

    std::vector<std::size_t> two_q;  // indices of two-qubit gates, for lookahead
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i].gate.is_unitary() && c[i].qubits.size() == 2) two_q.push_back(i);
    std::size_t next2q = 0;

    auto phys = [&](int l) { return layout[static_cast<std::size_t>(l)]; };
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& inst = c[i];
        if (inst.gate.is_unitary() && inst.qubits.size() > 2)
            throw ValidationError("route: gates on more than two qubits must be lowered first");
        if (inst.gate.is_unitary() && inst.qubits.size() == 2) {
            ++next2q;
            const int la = inst.qubits[0], lb = inst.qubits[1];
            bool bridged = false;
            while (!cm.connected(phys(la), phys(lb))) {
                const int pa = phys(la), pb = phys(lb);
                double best = std::numeric_limits<double>::infinity();
                std::vector<Edge> ties;
                for (const auto& e : cm.edges()) {
                    if (e.first != pa && e.first != pb && e.second != pa && e.second != pb) continue;
                    auto trial = layout;
                    for (auto& p : trial) {
                        if (p == e.first) p = e.second;
                        else if (p == e.second) p = e.first;
                    }
                    auto dist = [&](std::size_t idx) {
                        const auto& g = c[idx];
                        return static_cast<double>(cm.distance(trial[static_cast<std::size_t>(g.qubits[0])],
                                                               trial[static_cast<std::size_t>(g.qubits[1])]));
                    };
                    double score = 1000.0 * dist(i);
                    double w = 1.0;
                    for (std::size_t k = next2q; k < two_q.size() && k < next2q + static_cast<std::size_t>(opt.lookahead); ++k) {
                        w *= opt.lookahead_decay;
                        score += w * dist(two_q[k]);
                    }
                    if (score < best - 1e-12) {
                        best = score;
                        ties.assign(1, e);
                    } else if (score <= best + 1e-12) {
                        ties.push_back(e);
                    }
                }
                // A CNOT two hops apart can also be bridged through the middle
                // qubit, leaving the layout alone. It scores as if the gate had
                // become adjacent and competes with the SWAPs on lookahead.
                std::vector<int> bridges;
                if (inst.gate.type == GateType::CNOT && cm.distance(pa, pb) == 2) {
                    double score = 1000.0;
                    double w = 1.0;
                    for (std::size_t k = next2q; k < two_q.size() && k < next2q + static_cast<std::size_t>(opt.lookahead); ++k) {
                        w *= opt.lookahead_decay;
                        const auto& g = c[two_q[k]];
                        score += w * cm.distance(phys(g.qubits[0]), phys(g.qubits[1]));
                    }
                    if (score <= best + 1e-12) {
                        if (score < best - 1e-12) ties.clear();
                        best = score;
                        for (int mid = 0; mid < m; ++mid)
                            if (cm.connected(pa, mid) && cm.connected(mid, pb)) bridges.push_back(mid);
                    }
                }
                const std::size_t options = ties.size() + bridges.size();
                const std::size_t choice = std::uniform_int_distribution<std::size_t>(0, options - 1)(rng);
                if (choice >= ties.size()) {
                    const int mid = bridges[choice - ties.size()];
                    r.circuit.cx(pa, mid);
                    r.circuit.cx(mid, pb);
                    r.circuit.cx(pa, mid);
                    r.circuit.cx(mid, pb);
                    r.error_score += 2.0 * (edge_error(opt.calibration, pa, mid) + edge_error(opt.calibration, mid, pb));
                    r.error_score += edge_error(opt.calibration, pa, mid);
                    ++r.swaps;
                    bridged = true;
                    break;
                }
                const Edge pick = ties[choice];
                r.circuit.swap(pick.first, pick.second);
                r.error_score += 3.0 * edge_error(opt.calibration, pick.first, pick.second);
                ++r.swaps;
                for (auto& p : layout) {
                    if (p == pick.first) p = pick.second;
                    else if (p == pick.second) p = pick.first;
                }
            }
            if (bridged) continue;
            r.error_score += edge_error(opt.calibration, phys(la), phys(lb));
        }
        std::vector<int> qs;
        for (int q : inst.qubits) qs.push_back(phys(q));
        r.circuit.append(inst.gate, std::move(qs));
    }
    r.layout.final_layout = layout;
    return r;
}

}  // namespace route_detail

/// Places the circuit on `cm` and inserts SWAPs so every two-qubit gate acts
/// on an edge. Up to four qubits every initial layout is tried; the fewest
/// SWAPs wins, then (with a calibration) the lowest summed edge error. The
/// seeded generator picks among layouts still tied and among equally scored
/// SWAPs and bridges, which is where trials differ.
inline std::pair<Circuit, LayoutPermutation> route(const Circuit& c, const CouplingMap& cm, std::uint64_t seed,
                                                   const RouteOptions& opt = {}) {
    const int m = cm.num_qubits();
    if (c.num_qubits() > m) throw ValidationError("route: circuit is wider than the coupling map");
    if (!cm.is_connected()) throw ValidationError("route: coupling map is disconnected");
    // Pad to the device width so the layout is a bijection.
    Circuit padded(m, c.num_clbits());
    padded.extend(c);

    if (opt.initial_layout) {
        const auto& l = *opt.initial_layout;
        if (static_cast<int>(l.size()) != m || !is_permutation_of_range(l))
            throw InputError("route: initial layout must be a permutation of the device qubits");
        Rng rng = make_rng(seed);
        auto r = route_detail::route_from(padded, cm, l, rng, opt);
        return {std::move(r.circuit), std::move(r.layout)};
    }

    std::vector<std::vector<int>> candidates;
    std::vector<int> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    if (opt.sample_layout) {
        Rng rng = make_rng(split_seed(seed, 0x1a70u));
        std::shuffle(perm.begin(), perm.end(), rng);
        auto r = route_detail::route_from(padded, cm, perm, rng, opt);
        return {std::move(r.circuit), std::move(r.layout)};
    }
    if (m <= 4) {
        do candidates.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // Wider devices: identity plus seeded shuffles.
        Rng rng = make_rng(seed ^ 0x5eedULL);
        candidates.push_back(perm);
        for (int k = 0; k < 16; ++k) {
            std::shuffle(perm.begin(), perm.end(), rng);
            candidates.push_back(perm);
        }
    }

    // Equally cheap layouts are kept and the seed picks one of them.
    std::vector<route_detail::Routed> best;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        Rng rng = make_rng(split_seed(seed, k));
        auto r = route_detail::route_from(padded, cm, candidates[k], rng, opt);
        const bool fewer = best.empty() || r.swaps < best.front().swaps ||
                           (r.swaps == best.front().swaps && r.error_score < best.front().error_score - 1e-15);
        const bool tied = !fewer && r.swaps == best.front().swaps &&
                          r.error_score <= best.front().error_score + 1e-15;
        if (fewer) best.clear();
        if (fewer || tied) best.push_back(std::move(r));
    }
    Rng pick_rng = make_rng(split_seed(seed, candidates.size()));
    auto& chosen = best[std::uniform_int_distribution<std::size_t>(0, best.size() - 1)(pick_rng)];
    return {std::move(chosen.circuit), std::move(chosen.layout)};
}

}  // namespace qcflate
