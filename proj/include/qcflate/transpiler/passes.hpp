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
#include <map>
#include <string>
#include <vector>

#include "qcflate/circuit.hpp"
#include "qcflate/transpiler/euler.hpp"
#include "qcflate/transpiler/kak.hpp"
#include "qcflate/transpiler/synthesis.hpp"

namespace qcflate {

namespace pass_detail {

inline bool is_1q_unitary(const Instruction& i) { return i.gate.is_unitary() && i.qubits.size() == 1; }

inline int sx_count(const std::vector<Gate>& gs) {
    return static_cast<int>(std::count_if(gs.begin(), gs.end(), [](const Gate& g) { return g.type != GateType::Rz; }));
}

inline bool shares_qubit(const Instruction& a, const Instruction& b) {
    for (int q : a.qubits)
        if (std::find(b.qubits.begin(), b.qubits.end(), q) != b.qubits.end()) return true;
    return false;
}

/// Numeric commutation test on the union of operands, memoized by the gates
/// and their relative qubit pattern.
class CommutationCache {
public:
    bool commute(const Instruction& a, const Instruction& b) {
        if (!a.gate.is_unitary() || !b.gate.is_unitary()) return false;
        if (!shares_qubit(a, b)) return true;
        std::vector<int> qs = a.qubits;
        for (int q : b.qubits)
            if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
        auto local = [&](const Instruction& i) {
            std::vector<int> out;
            for (int q : i.qubits) out.push_back(static_cast<int>(std::find(qs.begin(), qs.end(), q) - qs.begin()));
            return out;
        };
        const auto la = local(a), lb = local(b);
        std::string key = key_of(a.gate, la) + "|" + key_of(b.gate, lb);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        const auto n = static_cast<int>(qs.size());
        Circuit ab(n), ba(n);
        ab.append(a.gate, la).append(b.gate, lb);
        ba.append(b.gate, lb).append(a.gate, la);
        const bool r = (circuit_unitary(ab) - circuit_unitary(ba)).cwiseAbs().maxCoeff() < 1e-12;
        memo_.emplace(std::move(key), r);
        return r;
    }

private:
    static std::string key_of(const Gate& g, const std::vector<int>& qs) {
        std::string k(gate_name(g.type));
        for (int i = 0; i < gate_param_count(g.type); ++i) k += "," + format_double(g.params[static_cast<std::size_t>(i)]);
        for (int q : qs) k += ":" + std::to_string(q);
        return k;
    }
    static std::string format_double(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    std::map<std::string, bool> memo_;
};

inline bool self_inverse(GateType t) {
    return t == GateType::CNOT || t == GateType::X || t == GateType::H || t == GateType::SWAP || t == GateType::CCX ||
           t == GateType::CH;
}

}  // namespace pass_detail

/// Replaces each maximal run of single-qubit gates on a wire by its Rz/SX
/// resynthesis, unless that would lengthen a run that is already in basis.
inline Circuit merge_1q_runs(const Circuit& c) {
    using namespace pass_detail;
    Circuit out(c.num_qubits(), c.num_clbits());
    std::vector<std::vector<Gate>> run(static_cast<std::size_t>(c.num_qubits()));
    auto flush = [&](int q) {
        auto& r = run[static_cast<std::size_t>(q)];
        if (r.empty()) return;
        const bool in_basis = std::all_of(r.begin(), r.end(), [](const Gate& g) {
            return g.type == GateType::Rz || g.type == GateType::SX;
        });
        auto fresh = decompose_1q_to_basis(product_1q(r));
        const bool better = fresh.size() < r.size() ||
                            (fresh.size() == r.size() && sx_count(fresh) <= sx_count(r));
        for (const auto& g : (!in_basis || better) ? fresh : r) out.append(g, {q});
        r.clear();
    };
    for (const auto& inst : c) {
        if (is_1q_unitary(inst)) {
            run[static_cast<std::size_t>(inst.qubits[0])].push_back(inst.gate);
            continue;
        }
        for (int q : inst.qubits) flush(q);
        out.append(inst);
    }
    for (int q = 0; q < c.num_qubits(); ++q) flush(q);
    return out;
}

/// Removes pairs of identical self-inverse gates that are adjacent on all of
/// their wires.
inline Circuit cancel_adjacent_pairs(const Circuit& c) {
    using namespace pass_detail;
    std::vector<Instruction> ops;
    std::vector<bool> alive;
    std::vector<std::vector<std::size_t>> wire(static_cast<std::size_t>(c.num_qubits()));
    for (const auto& inst : c) {
        if (self_inverse(inst.gate.type)) {
            bool same = true;
            std::size_t prev = 0;
            for (std::size_t k = 0; k < inst.qubits.size() && same; ++k) {
                const auto& w = wire[static_cast<std::size_t>(inst.qubits[k])];
                if (w.empty()) same = false;
                else if (k == 0) prev = w.back();
                else same = w.back() == prev;
            }
            if (same && ops[prev] == inst) {
                alive[prev] = false;
                for (int q : inst.qubits) wire[static_cast<std::size_t>(q)].pop_back();
                continue;
            }
        }
        for (int q : inst.qubits) wire[static_cast<std::size_t>(q)].push_back(ops.size());
        ops.push_back(inst);
        alive.push_back(true);
    }
    Circuit out(c.num_qubits(), c.num_clbits());
    for (std::size_t i = 0; i < ops.size(); ++i)
        if (alive[i]) out.append(ops[i]);
    return out;
}

/// Moves gates backwards through gates they commute with, merging Rz pairs
/// and cancelling identical self-inverse pairs that meet. Repeats to a fixed
/// point. Rz slides through CNOT controls, X-like gates through targets and
/// CNOTs through CNOTs that share only a control or only a target.
inline Circuit commute_cancel(const Circuit& c) {
    using namespace pass_detail;
    CommutationCache cache;
    std::vector<Instruction> ops(c.begin(), c.end());
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<bool> alive(ops.size(), true);
        for (std::size_t i = 0; i < ops.size(); ++i) {
            auto& g = ops[i];
            const bool rz = g.gate.type == GateType::Rz;
            if (!rz && !self_inverse(g.gate.type)) continue;
            for (std::size_t j = i; j-- > 0;) {
                if (!alive[j] || !shares_qubit(ops[j], g)) continue;
                auto& h = ops[j];
                if (rz && h.gate.type == GateType::Rz && h.qubits == g.qubits) {
                    h.gate.params[0] = wrap_angle(h.gate.params[0] + g.gate.params[0]);
                    alive[i] = false;
                    if (angle_is_zero(h.gate.params[0], 1e-12)) alive[j] = false;
                    changed = true;
                    break;
                }
                if (!rz && h == g) {
                    alive[i] = alive[j] = false;
                    changed = true;
                    break;
                }
                if (!cache.commute(h, g)) break;
            }
        }
        std::vector<Instruction> next;
        for (std::size_t i = 0; i < ops.size(); ++i)
            if (alive[i]) next.push_back(std::move(ops[i]));
        ops = std::move(next);
    }
    Circuit out(c.num_qubits(), c.num_clbits());
    for (auto& inst : ops) out.append(std::move(inst));
    return out;
}

/// Shifts a rotation across two-qubit gates that commute with it: Z
/// rotations through CNOT controls, X rotations through targets. The
/// rotation is split off the run before the gates and absorbed by the run
/// after them when both runs then resynthesize with fewer SX gates, or as
/// many SX gates and fewer gates overall.
inline Circuit commute_1q_runs(const Circuit& c) {
    using namespace pass_detail;
    CommutationCache cache;
    const Matrix2 h = h_matrix();
    auto rotation = [&](bool x_axis, double a) -> Matrix2 {
        const Matrix2 r = rz_matrix(a);
        return x_axis ? Matrix2(h * r * h) : r;
    };
    auto cost = [](const std::vector<Gate>& gs) { return std::pair<int, int>(sx_count(gs), static_cast<int>(gs.size())); };

    std::vector<std::vector<Instruction>> slots;
    for (const auto& inst : c) slots.push_back({inst});
    auto slot_is_1q = [&](std::size_t i) {
        return !slots[i].empty() && std::all_of(slots[i].begin(), slots[i].end(), is_1q_unitary);
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int q = 0; q < c.num_qubits() && !changed; ++q) {
            std::vector<std::size_t> wire;
            for (std::size_t i = 0; i < slots.size(); ++i)
                for (const auto& inst : slots[i])
                    if (std::find(inst.qubits.begin(), inst.qubits.end(), q) != inst.qubits.end()) {
                        wire.push_back(i);
                        break;
                    }
            std::size_t w = 0;
            while (w < wire.size() && !changed) {
                if (!slot_is_1q(wire[w])) { ++w; continue; }
                std::size_t e = w;
                std::vector<Gate> first;
                for (; e < wire.size() && slot_is_1q(wire[e]); ++e)
                    for (const auto& inst : slots[wire[e]]) first.push_back(inst.gate);
                // Which axis, if any, passes every gate up to the next run.
                bool pass_z = true, pass_x = true;
                const Instruction pz{Gate::rz(0.7), {q}}, px{Gate::u3(0.7, -kPi / 2, kPi / 2), {q}};
                std::size_t k = e;
                for (; k < wire.size() && !slot_is_1q(wire[k]); ++k) {
                    if (slots[wire[k]].size() != 1) { pass_z = pass_x = false; break; }
                    const auto& g = slots[wire[k]].front();
                    pass_z = pass_z && cache.commute(pz, g);
                    pass_x = pass_x && cache.commute(px, g);
                    if (!pass_z && !pass_x) break;
                }
                if (k == e || k >= wire.size() || !slot_is_1q(wire[k]) || (!pass_z && !pass_x)) {
                    w = e;
                    continue;
                }
                std::size_t f = k;
                std::vector<Gate> second;
                for (; f < wire.size() && slot_is_1q(wire[f]); ++f)
                    for (const auto& inst : slots[wire[f]]) second.push_back(inst.gate);
                const Matrix2 m = product_1q(first), n = product_1q(second);
                const auto base = std::make_pair(cost(first).first + cost(second).first,
                                                 cost(first).second + cost(second).second);
                std::pair<int, int> best = base;
                std::vector<Gate> best_m, best_n;
                for (const bool x_axis : {false, true}) {
                    if ((x_axis && !pass_x) || (!x_axis && !pass_z)) continue;
                    const Matrix2 mf = x_axis ? Matrix2(h * m * h) : m;
                    const Matrix2 nf = x_axis ? Matrix2(h * n * h) : n;
                    const double lead = zyz_angles(mf).phi, trail = zyz_angles(nf).lambda;
                    for (const double alpha : {lead, -trail, kPi / 2, -kPi / 2, kPi}) {
                        const Matrix2 r = rotation(x_axis, alpha);
                        auto gm = decompose_1q_to_basis(Matrix2(r.adjoint() * m));
                        auto gn = decompose_1q_to_basis(Matrix2(n * r));
                        const auto cm = cost(gm), cn = cost(gn);
                        const std::pair<int, int> total{cm.first + cn.first, cm.second + cn.second};
                        if (total < best) {
                            best = total;
                            best_m = std::move(gm);
                            best_n = std::move(gn);
                        }
                    }
                }
                if (best < base) {
                    for (std::size_t t = w; t < e; ++t) slots[wire[t]].clear();
                    for (std::size_t t = k; t < f; ++t) slots[wire[t]].clear();
                    for (const auto& g : best_m) slots[wire[w]].push_back({g, {q}});
                    for (const auto& g : best_n) slots[wire[k]].push_back({g, {q}});
                    changed = true;
                } else {
                    w = e;
                }
            }
        }
    }
    Circuit out(c.num_qubits(), c.num_clbits());
    for (auto& s : slots)
        for (auto& inst : s) out.append(std::move(inst));
    return out;
}

/// A maximal run of gates confined to one qubit pair, by instruction index.
struct TwoQubitBlock {
    int a = 0, b = 0;
    std::vector<std::size_t> members;
    int two_qubit_gates = 0;
};

/// Greedy maximal two-qubit blocks along the wires, in order of first member.
/// Measure, Reset, Barrier and wider gates end any block they touch.
inline std::vector<TwoQubitBlock> collect_2q_blocks(const Circuit& c) {
    using namespace pass_detail;
    std::vector<TwoQubitBlock> blocks;
    const auto n = static_cast<std::size_t>(c.num_qubits());
    std::vector<int> open(n, -1);
    std::vector<std::vector<std::size_t>> pending(n);
    auto close = [&](int q) {
        const int b = open[static_cast<std::size_t>(q)];
        if (b < 0) return;
        for (int w : {blocks[static_cast<std::size_t>(b)].a, blocks[static_cast<std::size_t>(b)].b})
            if (open[static_cast<std::size_t>(w)] == b) open[static_cast<std::size_t>(w)] = -1;
    };
    for (std::size_t i = 0; i < c.size(); ++i) {
        const auto& inst = c[i];
        if (is_1q_unitary(inst)) {
            const auto q = static_cast<std::size_t>(inst.qubits[0]);
            if (open[q] >= 0) blocks[static_cast<std::size_t>(open[q])].members.push_back(i);
            else pending[q].push_back(i);
            continue;
        }
        if (inst.gate.is_unitary() && inst.qubits.size() == 2) {
            const int a = inst.qubits[0], b = inst.qubits[1];
            const int oa = open[static_cast<std::size_t>(a)], ob = open[static_cast<std::size_t>(b)];
            if (oa >= 0 && oa == ob) {
                auto& blk = blocks[static_cast<std::size_t>(oa)];
                blk.members.push_back(i);
                ++blk.two_qubit_gates;
                continue;
            }
            close(a);
            close(b);
            TwoQubitBlock blk{a, b, {}, 1};
            for (int q : {a, b}) {
                auto& p = pending[static_cast<std::size_t>(q)];
                blk.members.insert(blk.members.end(), p.begin(), p.end());
                p.clear();
            }
            std::sort(blk.members.begin(), blk.members.end());
            blk.members.push_back(i);
            blocks.push_back(std::move(blk));
            open[static_cast<std::size_t>(a)] = open[static_cast<std::size_t>(b)] = static_cast<int>(blocks.size() - 1);
            continue;
        }
        for (int q : inst.qubits) {
            close(q);
            pending[static_cast<std::size_t>(q)].clear();
        }
    }
    return blocks;
}

/// Resynthesizes each two-qubit block with KAK and keeps the result only when
/// it uses fewer CNOTs than the block it replaces.
inline Circuit resynthesize_2q_blocks(const Circuit& c) {
    const auto blocks = collect_2q_blocks(c);
    std::vector<int> owner(c.size(), -1);
    std::map<std::size_t, Circuit> replacement;  // keyed by last member index
    for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
        const auto& blk = blocks[bi];
        Circuit local(2);
        int cnots = 0;
        for (std::size_t idx : blk.members) {
            const auto& inst = c[idx];
            std::vector<int> qs;
            for (int q : inst.qubits) qs.push_back(q == blk.a ? 0 : 1);
            local.append(inst.gate, qs);
            if (inst.gate.type == GateType::CNOT) ++cnots;
            else if (inst.qubits.size() == 2) cnots += 3;  // non-basis two-qubit gates always get resynthesized
        }
        const Circuit fresh = lower_to_basis(kak_decompose(circuit_unitary(local)));
        if (multi_qubit_count(fresh) >= cnots) continue;
        Circuit mapped(c.num_qubits(), c.num_clbits());
        for (const auto& inst : fresh) {
            std::vector<int> qs;
            for (int q : inst.qubits) qs.push_back(q == 0 ? blk.a : blk.b);
            mapped.append(inst.gate, qs);
        }
        for (std::size_t idx : blk.members) owner[idx] = static_cast<int>(bi);
        replacement.emplace(blk.members.back(), std::move(mapped));
    }
    Circuit out(c.num_qubits(), c.num_clbits());
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (owner[i] < 0) {
            out.append(c[i]);
            continue;
        }
        if (auto it = replacement.find(i); it != replacement.end()) out.extend(it->second);
    }
    return out;
}

}  // namespace qcflate
