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

#include <cstdint>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qcflate/calibration.hpp"
#include "qcflate/circuit.hpp"
#include "qcflate/hardware.hpp"
#include "qcflate/simulator.hpp"
#include "qcflate/transpiler/passes.hpp"
#include "qcflate/transpiler/routing.hpp"
#include "qcflate/transpiler/synthesis.hpp"

namespace qcflate {

struct PassConfig {
    int optimization_level = 1;
    std::uint64_t seed = 0;
    int max_trials = 1;
    BasisGateSet basis;
    CouplingMap coupling = CouplingMap::triangle3();
    std::optional<CalibrationData> calibration;     // enables error-aware layout at level >= 2
    std::optional<std::vector<int>> initial_layout;  // fixes the layout instead of searching
    bool sample_layout = false;                      // seeded random layout instead of searching

    void check() const {
        if (optimization_level < 0 || optimization_level > 3) throw InputError("optimization_level must be 0..3");
        if (max_trials < 1) throw InputError("max_trials must be at least 1");
    }
};

struct TranspileReport {
    GateCounts counts;
    int depth = 0;
    LayoutPermutation layout;
    std::uint64_t seed = 0;
    double semantic_fidelity = 0.0;
    int trials_run = 1;
    std::vector<int> trial_cnots;  // CNOT count of every trial, in seed order

    [[nodiscard]] int cnots() const { return count_of(counts, GateType::CNOT); }
    [[nodiscard]] int total_gates() const {
        int t = 0;
        for (const auto& [k, v] : counts) t += v;
        return t;
    }
};

inline constexpr double kSemanticTolerance = 1e-9;

// ---------------------------------------------------------------------------
// Semantic certificate

namespace transpile_detail {

inline Matrix padded_unitary(const Circuit& c, int width) {
    Circuit p(width, c.num_clbits());
    p.extend(c);
    return circuit_unitary(p);
}

/// Product input states over {|0>, |1>, |+>, |+i>}; they span all operators,
/// so agreement on them pins down a channel.
inline std::vector<StateVector> probe_states(int n) {
    std::vector<StateVector> out;
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<std::array<cplx, 2>, 4> one{{{1, 0}, {0, 1}, {r, r}, {r, cplx(0, r)}}};
    std::size_t total = 1;
    for (int i = 0; i < n; ++i) total *= 4;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<cplx> amps(std::size_t{1} << n, 1.0);
        std::size_t rest = code;
        for (int q = 0; q < n; ++q) {
            const auto& s = one[rest % 4];
            rest /= 4;
            for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= s[(i >> q) & 1U];
        }
        out.push_back(StateVector::from_amplitudes(std::move(amps)));
    }
    return out;
}

}  // namespace transpile_detail

/// Agreement between a source circuit and its physical realization under the
/// layout. Unitary sources: |tr(expected^dagger V)| / 2^n. Otherwise the
/// minimum, over product probe inputs, of the output-state fidelity times one
/// minus the total-variation distance of the classical distributions.
inline double semantic_fidelity(const Circuit& source, const Circuit& physical, const LayoutPermutation& layout) {
    const int m = physical.num_qubits();
    if (source.is_unitary() && physical.is_unitary()) {
        const Matrix u = transpile_detail::padded_unitary(source, m);
        const Matrix expected = permutation_matrix(layout.final_layout) * u * permutation_matrix(layout.initial).transpose();
        return phase_insensitive_overlap(expected, circuit_unitary(physical));
    }
    if (m > 6) throw ValidationError("semantic certificate for non-unitary circuits is limited to 6 qubits");
    Circuit padded(m, source.num_clbits());
    padded.extend(source);
    const Matrix pin = permutation_matrix(layout.initial), pout = permutation_matrix(layout.final_layout);
    double worst = 1.0;
    for (const auto& probe : transpile_detail::probe_states(m)) {
        const DensityMatrix in(probe);
        const DensityMatrix a = run_density(padded, nullptr, in);
        const DensityMatrix b = run_density(physical, nullptr, DensityMatrix::from_matrix(pin * in.matrix() * pin.transpose()));
        const DensityMatrix a_phys = DensityMatrix::from_matrix(pout * a.matrix() * pout.transpose());
        const auto da = measurement_distribution(padded, a.probabilities());
        const auto db = measurement_distribution(physical, b.probabilities());
        double tv = 0.0;
        for (std::size_t i = 0; i < da.size(); ++i) tv += 0.5 * std::abs(da[i] - db[i]);
        const double f = 1.0 - trace_distance(a_phys.matrix(), b.matrix());
        worst = std::min(worst, std::min(f, 1.0 - tv));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Pass pipeline

inline std::tuple<int, int, int> circuit_cost(const Circuit& c) {
    const auto counts = gate_counts(c);
    int total = 0;
    for (const auto& [k, v] : counts) total += v;
    return {count_of(counts, GateType::CNOT), depth(c), total};
}

/// Level-dependent optimization loop, repeated until the cost stops falling.
inline Circuit optimize(Circuit c, int level) {
    if (level <= 0) return c;
    for (int round = 0; round < 16; ++round) {
        const auto before = circuit_cost(c);
        if (level >= 3) c = resynthesize_2q_blocks(c);
        c = merge_1q_runs(c);
        c = cancel_adjacent_pairs(c);
        if (level >= 2) {
            c = commute_cancel(c);
            c = commute_1q_runs(c);
            c = merge_1q_runs(c);
        }
        if (!(circuit_cost(c) < before)) break;
    }
    return c;
}

inline std::vector<std::string> check_output(const Circuit& c, const PassConfig& cfg) {
    std::vector<std::string> out;
    for (const auto& v : validate(c, cfg.coupling, cfg.basis)) out.push_back(v.message);
    return out;
}

/// Lower, route and optimize at cfg.optimization_level:
///   0: lower to basis and route;
///   1: also merge single-qubit runs and cancel adjacent CNOT pairs;
///   2: also commutation-aware cancellation and error-aware layout;
///   3: also KAK resynthesis of two-qubit blocks when it saves CNOTs.
inline std::pair<Circuit, TranspileReport> transpile(const Circuit& c, const PassConfig& cfg) {
    cfg.check();
    const int level = cfg.optimization_level;
    Circuit work = optimize(lower_to_basis(c), level);

    RouteOptions ro;
    if (level >= 2 && cfg.calibration) ro.calibration = &*cfg.calibration;
    ro.initial_layout = cfg.initial_layout;
    ro.sample_layout = cfg.sample_layout;
    auto [routed, layout] = route(work, cfg.coupling, cfg.seed, ro);
    Circuit out = optimize(lower_to_basis(routed), level);

    TranspileReport rep;
    rep.counts = gate_counts(out);
    rep.depth = depth(out);
    rep.layout = layout;
    rep.seed = cfg.seed;
    rep.trials_run = 1;
    rep.trial_cnots = {rep.cnots()};
    rep.semantic_fidelity = semantic_fidelity(c, out, layout);
    if (const auto bad = check_output(out, cfg); !bad.empty())
        throw ValidationError("transpile produced an invalid circuit: " + bad.front());
    if (rep.semantic_fidelity < 1.0 - kSemanticTolerance)
        throw NumericalError("transpile: semantic fidelity " + std::to_string(rep.semantic_fidelity) + " below tolerance");
    return {std::move(out), std::move(rep)};
}

/// Successive transpilations at the given levels. Each stage treats the
/// previous output as its logical circuit; layouts compose.
inline std::pair<Circuit, TranspileReport> transpile_cascade(const Circuit& c, const PassConfig& cfg,
                                                            const std::vector<int>& levels) {
    if (levels.empty()) throw InputError("transpile_cascade: no levels given");
    Circuit cur = c;
    std::optional<LayoutPermutation> layout;
    for (std::size_t s = 0; s < levels.size(); ++s) {
        PassConfig stage = cfg;
        stage.optimization_level = levels[s];
        stage.seed = s == 0 ? cfg.seed : split_seed(cfg.seed, s);
        if (s > 0) {
            // Later stages keep the placement the first one chose.
            stage.initial_layout.reset();
            stage.sample_layout = false;
        }
        auto [next, rep] = transpile(cur, stage);
        layout = layout ? compose(rep.layout, *layout) : rep.layout;
        cur = std::move(next);
    }
    TranspileReport rep;
    rep.counts = gate_counts(cur);
    rep.depth = depth(cur);
    rep.layout = *layout;
    rep.seed = cfg.seed;
    rep.trial_cnots = {rep.cnots()};
    rep.semantic_fidelity = semantic_fidelity(c, cur, rep.layout);
    if (rep.semantic_fidelity < 1.0 - kSemanticTolerance)
        throw NumericalError("transpile_cascade: semantic fidelity below tolerance");
    return {std::move(cur), std::move(rep)};
}

/// Lexicographic ranking: CNOTs, depth, total gates.
inline bool better_result(const TranspileReport& a, const TranspileReport& b) {
    return std::make_tuple(a.cnots(), a.depth, a.total_gates()) < std::make_tuple(b.cnots(), b.depth, b.total_gates());
}

/// Runs `one_trial` with seeds seed, seed+1, ... and keeps the best; earlier
/// seeds win ties, so the result does not depend on evaluation order.
template <class TrialFn>
std::pair<Circuit, TranspileReport> best_of(const PassConfig& cfg, TrialFn one_trial) {
    cfg.check();
    std::optional<std::pair<Circuit, TranspileReport>> best;
    std::vector<int> cnots;
    for (int t = 0; t < cfg.max_trials; ++t) {
        PassConfig trial = cfg;
        trial.seed = cfg.seed + static_cast<std::uint64_t>(t);
        auto r = one_trial(trial);
        cnots.push_back(r.second.cnots());
        if (!best || better_result(r.second, best->second)) best = std::move(r);
    }
    best->second.trials_run = cfg.max_trials;
    best->second.trial_cnots = std::move(cnots);
    return std::move(*best);
}

inline std::pair<Circuit, TranspileReport> best_of_trials(const Circuit& c, const PassConfig& cfg) {
    return best_of(cfg, [&](const PassConfig& t) { return transpile(c, t); });
}

// ---------------------------------------------------------------------------
// Segment-wise pipeline

/// Transpiles each segment with its own config, chaining layouts so that a
/// segment starts where the previous one left the qubits, joins the parts and
/// runs the joined circuit through `final_levels`.
inline std::pair<Circuit, TranspileReport> efficient_pipeline(const std::vector<Circuit>& segments,
                                                             const std::vector<PassConfig>& cfgs,
                                                             const std::vector<int>& final_levels) {
    if (segments.empty()) throw InputError("efficient_pipeline: no segments");
    if (cfgs.size() != segments.size()) throw InputError("efficient_pipeline: need one config per segment");
    const int width = segments.front().num_qubits();
    int clbits = 0;
    for (const auto& s : segments) {
        if (s.num_qubits() != width) throw InputError("efficient_pipeline: segments differ in width");
        clbits = std::max(clbits, s.num_clbits());
    }
    Circuit source(width, clbits);
    for (const auto& s : segments) source.extend(s);

    std::optional<Circuit> joined;
    LayoutPermutation layout;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        PassConfig cfg = cfgs[k];
        if (k > 0) cfg.initial_layout = layout.final_layout;
        auto [part, rep] = transpile(segments[k], cfg);
        if (!joined) {
            joined = Circuit(part.num_qubits(), clbits);
            layout = rep.layout;
        } else {
            layout.final_layout = rep.layout.final_layout;
        }
        joined->extend(part);
    }

    Circuit cur = std::move(*joined);
    PassConfig fin = cfgs.back();
    fin.initial_layout.reset();
    for (std::size_t s = 0; s < final_levels.size(); ++s) {
        fin.optimization_level = final_levels[s];
        fin.seed = split_seed(cfgs.back().seed, 100 + s);
        auto [next, rep] = transpile(cur, fin);
        layout = compose(rep.layout, layout);
        cur = std::move(next);
    }

    TranspileReport rep;
    rep.counts = gate_counts(cur);
    rep.depth = depth(cur);
    rep.layout = layout;
    rep.seed = cfgs.front().seed;
    rep.trial_cnots = {rep.cnots()};
    rep.semantic_fidelity = semantic_fidelity(source, cur, layout);
    if (rep.semantic_fidelity < 1.0 - kSemanticTolerance)
        throw NumericalError("efficient_pipeline: semantic fidelity below tolerance");
    return {std::move(cur), std::move(rep)};
}

/// Splits a circuit into segments at every CU3 gate and barrier: runs of other
/// gates get level 1; a CU3 whose target unitary is a reflection (one CNOT)
/// gets level 3 and any other CU3 level 2. Barriers are dropped.
inline std::pair<std::vector<Circuit>, std::vector<PassConfig>> efficient_recipe(const Circuit& c, const PassConfig& base) {
    std::vector<Circuit> segs;
    std::vector<PassConfig> cfgs;
    Circuit cur(c.num_qubits(), c.num_clbits());
    auto push = [&](Circuit&& s, int level) {
        PassConfig cfg = base;
        cfg.optimization_level = level;
        cfg.seed = split_seed(base.seed, segs.size());
        segs.push_back(std::move(s));
        cfgs.push_back(std::move(cfg));
    };
    for (const auto& inst : c) {
        if (inst.gate.type != GateType::CU3 && inst.gate.type != GateType::Barrier) {
            cur.append(inst);
            continue;
        }
        if (!cur.empty()) push(std::exchange(cur, Circuit(c.num_qubits(), c.num_clbits())), 1);
        if (inst.gate.type == GateType::CU3) {
            Circuit one(c.num_qubits(), c.num_clbits());
            one.append(inst);
            const auto& p = inst.gate.params;
            push(std::move(one), is_reflection(u3_matrix(p[0], p[1], p[2])) ? 3 : 2);
        }
    }
    if (!cur.empty() || segs.empty()) push(std::move(cur), 1);
    return {std::move(segs), std::move(cfgs)};
}

inline const std::vector<int>& efficient_final_levels() {
    static const std::vector<int> v{3, 1};
    return v;
}

inline const std::vector<int>& cascade_levels() {
    static const std::vector<int> v{3, 2, 1};
    return v;
}

/// The segment recipe on a fully connected device of the same width.
inline std::pair<Circuit, TranspileReport> efficient_transpile_complete(const Circuit& c, const PassConfig& cfg) {
    PassConfig tri = cfg;
    tri.coupling = CouplingMap::complete(cfg.coupling.num_qubits());
    tri.initial_layout.reset();
    auto [segs, cfgs] = efficient_recipe(c, tri);
    return efficient_pipeline(segs, cfgs, efficient_final_levels());
}

/// "efficient" strategy: the segment recipe on a fully connected device; on
/// any other map the result is carried over with the best of cfg.max_trials
/// runs of the 3-2-1 cascade.
inline std::pair<Circuit, TranspileReport> transpile_efficient(const Circuit& c, const PassConfig& cfg) {
    auto [tri, tri_rep] = efficient_transpile_complete(c, cfg);
    if (cfg.coupling.is_complete()) return {std::move(tri), std::move(tri_rep)};
    auto [out, rep] = best_of(cfg, [&](const PassConfig& t) { return transpile_cascade(tri, t, cascade_levels()); });
    rep.layout = compose(rep.layout, tri_rep.layout);
    rep.semantic_fidelity = semantic_fidelity(c, out, rep.layout);
    if (rep.semantic_fidelity < 1.0 - kSemanticTolerance)
        throw NumericalError("transpile_efficient: semantic fidelity below tolerance");
    return {std::move(out), std::move(rep)};
}

/// "default" strategy: best of cfg.max_trials runs of the 3-2-1 cascade, each
/// starting from a seeded random layout like a stock stochastic transpiler.
inline std::pair<Circuit, TranspileReport> transpile_default(const Circuit& c, const PassConfig& cfg) {
    PassConfig base = cfg;
    if (!base.initial_layout) base.sample_layout = true;
    return best_of(base, [&](const PassConfig& t) { return transpile_cascade(c, t, cascade_levels()); });
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const LayoutPermutation& l) {
    return {{"initial", l.initial}, {"final", l.final_layout}};
}

inline nlohmann::json to_json(const TranspileReport& r) {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [k, v] : r.counts) counts[k] = v;
    return {{"counts", counts},
            {"depth", r.depth},
            {"layout", to_json(r.layout)},
            {"seed", r.seed},
            {"semantic_fidelity", r.semantic_fidelity},
            {"trials_run", r.trials_run},
            {"trial_cnots", r.trial_cnots}};
}

inline nlohmann::json to_json(const PassConfig& c) {
    nlohmann::json basis = nlohmann::json::array();
    for (GateType t : c.basis.kinds()) basis.push_back(std::string(gate_name(t)));
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : c.coupling.edges()) edges.push_back({e.first, e.second});
    nlohmann::json j = {{"optimization_level", c.optimization_level},
                        {"seed", c.seed},
                        {"max_trials", c.max_trials},
                        {"basis", basis},
                        {"coupling", {{"num_qubits", c.coupling.num_qubits()}, {"edges", edges}}}};
    if (c.initial_layout) j["initial_layout"] = *c.initial_layout;
    if (c.sample_layout) j["sample_layout"] = true;
    return j;
}

/// Parses a PassConfig; every field is optional and unknown fields are rejected.
inline PassConfig pass_config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("pass config must be a JSON object");
    PassConfig c;
    try {
        for (const auto& [k, v] : j.items()) {
            if (k == "optimization_level") c.optimization_level = v.get<int>();
            else if (k == "seed") c.seed = v.get<std::uint64_t>();
            else if (k == "max_trials") c.max_trials = v.get<int>();
            else if (k == "basis") {
                std::vector<GateType> kinds;
                for (const auto& name : v) {
                    const auto t = gate_type_from_name(name.get<std::string>());
                    if (!t) throw InputError("unknown gate kind '" + name.get<std::string>() + "' in basis");
                    kinds.push_back(*t);
                }
                c.basis = BasisGateSet(std::set<GateType>(kinds.begin(), kinds.end()));
            } else if (k == "coupling") {
                std::vector<Edge> edges;
                for (const auto& e : v.at("edges")) edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
                c.coupling = CouplingMap(v.at("num_qubits").get<int>(), edges);
            } else if (k == "initial_layout") {
                c.initial_layout = v.get<std::vector<int>>();
            } else if (k == "sample_layout") {
                c.sample_layout = v.get<bool>();
            } else {
                throw InputError("unknown pass config field '" + k + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("pass config: ") + e.what());
    }
    c.check();
    return c;
}

}  // namespace qcflate
