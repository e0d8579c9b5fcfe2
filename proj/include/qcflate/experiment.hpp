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
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcflate/calibration.hpp"
#include "qcflate/compression.hpp"
#include "qcflate/simulator.hpp"
#include "qcflate/tomography.hpp"
#include "qcflate/transpiler/transpile.hpp"

namespace qcflate {

enum class ExperimentKind { Compression, CompDecomp };
enum class Backend { Triangle, Line };
enum class Strategy { Default, Efficient };

inline std::string_view kind_name(ExperimentKind k) { return k == ExperimentKind::Compression ? "compression" : "compdecomp"; }
inline std::string_view backend_name(Backend b) { return b == Backend::Triangle ? "triangle" : "line"; }
inline std::string_view strategy_name(Strategy s) { return s == Strategy::Default ? "default" : "efficient"; }

inline ExperimentKind kind_from_name(std::string_view s) {
    if (s == "compression") return ExperimentKind::Compression;
    if (s == "compdecomp") return ExperimentKind::CompDecomp;
    throw InputError("unknown experiment '" + std::string(s) + "' (expected compression or compdecomp)");
}
inline Backend backend_from_name(std::string_view s) {
    if (s == "triangle") return Backend::Triangle;
    if (s == "line") return Backend::Line;
    throw InputError("unknown backend '" + std::string(s) + "' (expected triangle or line)");
}
inline Strategy strategy_from_name(std::string_view s) {
    if (s == "default") return Strategy::Default;
    if (s == "efficient") return Strategy::Efficient;
    throw InputError("unknown strategy '" + std::string(s) + "' (expected default or efficient)");
}

inline CouplingMap backend_coupling(Backend b) { return b == Backend::Triangle ? CouplingMap::triangle3() : CouplingMap::line3(); }

/// "ALL" or a comma-separated list of label names.
inline std::vector<InputState> parse_labels(std::string_view spec) {
    if (spec == "ALL" || spec.empty()) return {kAllInputStates.begin(), kAllInputStates.end()};
    std::vector<InputState> out;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t end = std::min(spec.find(',', start), spec.size());
        const auto name = spec.substr(start, end - start);
        const auto l = label_from_name(name);
        if (!l) throw InputError("unknown label '" + std::string(name) + "'");
        if (std::find(out.begin(), out.end(), *l) == out.end()) out.push_back(*l);
        start = end + 1;
    }
    return out;
}

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::CompDecomp;
    std::vector<InputState> labels{kAllInputStates.begin(), kAllInputStates.end()};
    Backend backend = Backend::Triangle;
    Strategy strategy = Strategy::Efficient;
    std::optional<CalibrationData> calibration;  // noisy simulation when present
    std::uint64_t shots = 8192;
    int runs = 10;
    std::uint64_t seed = 0;
    int trials = 100;
    bool paper_angles = false;
    bool idle_decay = true;

    void check() const {
        if (shots < 1) throw InputError("shots must be at least 1");
        if (runs < 1) throw InputError("runs must be at least 1");
        if (trials < 1) throw InputError("trials must be at least 1");
        if (labels.empty()) throw InputError("no labels selected");
    }

    [[nodiscard]] CompressionAngles angles() const { return paper_angles ? printed_angles() : compression_angles(); }
};

/// Transpiled circuit for the part of an experiment that does not depend on
/// the input label.
struct TranspiledCore {
    Circuit circuit;
    TranspileReport report;
};

/// Transpiles the compression circuit (or compression, reset, decompression)
/// for the backend. The efficient comp+decomp circuit is the efficient
/// compression followed by a reset of the discarded qubit and its own adjoint.
inline TranspiledCore transpile_core(ExperimentKind kind, Backend backend, Strategy strategy, const CompressionAngles& a,
                                     std::uint64_t seed, int trials,
                                     const std::optional<CalibrationData>& calibration = std::nullopt) {
    PassConfig cfg;
    cfg.coupling = backend_coupling(backend);
    cfg.seed = seed;
    cfg.max_trials = trials;
    cfg.calibration = calibration;
    const Circuit comp = build_compression_circuit(a);
    if (kind == ExperimentKind::Compression) {
        auto [c, r] = strategy == Strategy::Efficient ? transpile_efficient(comp, cfg) : transpile_default(comp, cfg);
        return {std::move(c), std::move(r)};
    }
    const Circuit source = build_compdecomp_core(a);
    if (strategy == Strategy::Default) {
        auto [c, r] = transpile_default(source, cfg);
        return {std::move(c), std::move(r)};
    }
    auto [t, r] = transpile_efficient(comp, cfg);
    Circuit c(t.num_qubits());
    c.extend(t);
    c.reset(r.layout.final_layout[2]);
    c.extend(adjoint(t));
    c = optimize(c, 1);
    TranspileReport rep = r;
    rep.layout.final_layout = rep.layout.initial;
    rep.counts = gate_counts(c);
    rep.depth = depth(c);
    rep.trial_cnots.clear();
    rep.semantic_fidelity = semantic_fidelity(source, c, rep.layout);
    if (rep.semantic_fidelity < 1.0 - kSemanticTolerance)
        throw NumericalError("transpile_core: comp+decomp semantic fidelity below tolerance");
    return {std::move(c), std::move(rep)};
}

/// Device circuit for one comp+decomp shot: prep on the initial placement,
/// the core, inverse prep and measurement where the logical qubits ended up.
/// Logical qubit l is read into clbit l.
inline Circuit physical_compdecomp(const TranspiledCore& core, InputState label) {
    const auto& lay = core.report.layout;
    const Gate prep = prep_unitary(label);
    const int width = core.circuit.num_qubits();
    Circuit c(width, 3);
    for (int l = 0; l < 3; ++l) c.append(prep, {lay.initial[static_cast<std::size_t>(l)]});
    c.barrier();
    c.extend(core.circuit);
    c.barrier();
    c.extend(apply_layout(adjoint(prep_layer(prep)), lay.final_layout, width));
    for (int l = 0; l < 3; ++l) c.measure(lay.final_layout[static_cast<std::size_t>(l)], l);
    return optimize(lower_to_basis(c), 1);
}

/// Device circuits for the nine tomography settings of the compressed pair.
inline std::vector<Circuit> physical_compression(const TranspiledCore& core, InputState label) {
    const auto& lay = core.report.layout;
    const Gate prep = prep_unitary(label);
    std::vector<Circuit> out;
    for (const auto& s : tomography_settings()) {
        Circuit c(core.circuit.num_qubits(), 2);
        for (int l = 0; l < 3; ++l) c.append(prep, {lay.initial[static_cast<std::size_t>(l)]});
        c.barrier();
        c.extend(core.circuit);
        c.barrier();
        append_setting(c, s, lay.final_layout[0], lay.final_layout[1]);
        out.push_back(optimize(lower_to_basis(c), 1));
    }
    return out;
}

struct LabelResult {
    InputState label = InputState::Zero;
    double ideal_fidelity = 0.0;               // exact, noiseless
    std::optional<double> noisy_fidelity;      // exact, with the calibration
    double fidelity_mean = 0.0;                // over sampled runs
    double fidelity_std = 0.0;                 // population standard deviation
    std::vector<double> run_fidelities;
    GateCounts physical_counts;                // of the (first) device circuit
};

struct ExperimentReport {
    ExperimentConfig config;
    TranspileReport transpile;
    std::vector<LabelResult> rows;
};

namespace experiment_detail {

/// Clbit distribution before readout error.
inline std::vector<double> exact_distribution(const Circuit& c, const NoiseModel* noise) {
    return measurement_distribution(c, run_density(c, noise).probabilities());
}

inline double compdecomp_fidelity(const std::vector<double>& dist) { return std::clamp(dist.front(), 0.0, 1.0); }

inline double compression_fidelity(const SettingProbabilities& probs, const StateVector& target) {
    return std::clamp(fidelity_report(linear_inversion(expectation_values(probs)), target), 0.0, 1.0);
}

inline std::array<double, 4> as_array(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return {m, std::sqrt(v / static_cast<double>(xs.size()))};
}

}  // namespace experiment_detail

/// Simulates one label on an already transpiled core.
inline LabelResult evaluate_label(const ExperimentConfig& cfg, const TranspiledCore& core, InputState label) {
    using namespace experiment_detail;
    std::optional<NoiseModel> noise;
    if (cfg.calibration) noise = NoiseModel{*cfg.calibration, 1.0, cfg.idle_decay};
    const NoiseModel* nm = noise ? &*noise : nullptr;
    // Seeds depend on the label itself, not on its position in the list.
    const std::uint64_t base = split_seed(cfg.seed, 1 + static_cast<std::uint64_t>(label));

    LabelResult r;
    r.label = label;
    if (cfg.experiment == ExperimentKind::CompDecomp) {
        const Circuit c = physical_compdecomp(core, label);
        r.physical_counts = gate_counts(c);
        r.ideal_fidelity = compdecomp_fidelity(exact_distribution(c, nullptr));
        std::vector<double> dist = exact_distribution(c, nm);
        std::vector<ReadoutError> ro;
        if (nm) {
            ro = readout_errors(c, nm->calibration);
            r.noisy_fidelity = compdecomp_fidelity(apply_readout(dist, ro));
        }
        for (int run = 0; run < cfg.runs; ++run) {
            const auto shots = sample_shots(dist, ro, cfg.shots, split_seed(base, static_cast<std::uint64_t>(run)));
            r.run_fidelities.push_back(shots.frequency("000"));
        }
    } else {
        const StateVector target = ideal_compressed_state(prep_unitary(label));
        const auto circuits = physical_compression(core, label);
        r.physical_counts = gate_counts(circuits.front());
        const auto& settings = tomography_settings();
        SettingProbabilities ideal, noisy;
        std::vector<std::vector<double>> dists;
        std::vector<std::vector<ReadoutError>> ros;
        for (std::size_t k = 0; k < circuits.size(); ++k) {
            const auto& s = settings[k];
            ideal[s.label()] = as_array(exact_distribution(circuits[k], nullptr));
            dists.push_back(exact_distribution(circuits[k], nm));
            ros.push_back(nm ? readout_errors(circuits[k], nm->calibration) : std::vector<ReadoutError>{});
            noisy[s.label()] = as_array(apply_readout(dists.back(), ros.back()));
        }
        r.ideal_fidelity = compression_fidelity(ideal, target);
        if (nm) r.noisy_fidelity = compression_fidelity(noisy, target);
        for (int run = 0; run < cfg.runs; ++run) {
            SettingProbabilities sampled;
            for (std::size_t k = 0; k < circuits.size(); ++k) {
                const std::uint64_t seed = split_seed(base, static_cast<std::uint64_t>(run) * settings.size() + k);
                const auto shots = sample_shots(dists[k], ros[k], cfg.shots, seed);
                std::array<double, 4> p{};
                for (std::size_t i = 0; i < 4; ++i) p[i] = shots.frequency(bitstring(i, 2));
                sampled[settings[k].label()] = p;
            }
            r.run_fidelities.push_back(compression_fidelity(sampled, target));
        }
    }
    std::tie(r.fidelity_mean, r.fidelity_std) = mean_std(r.run_fidelities);
    return r;
}

inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    cfg.check();
    ExperimentReport rep;
    rep.config = cfg;
    const TranspiledCore core =
        transpile_core(cfg.experiment, cfg.backend, cfg.strategy, cfg.angles(), cfg.seed, cfg.trials, cfg.calibration);
    rep.transpile = core.report;
    for (InputState l : cfg.labels) rep.rows.push_back(evaluate_label(cfg, core, l));
    return rep;
}

// ---------------------------------------------------------------------------
// Output

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline nlohmann::json to_json(const ExperimentReport& r) {
    const auto& c = r.config;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json counts = nlohmann::json::object();
        for (const auto& [k, v] : row.physical_counts) counts[k] = v;
        rows.push_back({{"experiment", kind_name(c.experiment)},
                        {"label", label_name(row.label)},
                        {"strategy", strategy_name(c.strategy)},
                        {"backend", backend_name(c.backend)},
                        {"ideal_fidelity", row.ideal_fidelity},
                        {"noisy_fidelity", row.noisy_fidelity ? nlohmann::json(*row.noisy_fidelity) : nlohmann::json()},
                        {"fidelity_mean", row.fidelity_mean},
                        {"fidelity_std", row.fidelity_std},
                        {"run_fidelities", row.run_fidelities},
                        {"physical_counts", counts}});
    }
    return {{"experiment", kind_name(c.experiment)},
            {"backend", backend_name(c.backend)},
            {"strategy", strategy_name(c.strategy)},
            {"calibration", c.calibration ? nlohmann::json(c.calibration->backend) : nlohmann::json()},
            {"seed", c.seed},
            {"shots", c.shots},
            {"runs", c.runs},
            {"trials", c.trials},
            {"paper_angles", c.paper_angles},
            {"transpile", to_json(r.transpile)},
            {"rows", rows}};
}

/// Plot table: one line per row of a report (or merged report).
inline std::string to_csv(const nlohmann::json& report) {
    std::ostringstream out;
    out << "label,strategy,backend,fidelity_mean,fidelity_std\n";
    for (const auto& row : report.at("rows"))
        out << row.at("label").get<std::string>() << ',' << row.at("strategy").get<std::string>() << ','
            << row.at("backend").get<std::string>() << ',' << format_number(row.at("fidelity_mean").get<double>())
            << ',' << format_number(row.at("fidelity_std").get<double>()) << '\n';
    return out.str();
}

/// Concatenates the rows of several reports in a fixed order (experiment,
/// backend, strategy, label) so the result does not depend on input order.
inline nlohmann::json merge_reports(const std::vector<nlohmann::json>& reports) {
    std::vector<nlohmann::json> rows;
    for (const auto& r : reports) {
        if (!r.is_object() || !r.contains("rows") || !r.at("rows").is_array())
            throw InputError("report merge: input is not an experiment report");
        for (const auto& row : r.at("rows")) rows.push_back(row);
    }
    auto key = [](const nlohmann::json& row) {
        const auto l = label_from_name(row.at("label").get<std::string>());
        if (!l) throw InputError("report merge: unknown label " + row.at("label").dump());
        return std::make_tuple(row.value("experiment", std::string()), row.at("backend").get<std::string>(),
                               row.at("strategy").get<std::string>(), static_cast<int>(*l));
    };
    try {
        std::stable_sort(rows.begin(), rows.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("report merge: ") + e.what());
    }
    return {{"rows", rows}, {"sources", reports.size()}};
}

}  // namespace qcflate
