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


// qcflate: transpile the compression circuits, run simulated experiments,
// check calibration files and merge reports.
//
// Exit codes: 0 ok, 2 bad input, 3 validation failure, 4 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qcflate/calibration.hpp"
#include "qcflate/error.hpp"
#include "qcflate/experiment.hpp"
#include "qcflate/qasm.hpp"
#include "qcflate/transpiler/transpile.hpp"

namespace fs = std::filesystem;
using namespace qcflate;

namespace {

constexpr int kExitInput = 2;
constexpr int kExitValidation = 3;
constexpr int kExitNumerical = 4;

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    if (const char* env = std::getenv("QCFLATE_SEED")) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) return v;
        } catch (const std::exception&) {
        }
        throw InputError(std::string("QCFLATE_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

std::optional<CalibrationData> calibration_for(const std::string& path, Backend backend) {
    if (path.empty() || path == "NONE") return std::nullopt;
    const CouplingMap cm = backend_coupling(backend);
    return load_calibration(path, &cm);
}

struct TranspileArgs {
    std::string input;
    std::string backend = "triangle";
    std::string strategy = "efficient";
    std::string calibration;
    std::optional<std::uint64_t> seed;
    int trials = 100;
    bool paper_angles = false;
    std::string out = ".";
};

int cmd_transpile(const TranspileArgs& a) {
    const Backend backend = backend_from_name(a.backend);
    const Strategy strategy = strategy_from_name(a.strategy);
    Circuit source(3);
    if (a.input.empty() || a.input == "compression") {
        source = build_compression_circuit(a.paper_angles ? printed_angles() : compression_angles());
    } else {
        source = qasm::read(read_text_file(a.input));
    }
    PassConfig cfg;
    cfg.coupling = backend_coupling(backend);
    cfg.seed = resolve_seed(a.seed);
    cfg.max_trials = a.trials;
    cfg.calibration = calibration_for(a.calibration, backend);
    auto [out, rep] = strategy == Strategy::Efficient ? transpile_efficient(source, cfg) : transpile_default(source, cfg);

    const fs::path dir(a.out);
    write_file(dir / "transpiled.qasm", qasm::write(out));
    write_file(dir / "transpile_report.json", to_json(rep).dump(2) + "\n");
    std::cout << "CNOT " << rep.cnots() << ", Rz " << count_of(rep.counts, GateType::Rz) << ", SX "
              << count_of(rep.counts, GateType::SX) << ", depth " << rep.depth << " -> " << dir.string() << "\n";
    return 0;
}

struct ExperimentArgs {
    std::string experiment = "compdecomp";
    std::string label = "ALL";
    std::string backend = "triangle";
    std::string strategy = "efficient";
    std::string calibration;
    std::uint64_t shots = 8192;
    int runs = 10;
    std::optional<std::uint64_t> seed;
    int trials = 100;
    bool paper_angles = false;
    std::string out = ".";
};

int cmd_experiment(const ExperimentArgs& a) {
    ExperimentConfig cfg;
    cfg.experiment = kind_from_name(a.experiment);
    cfg.labels = parse_labels(a.label);
    cfg.backend = backend_from_name(a.backend);
    cfg.strategy = strategy_from_name(a.strategy);
    cfg.calibration = calibration_for(a.calibration, cfg.backend);
    cfg.shots = a.shots;
    cfg.runs = a.runs;
    cfg.seed = resolve_seed(a.seed);
    cfg.trials = a.trials;
    cfg.paper_angles = a.paper_angles;
    const auto json = to_json(run_experiment(cfg));

    const fs::path dir(a.out);
    write_file(dir / "report.json", json.dump(2) + "\n");
    write_file(dir / "report.csv", to_csv(json));
    std::cout << to_csv(json);
    return 0;
}

int cmd_calibration_validate(const std::string& path, const std::string& backend) {
    std::optional<CouplingMap> cm;
    if (!backend.empty()) cm = backend_coupling(backend_from_name(backend));
    const auto check = check_calibration(read_text_file(path), cm ? &*cm : nullptr);
    if (check.diagnostics.empty()) {
        std::cout << path << ": valid\n";
        return 0;
    }
    for (const auto& d : check.diagnostics) std::cerr << path << ": " << d.str() << "\n";
    return kExitInput;
}

int cmd_report_merge(const std::vector<std::string>& inputs, const std::string& out) {
    std::vector<nlohmann::json> reports;
    for (const auto& p : inputs) {
        try {
            reports.push_back(nlohmann::json::parse(read_text_file(p)));
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError(p + ": " + e.what());
        }
    }
    const auto merged = merge_reports(reports);
    const fs::path dir(out);
    write_file(dir / "merged.json", merged.dump(2) + "\n");
    write_file(dir / "merged.csv", to_csv(merged));
    std::cout << to_csv(merged);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qcflate: three-to-two qubit compression on small devices"};
    app.require_subcommand(1);

    TranspileArgs ta;
    auto* tr = app.add_subcommand("transpile", "Transpile a circuit (QASM file, or the built-in compression circuit)");
    tr->add_option("input", ta.input, "Input circuit; omit or 'compression' for the built-in one");
    tr->add_option("--backend", ta.backend, "triangle | line")->check(CLI::IsMember({"triangle", "line"}));
    tr->add_option("--strategy", ta.strategy, "default | efficient")->check(CLI::IsMember({"default", "efficient"}));
    tr->add_option("--calibration", ta.calibration, "Calibration JSON used for error-aware layout");
    tr->add_option("--seed", ta.seed, "Base seed (falls back to QCFLATE_SEED, then 0)");
    tr->add_option("--trials", ta.trials, "Stochastic trials; the best is kept")->check(CLI::PositiveNumber);
    tr->add_flag("--paper-angles", ta.paper_angles, "Use the printed angles 1.91 and 1.23");
    tr->add_option("--out", ta.out, "Output directory");

    ExperimentArgs ea;
    auto* ex = app.add_subcommand("experiment", "Simulate the compression or compression/decompression experiment");
    ex->add_option("--experiment", ea.experiment, "compression | compdecomp")
        ->check(CLI::IsMember({"compression", "compdecomp"}));
    ex->add_option("--label", ea.label, "ALL or comma-separated ZERO,ONE,PLUS,MINUS,Y_PLUS,Y_MINUS");
    ex->add_option("--backend", ea.backend, "triangle | line")->check(CLI::IsMember({"triangle", "line"}));
    ex->add_option("--strategy", ea.strategy, "default | efficient")->check(CLI::IsMember({"default", "efficient"}));
    ex->add_option("--calibration", ea.calibration, "Calibration JSON; noisy simulation when given");
    ex->add_option("--shots", ea.shots, "Shots per run (per setting for tomography)")->check(CLI::PositiveNumber);
    ex->add_option("--runs", ea.runs, "Repeated runs for mean and standard deviation")->check(CLI::PositiveNumber);
    ex->add_option("--seed", ea.seed, "Base seed (falls back to QCFLATE_SEED, then 0)");
    ex->add_option("--trials", ea.trials, "Transpiler trials")->check(CLI::PositiveNumber);
    ex->add_flag("--paper-angles", ea.paper_angles, "Use the printed angles 1.91 and 1.23");
    ex->add_option("--out", ea.out, "Output directory");

    std::string cal_path, cal_backend;
    auto* cal = app.add_subcommand("calibration", "Calibration file tools");
    cal->require_subcommand(1);
    auto* val = cal->add_subcommand("validate", "Check a calibration file");
    val->add_option("path", cal_path, "Calibration JSON")->required();
    val->add_option("--backend", cal_backend, "Also require a CNOT entry for every edge of this backend")
        ->check(CLI::IsMember({"triangle", "line"}));

    std::vector<std::string> merge_inputs;
    std::string merge_out = ".";
    auto* rep = app.add_subcommand("report", "Report tools");
    rep->require_subcommand(1);
    auto* merge = rep->add_subcommand("merge", "Merge experiment reports into one table");
    merge->add_option("reports", merge_inputs, "report.json files")->required();
    merge->add_option("--out", merge_out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (*tr) return cmd_transpile(ta);
        if (*ex) return cmd_experiment(ea);
        if (*val) return cmd_calibration_validate(cal_path, cal_backend);
        if (*merge) return cmd_report_merge(merge_inputs, merge_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return 0;
}
