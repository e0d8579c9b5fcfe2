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

// Device calibration: per-qubit coherence and readout figures, a shared
// single-qubit gate entry, and one CNOT entry per coupling edge.
//
//   {"backend": "bogota-like",
//    "qubits": [{"t1_us": 100, "t2_us": 120, "readout_p01": 0.02, "readout_p10": 0.01}, ...],
//    "gates_1q": {"duration_ns": 35.5, "depolarizing": 3e-4},
//    "cnot": [{"edge": [0, 1], "duration_ns": 400, "depolarizing": 8e-3}, ...],
//    "reset_error": 0.0}
//
// readout_p10 is P(read 1 | prepared 0) and readout_p01 is P(read 0 | prepared 1).

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "qcflate/error.hpp"
#include "qcflate/hardware.hpp"

namespace qcflate {

struct QubitCalibration {
    double t1_us = 0.0;
    double t2_us = 0.0;
    double readout_p01 = 0.0;
    double readout_p10 = 0.0;
};

struct GateCalibration {
    double duration_ns = 0.0;
    double depolarizing = 0.0;
};

struct EdgeCalibration {
    Edge edge;
    double duration_ns = 0.0;
    double depolarizing = 0.0;
};

struct CalibrationData {
    std::string backend;
    std::vector<QubitCalibration> qubits;
    GateCalibration gates_1q;
    std::vector<EdgeCalibration> cnot;
    double reset_error = 0.0;

    [[nodiscard]] int num_qubits() const { return static_cast<int>(qubits.size()); }

    [[nodiscard]] const EdgeCalibration* find_edge(int a, int b) const {
        const Edge e = make_edge(a, b);
        for (const auto& c : cnot)
            if (c.edge == e) return &c;
        return nullptr;
    }

    [[nodiscard]] const QubitCalibration& qubit(int q) const {
        if (q < 0 || q >= num_qubits())
            throw ValidationError("calibration has no entry for qubit " + std::to_string(q));
        return qubits[static_cast<std::size_t>(q)];
    }

    [[nodiscard]] const EdgeCalibration& edge(int a, int b) const {
        if (const auto* e = find_edge(a, b)) return *e;
        throw ValidationError("calibration has no cnot entry for edge (" + std::to_string(std::min(a, b)) + "," +
                              std::to_string(std::max(a, b)) + ")");
    }
};

/// One finding from calibration checking. `line` is 1-based (0 if unknown).
struct Diagnostic {
    std::string pointer;
    int line = 0;
    std::string message;

    [[nodiscard]] std::string str() const {
        std::string out = "line " + std::to_string(line);
        if (!pointer.empty()) out += " (" + pointer + ")";
        return out + ": " + message;
    }
};

namespace detail {

/// Maps JSON pointers of a syntactically valid document to the line where
/// each value starts.
class JsonLineIndex {
public:
    explicit JsonLineIndex(std::string_view text) : s_(text) {
        skip();
        value("");
    }

    [[nodiscard]] int line_of(const std::string& pointer) const {
        // Fall back to the closest enclosing value.
        std::string p = pointer;
        while (true) {
            if (auto it = lines_.find(p); it != lines_.end()) return it->second;
            if (p.empty()) return 1;
            p.erase(p.rfind('/'));
        }
    }

private:
    void skip() {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\n' || s_[i_] == '\r')) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }

    std::string string_token() {
        std::string out;
        ++i_;  // opening quote
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\' && i_ + 1 < s_.size()) ++i_;
            out += s_[i_++];
        }
        ++i_;
        return out;
    }

    static std::string escape(const std::string& key) {
        std::string out;
        for (char c : key) {
            if (c == '~') out += "~0";
            else if (c == '/') out += "~1";
            else out += c;
        }
        return out;
    }

    void value(const std::string& ptr) {
        if (i_ >= s_.size()) return;
        lines_.emplace(ptr, line_);
        const char c = s_[i_];
        if (c == '{') {
            ++i_;
            skip();
            while (i_ < s_.size() && s_[i_] != '}') {
                const std::string key = string_token();
                skip();
                ++i_;  // colon
                skip();
                value(ptr + "/" + escape(key));
                skip();
                if (i_ < s_.size() && s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (c == '[') {
            ++i_;
            skip();
            for (int k = 0; i_ < s_.size() && s_[i_] != ']'; ++k) {
                value(ptr + "/" + std::to_string(k));
                skip();
                if (i_ < s_.size() && s_[i_] == ',') ++i_;
                skip();
            }
            ++i_;
        } else if (c == '"') {
            string_token();
        } else {
            while (i_ < s_.size() && std::string_view(",]} \t\r\n").find(s_[i_]) == std::string_view::npos) ++i_;
        }
    }

    std::string_view s_;
    std::size_t i_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;
};

class CalibrationChecker {
public:
    CalibrationChecker(const nlohmann::json& doc, const JsonLineIndex& index) : doc_(doc), index_(index) {}

    std::vector<Diagnostic> diagnostics;

    void report(const std::string& ptr, const std::string& msg) {
        diagnostics.push_back({ptr.empty() ? "/" : ptr, index_.line_of(ptr), msg});
    }

    void only_fields(const nlohmann::json& obj, const std::string& ptr, const std::set<std::string>& allowed) {
        for (const auto& [k, v] : obj.items())
            if (!allowed.count(k)) report(ptr + "/" + k, "unknown field '" + k + "'");
        for (const auto& k : allowed)
            if (!obj.contains(k) && k != "reset_error") report(ptr, "missing field '" + k + "'");
    }

    std::optional<double> number(const nlohmann::json& obj, const std::string& ptr, const std::string& key) {
        if (!obj.contains(key)) return std::nullopt;
        const auto& v = obj.at(key);
        if (!v.is_number()) {
            report(ptr + "/" + key, "'" + key + "' must be a number");
            return std::nullopt;
        }
        return v.get<double>();
    }

    void probability(const std::string& ptr, const std::string& key, std::optional<double> v) {
        if (v && !(*v >= 0.0 && *v <= 1.0)) report(ptr + "/" + key, "'" + key + "' must lie in [0, 1]");
    }

    void duration(const std::string& ptr, std::optional<double> v) {
        if (v && !(*v >= 0.0)) report(ptr + "/duration_ns", "'duration_ns' must be non-negative");
    }

    CalibrationData run() {
        CalibrationData out;
        if (!doc_.is_object()) {
            report("", "calibration must be a JSON object");
            return out;
        }
        only_fields(doc_, "", {"backend", "qubits", "gates_1q", "cnot", "reset_error"});

        if (doc_.contains("backend")) {
            if (doc_["backend"].is_string()) out.backend = doc_["backend"].get<std::string>();
            else report("/backend", "'backend' must be a string");
        }

        if (doc_.contains("qubits")) {
            const auto& qs = doc_["qubits"];
            if (!qs.is_array() || qs.empty()) report("/qubits", "'qubits' must be a non-empty array");
            else
                for (std::size_t i = 0; i < qs.size(); ++i) out.qubits.push_back(qubit(qs[i], "/qubits/" + std::to_string(i)));
        }

        if (doc_.contains("gates_1q")) {
            const auto& g = doc_["gates_1q"];
            if (!g.is_object()) report("/gates_1q", "'gates_1q' must be an object");
            else {
                only_fields(g, "/gates_1q", {"duration_ns", "depolarizing"});
                const auto d = number(g, "/gates_1q", "duration_ns");
                const auto p = number(g, "/gates_1q", "depolarizing");
                duration("/gates_1q", d);
                probability("/gates_1q", "depolarizing", p);
                out.gates_1q = {d.value_or(0.0), p.value_or(0.0)};
            }
        }

        if (doc_.contains("cnot")) {
            const auto& cs = doc_["cnot"];
            if (!cs.is_array()) report("/cnot", "'cnot' must be an array");
            else
                for (std::size_t i = 0; i < cs.size(); ++i) {
                    const std::string ptr = "/cnot/" + std::to_string(i);
                    if (auto e = edge_entry(cs[i], ptr, out.num_qubits())) {
                        if (out.find_edge(e->edge.first, e->edge.second))
                            report(ptr + "/edge", "duplicate cnot entry for edge " + edge_text(e->edge));
                        else out.cnot.push_back(*e);
                    }
                }
        }

        if (auto r = number(doc_, "", "reset_error")) {
            probability("", "reset_error", r);
            out.reset_error = *r;
        }
        return out;
    }

    static std::string edge_text(const Edge& e) {
        return "(" + std::to_string(e.first) + "," + std::to_string(e.second) + ")";
    }

private:
    QubitCalibration qubit(const nlohmann::json& q, const std::string& ptr) {
        QubitCalibration out;
        if (!q.is_object()) {
            report(ptr, "qubit entry must be an object");
            return out;
        }
        only_fields(q, ptr, {"t1_us", "t2_us", "readout_p01", "readout_p10"});
        const auto t1 = number(q, ptr, "t1_us");
        const auto t2 = number(q, ptr, "t2_us");
        const auto p01 = number(q, ptr, "readout_p01");
        const auto p10 = number(q, ptr, "readout_p10");
        if (t1 && !(*t1 > 0.0)) report(ptr + "/t1_us", "T1 must be positive");
        if (t2 && !(*t2 > 0.0)) report(ptr + "/t2_us", "T2 must be positive");
        if (t1 && t2 && *t1 > 0.0 && *t2 > 2.0 * *t1)
            report(ptr + "/t2_us", "T2 must not exceed 2*T1 (T2 = " + nlohmann::json(*t2).dump() +
                                       ", T1 = " + nlohmann::json(*t1).dump() + ")");
        probability(ptr, "readout_p01", p01);
        probability(ptr, "readout_p10", p10);
        out.t1_us = t1.value_or(0.0);
        out.t2_us = t2.value_or(0.0);
        out.readout_p01 = p01.value_or(0.0);
        out.readout_p10 = p10.value_or(0.0);
        return out;
    }

    std::optional<EdgeCalibration> edge_entry(const nlohmann::json& c, const std::string& ptr, int nq) {
        if (!c.is_object()) {
            report(ptr, "cnot entry must be an object");
            return std::nullopt;
        }
        only_fields(c, ptr, {"edge", "duration_ns", "depolarizing"});
        const auto d = number(c, ptr, "duration_ns");
        const auto p = number(c, ptr, "depolarizing");
        duration(ptr, d);
        probability(ptr, "depolarizing", p);
        if (!c.contains("edge")) return std::nullopt;
        const auto& e = c["edge"];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
            report(ptr + "/edge", "'edge' must be a pair of qubit indices");
            return std::nullopt;
        }
        const int a = e[0].get<int>(), b = e[1].get<int>();
        if (a < 0 || b < 0 || a >= nq || b >= nq || a == b) {
            report(ptr + "/edge", "edge (" + std::to_string(a) + "," + std::to_string(b) +
                                      ") does not join two distinct calibrated qubits");
            return std::nullopt;
        }
        return EdgeCalibration{make_edge(a, b), d.value_or(0.0), p.value_or(0.0)};
    }

    const nlohmann::json& doc_;
    const JsonLineIndex& index_;
};

inline int line_at_offset(std::string_view text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < std::min(offset, text.size()); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace detail

struct CalibrationCheck {
    std::optional<CalibrationData> data;  // set only when no diagnostics were raised
    std::vector<Diagnostic> diagnostics;
    bool syntax_error = false;

    [[nodiscard]] bool ok() const { return diagnostics.empty(); }
};

/// Checks schema and invariants. When `cm` is given, every coupling edge must
/// have a CNOT entry and every coupled qubit must be calibrated.
inline CalibrationCheck check_calibration(std::string_view text, const CouplingMap* cm = nullptr) {
    CalibrationCheck out;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        out.syntax_error = true;
        out.diagnostics.push_back({"", detail::line_at_offset(text, e.byte > 0 ? e.byte - 1 : 0),
                                   std::string("invalid JSON: ") + e.what()});
        return out;
    }
    const detail::JsonLineIndex index(text);
    detail::CalibrationChecker checker(doc, index);
    CalibrationData data = checker.run();
    if (cm && checker.diagnostics.empty()) {
        if (data.num_qubits() < cm->num_qubits())
            checker.report("/qubits", "coupling map uses " + std::to_string(cm->num_qubits()) +
                                          " qubits but only " + std::to_string(data.num_qubits()) + " are calibrated");
        for (const auto& e : cm->edges())
            if (!data.find_edge(e.first, e.second))
                checker.report("/cnot", "missing cnot entry for coupling edge " + detail::CalibrationChecker::edge_text(e));
    }
    out.diagnostics = std::move(checker.diagnostics);
    if (out.diagnostics.empty()) out.data = std::move(data);
    return out;
}

inline std::string join_diagnostics(const std::vector<Diagnostic>& ds) {
    std::string out;
    for (const auto& d : ds) out += (out.empty() ? "" : "\n") + d.str();
    return out;
}

/// Throws InputError on malformed JSON and ValidationError on schema or
/// invariant violations.
inline CalibrationData parse_calibration(std::string_view text, const CouplingMap* cm = nullptr) {
    auto check = check_calibration(text, cm);
    if (check.syntax_error) throw InputError(join_diagnostics(check.diagnostics));
    if (!check.ok()) throw ValidationError(join_diagnostics(check.diagnostics));
    return std::move(*check.data);
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline CalibrationData load_calibration(const std::string& path, const CouplingMap* cm = nullptr) {
    return parse_calibration(read_text_file(path), cm);
}

inline nlohmann::json to_json(const CalibrationData& c) {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& q : c.qubits)
        qs.push_back({{"t1_us", q.t1_us}, {"t2_us", q.t2_us}, {"readout_p01", q.readout_p01}, {"readout_p10", q.readout_p10}});
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& e : c.cnot)
        cs.push_back({{"edge", {e.edge.first, e.edge.second}}, {"duration_ns", e.duration_ns}, {"depolarizing", e.depolarizing}});
    return {{"backend", c.backend},
            {"qubits", qs},
            {"gates_1q", {{"duration_ns", c.gates_1q.duration_ns}, {"depolarizing", c.gates_1q.depolarizing}}},
            {"cnot", cs},
            {"reset_error", c.reset_error}};
}

}  // namespace qcflate
