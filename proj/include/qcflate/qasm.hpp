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

// Line-oriented text format for circuits:
//
//   qasm2-subset
//   qubits 3
//   clbits 2
//   cx q[0] q[1]
//   u3 q[2] (1.9106332362490186, 3.1415926535897931, 3.1415926535897931)
//   measure q[0] c[0]
//
// Qubit 0 is the least-significant bit of every basis-state index. Blank
// lines and lines starting with '#' are ignored.

#include <cstdio>
#include <optional>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qcflate/circuit.hpp"

namespace qcflate::qasm {

inline constexpr std::string_view kHeader = "qasm2-subset";

inline std::string_view token_for(GateType t) {
    switch (t) {
        case GateType::U3: return "u3";
        case GateType::Rz: return "rz";
        case GateType::SX: return "sx";
        case GateType::X: return "x";
        case GateType::H: return "h";
        case GateType::CNOT: return "cx";
        case GateType::CH: return "ch";
        case GateType::CCX: return "ccx";
        case GateType::CU3: return "cu3";
        case GateType::SWAP: return "swap";
        case GateType::Measure: return "measure";
        case GateType::Reset: return "reset";
        case GateType::Barrier: return "barrier";
    }
    return "?";
}

/// Angle text with 17 significant digits, enough to round-trip a double.
inline std::string format_angle(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string write(const Circuit& c) {
    std::string out;
    out += kHeader;
    out += "\nqubits " + std::to_string(c.num_qubits()) + "\nclbits " + std::to_string(c.num_clbits()) + "\n";
    for (const auto& inst : c) {
        out += token_for(inst.gate.type);
        for (int q : inst.qubits) out += " q[" + std::to_string(q) + "]";
        if (inst.gate.type == GateType::Measure) out += " c[" + std::to_string(inst.gate.clbit) + "]";
        const int np = gate_param_count(inst.gate.type);
        if (np > 0) {
            out += " (";
            for (int i = 0; i < np; ++i) {
                if (i) out += ", ";
                out += format_angle(inst.gate.params[static_cast<std::size_t>(i)]);
            }
            out += ")";
        }
        out += "\n";
    }
    return out;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] inline void fail(int line, const std::string& msg) {
    throw InputError("line " + std::to_string(line) + ": " + msg);
}

inline int parse_index(int line, std::string_view tok, char reg) {
    if (tok.size() < 4 || tok[0] != reg || tok[1] != '[' || tok.back() != ']')
        fail(line, "expected " + std::string(1, reg) + "[i], got '" + std::string(tok) + "'");
    int v = 0;
    for (char ch : tok.substr(2, tok.size() - 3)) {
        if (ch < '0' || ch > '9') fail(line, "bad index in '" + std::string(tok) + "'");
        v = v * 10 + (ch - '0');
    }
    return v;
}

inline double parse_number(int line, const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        fail(line, "bad number '" + s + "'");
    }
    if (used != s.size()) fail(line, "bad number '" + s + "'");
    return v;
}

inline int parse_count(int line, std::string_view rest) {
    const std::string t = trim(rest);
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) fail(line, "expected a count");
    return std::stoi(t);
}

}  // namespace detail

inline Circuit read(std::istream& in) {
    std::string raw;
    int line = 0;
    bool header = false;
    int nq = -1, nc = 0;
    std::optional<Circuit> c;
    while (std::getline(in, raw)) {
        ++line;
        std::string text = detail::trim(raw);
        if (text.empty() || text[0] == '#') continue;
        if (!header) {
            if (text != kHeader) detail::fail(line, "expected header '" + std::string(kHeader) + "'");
            header = true;
            continue;
        }
        if (text.rfind("qubits ", 0) == 0 && !c) {
            nq = detail::parse_count(line, std::string_view(text).substr(7));
            continue;
        }
        if (text.rfind("clbits ", 0) == 0 && !c) {
            nc = detail::parse_count(line, std::string_view(text).substr(7));
            continue;
        }
        if (!c) {
            if (nq < 0) detail::fail(line, "missing 'qubits N' declaration before first instruction");
            c.emplace(nq, nc);
        }

        std::string params_text;
        if (auto open = text.find('('); open != std::string::npos) {
            const auto close = text.rfind(')');
            if (close == std::string::npos || close < open) detail::fail(line, "unbalanced parentheses");
            params_text = text.substr(open + 1, close - open - 1);
            if (!detail::trim(std::string_view(text).substr(close + 1)).empty())
                detail::fail(line, "trailing text after parameters");
            text = detail::trim(std::string_view(text).substr(0, open));
        }
        std::istringstream words(text);
        std::string name;
        words >> name;
        std::optional<GateType> type;
        for (GateType t : kAllGateTypes)
            if (token_for(t) == name) type = t;
        if (!type) detail::fail(line, "unknown gate '" + name + "'");

        Gate g{*type};
        std::vector<int> qubits;
        std::string tok;
        while (words >> tok) {
            if (tok.back() == ',') tok.pop_back();
            if (!tok.empty() && tok[0] == 'c' && *type == GateType::Measure) {
                g.clbit = detail::parse_index(line, tok, 'c');
            } else {
                qubits.push_back(detail::parse_index(line, tok, 'q'));
            }
        }
        std::vector<double> params;
        if (!params_text.empty()) {
            std::stringstream ps(params_text);
            std::string item;
            while (std::getline(ps, item, ',')) params.push_back(detail::parse_number(line, detail::trim(item)));
        }
        const int np = gate_param_count(*type);
        if (static_cast<int>(params.size()) != np)
            detail::fail(line, name + " expects " + std::to_string(np) + " parameter(s), got " +
                                   std::to_string(params.size()));
        for (int i = 0; i < np; ++i) g.params[static_cast<std::size_t>(i)] = params[static_cast<std::size_t>(i)];
        if (*type == GateType::Measure && g.clbit < 0) detail::fail(line, "measure needs a classical bit c[i]");
        try {
            c->append(g, std::move(qubits));
        } catch (const InputError& e) {
            detail::fail(line, e.what());
        }
    }
    if (!header) throw InputError("line 1: empty input, expected header '" + std::string(kHeader) + "'");
    if (!c) {
        if (nq < 0) throw InputError("line " + std::to_string(line) + ": missing 'qubits N' declaration");
        c.emplace(nq, nc);
    }
    return *c;
}

inline Circuit read(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read(in);
}

}  // namespace qcflate::qasm
