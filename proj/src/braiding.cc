// Copyright 2021 Google LLC
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "twistlab/braiding.h"

#include <algorithm>
#include <sstream>

#include "twistlab/errors.h"

namespace twistlab {

std::string BraidGenerator::str() const {
    std::string s = "B";
    if (i < 10 && j < 10) {
        s += std::to_string(i) + std::to_string(j);
    } else {
        s += std::to_string(i) + "," + std::to_string(j);
    }
    if (inverse) {
        s += "'";
    }
    return s;
}

BraidWord BraidWord::parse(const std::string &text) {
    BraidWord w;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        BraidGenerator g{};
        std::string body = tok;
        if (body.empty() || body[0] != 'B') {
            throw ParseError("braid generator must start with 'B': " + tok);
        }
        body = body.substr(1);
        if (!body.empty() && body.back() == '\'') {
            g.inverse = true;
            body.pop_back();
        }
        size_t comma = body.find(',');
        try {
            if (comma != std::string::npos) {
                size_t used_a = 0;
                size_t used_b = 0;
                std::string a = body.substr(0, comma);
                std::string b = body.substr(comma + 1);
                g.i = std::stoul(a, &used_a);
                g.j = std::stoul(b, &used_b);
                if (used_a != a.size() || used_b != b.size()) {
                    throw ParseError("bad braid generator: " + tok);
                }
            } else {
                if (body.size() != 2 || !isdigit((unsigned char)body[0]) || !isdigit((unsigned char)body[1])) {
                    throw ParseError("bad braid generator: " + tok);
                }
                g.i = (size_t)(body[0] - '0');
                g.j = (size_t)(body[1] - '0');
            }
        } catch (const std::logic_error &) {
            throw ParseError("bad braid generator: " + tok);
        }
        if (g.i == 0 || g.j == 0 || g.i == g.j) {
            throw ParseError("braid generator needs two distinct 1-based labels: " + tok);
        }
        w.gens.push_back(g);
    }
    return w;
}

std::string BraidWord::str() const {
    std::string s;
    for (const auto &g : gens) {
        if (!s.empty()) {
            s += ' ';
        }
        s += g.str();
    }
    return s;
}

BraidWord BraidWord::shifted(size_t offset) const {
    BraidWord w = *this;
    for (auto &g : w.gens) {
        g.i += offset;
        g.j += offset;
    }
    return w;
}

BraidWord BraidWord::inverse() const {
    BraidWord w;
    for (auto it = gens.rbegin(); it != gens.rend(); ++it) {
        BraidGenerator g = *it;
        g.inverse = !g.inverse;
        w.gens.push_back(g);
    }
    return w;
}

MajoranaFrame::MajoranaFrame(MajoranaEncoding encoding) : enc_(std::move(encoding)) {
    if (enc_.size() < 2 || enc_.size() % 2 != 0) {
        throw DomainError("a Majorana frame needs an even number of at least two operators");
    }
    for (size_t i = 1; i <= enc_.size(); i++) {
        slots_.push_back({+1, i});
    }
    refresh();
}

int MajoranaFrame::sign(size_t i) const {
    if (i == 0 || i > slots_.size()) {
        throw IndexError("frame slot " + std::to_string(i) + " out of range");
    }
    return slots_[i - 1].first;
}

size_t MajoranaFrame::label(size_t i) const {
    if (i == 0 || i > slots_.size()) {
        throw IndexError("frame slot " + std::to_string(i) + " out of range");
    }
    return slots_[i - 1].second;
}

PauliOperator MajoranaFrame::op(size_t i) const {
    PauliOperator p = enc_.c(label(i)).op;
    if (sign(i) < 0) {
        p.add_phase_exp(2);
    }
    return p;
}

PauliOperator MajoranaFrame::correlator(size_t i, size_t j) const {
    PauliOperator p = op(i) * op(j);
    p.add_phase_exp(3);
    return p;
}

void MajoranaFrame::braid(const BraidGenerator &g) {
    if (g.i == 0 || g.j == 0 || g.i > slots_.size() || g.j > slots_.size()) {
        throw IndexError("braid " + g.str() + " outside a frame of " + std::to_string(slots_.size()) + " twists");
    }
    if (g.i == g.j) {
        throw DomainError("braid needs two distinct twists");
    }
    auto ti = slots_[g.i - 1];
    auto tj = slots_[g.j - 1];
    if (g.inverse) {
        slots_[g.i - 1] = tj;
        slots_[g.j - 1] = {-ti.first, ti.second};
    } else {
        slots_[g.i - 1] = {-tj.first, tj.second};
        slots_[g.j - 1] = ti;
    }
    refresh();
}

void MajoranaFrame::braid(const BraidWord &w) {
    for (const auto &g : w.gens) {
        braid(g);
    }
}

bool MajoranaFrame::is_identity() const {
    for (size_t k = 0; k < slots_.size(); k++) {
        if (slots_[k].first != +1 || slots_[k].second != k + 1) {
            return false;
        }
    }
    return true;
}

bool MajoranaFrame::same_action(const MajoranaFrame &other) const {
    return slots_ == other.slots_;
}

std::string MajoranaFrame::str() const {
    std::string s;
    for (size_t k = 0; k < slots_.size(); k++) {
        if (k) {
            s += ' ';
        }
        s += "c" + std::to_string(k + 1) + "->" + (slots_[k].first < 0 ? "-" : "") + "c" +
             std::to_string(slots_[k].second);
    }
    return s;
}

PauliOperator MajoranaFrame::logical(char pauli, size_t q) const {
    if (q == 0 || q > num_logical_qubits()) {
        throw IndexError("logical qubit " + std::to_string(q) + " out of range");
    }
    if (pauli == 'Z') {
        PauliOperator acc = correlator(1, 2);
        for (size_t j = 2; j <= q; j++) {
            acc *= correlator(2 * j - 1, 2 * j);
        }
        return acc;
    }
    if (pauli == 'X') {
        return correlator(2 * q, 2 * q + 1);
    }
    if (pauli == 'Y') {
        PauliOperator y = logical('X', q) * logical('Z', q);
        y.add_phase_exp(1);
        return y;
    }
    throw DomainError(std::string("unknown logical Pauli: ") + pauli);
}

PauliOperator MajoranaFrame::logical_product(const std::string &letters) const {
    if (letters.size() != num_logical_qubits()) {
        throw DimensionError("logical product " + letters + " does not match " +
                             std::to_string(num_logical_qubits()) + " logical qubits");
    }
    PauliOperator acc(enc_.c(1).op.num_sites());
    for (size_t q = 1; q <= letters.size(); q++) {
        char l = letters[q - 1];
        if (l == 'I') {
            continue;
        }
        acc *= logical(l, q);
    }
    return acc;
}

void MajoranaFrame::refresh() {
    table_.clear();
    for (size_t q = 1; q <= num_logical_qubits(); q++) {
        for (char l : {'X', 'Y', 'Z'}) {
            table_[std::string(1, l) + std::to_string(q)] = logical(l, q);
        }
    }
}

LogicalGate parse_logical_gate(const std::string &name) {
    if (name == "Z") {
        return LogicalGate::Z;
    }
    if (name == "X") {
        return LogicalGate::X;
    }
    if (name == "H") {
        return LogicalGate::H;
    }
    if (name == "CX" || name == "CNOT") {
        return LogicalGate::CX;
    }
    throw ParseError("unknown logical gate: " + name);
}

GateMode parse_gate_mode(const std::string &name) {
    if (name == "frame") {
        return GateMode::FrameTracking;
    }
    if (name == "pauli") {
        return GateMode::PauliApplication;
    }
    if (name == "deformation") {
        return GateMode::CodeDeformation;
    }
    throw ParseError("unknown gate mode: " + name);
}

const char *gate_mode_name(GateMode m) {
    switch (m) {
        case GateMode::FrameTracking:
            return "frame";
        case GateMode::PauliApplication:
            return "pauli";
        case GateMode::CodeDeformation:
            return "deformation";
    }
    return "?";
}

BraidWord logical_gate_word(LogicalGate gate, size_t qubit, size_t num_logical_qubits) {
    if (qubit == 0 || qubit > num_logical_qubits) {
        throw IndexError("logical qubit " + std::to_string(qubit) + " out of range");
    }
    BraidWord w;
    switch (gate) {
        case LogicalGate::Z:
            for (size_t j = 1; j <= qubit; j++) {
                BraidGenerator g{2 * j - 1, 2 * j, false};
                w.gens.push_back(g);
                w.gens.push_back(g);
            }
            return w;
        case LogicalGate::X: {
            BraidGenerator g{2 * qubit, 2 * qubit + 1, false};
            w.gens = {g, g};
            return w;
        }
        case LogicalGate::H:
            if (qubit != 1) {
                throw ContractViolation("a single-braid Hadamard exists only on the first logical qubit");
            }
            return BraidWord::parse("B12 B23 B12");
        case LogicalGate::CX:
            if (num_logical_qubits != 2 || qubit != 1) {
                throw ContractViolation("the CX braid word acts as CX only on the two-qubit six-twist encoding");
            }
            return BraidWord::parse("B12 B34 B45 B34 B56' B45' B34'");
    }
    return w;
}

PauliOperator physical_braid_generator(const MajoranaFrame &frame, const BraidGenerator &g) {
    return g.inverse ? frame.correlator(g.i, g.j) : frame.correlator(g.j, g.i);
}

Circuit logical_gate_circuit(const MajoranaFrame &frame, LogicalGate gate, GateMode mode, size_t qubit) {
    size_t n = frame.op(1).num_sites();
    switch (mode) {
        case GateMode::FrameTracking:
            logical_gate_word(gate, qubit, frame.num_logical_qubits());
            return Circuit(n);
        case GateMode::PauliApplication:
            if (gate == LogicalGate::Z) {
                return compile_pauli_unitary(frame.logical('Z', qubit));
            }
            if (gate == LogicalGate::X) {
                return compile_pauli_unitary(frame.logical('X', qubit));
            }
            throw ContractViolation("only Z and X are available as Pauli applications");
        case GateMode::CodeDeformation: {
            if (gate == LogicalGate::CX) {
                throw ContractViolation("CX has no code-deformation realisation here; use frame tracking");
            }
            BraidWord w = logical_gate_word(gate, qubit, frame.num_logical_qubits());
            Circuit c(n);
            for (const auto &g : w.gens) {
                c.append(compile_pauli_rotation(physical_braid_generator(frame, g)));
            }
            return c;
        }
    }
    return Circuit(n);
}

void logical_gate(MajoranaFrame &frame, StabilizerTableau &state, LogicalGate gate, GateMode mode, size_t qubit) {
    if (mode == GateMode::FrameTracking) {
        frame.braid(logical_gate_word(gate, qubit, frame.num_logical_qubits()));
        return;
    }
    if (mode == GateMode::PauliApplication) {
        if (gate != LogicalGate::Z && gate != LogicalGate::X) {
            throw ContractViolation("only Z and X are available as Pauli applications");
        }
        state.apply_pauli_unitary(frame.logical(gate == LogicalGate::Z ? 'Z' : 'X', qubit));
        return;
    }
    if (gate == LogicalGate::CX) {
        throw ContractViolation("CX has no code-deformation realisation here; use frame tracking");
    }
    for (const auto &g : logical_gate_word(gate, qubit, frame.num_logical_qubits()).gens) {
        state.apply_pauli_rotation(physical_braid_generator(frame, g));
    }
}

static PauliOperator resolve_logical(const MajoranaFrame &frame, const std::string &observable) {
    auto it = frame.table().find(observable);
    if (it != frame.table().end()) {
        return it->second;
    }
    bool letters = !observable.empty() && observable.size() == frame.num_logical_qubits() &&
                   std::all_of(observable.begin(), observable.end(),
                               [](char c) { return c == 'I' || c == 'X' || c == 'Y' || c == 'Z'; });
    if (letters) {
        return frame.logical_product(observable);
    }
    throw ContractViolation("logical observable '" + observable + "' is not bound by the frame");
}

int measure_logical(const MajoranaFrame &frame, const StabilizerTableau &state, const std::string &observable) {
    return state.expectation(resolve_logical(frame, observable));
}

void single_braid_unitary(const MajoranaFrame &frame, StabilizerTableau &state, size_t i, size_t j) {
    state.apply_pauli_rotation(frame.correlator(i, j));
}

StabilizerGraph StabilizerGraph::from_lattice(const Lattice &lattice) {
    StabilizerGraph g;
    std::vector<PauliOperator> ops = lattice.stabilizer_operators();
    for (size_t k = 0; k < ops.size(); k++) {
        g.add(lattice.stabilizers()[k].id, ops[k]);
    }
    return g;
}

void StabilizerGraph::add(const std::string &label, const PauliOperator &op) {
    if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
        throw PlanError("stabilizer label '" + label + "' already present");
    }
    labels.push_back(label);
    ops.push_back(op);
}

size_t StabilizerGraph::index(const std::string &label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
        throw PlanError("stabilizer '" + label + "' is not in the current code");
    }
    return (size_t)(it - labels.begin());
}

Circuit deformation_step_circuit(const StabilizerGraph &graph, const DeformationStep &step) {
    size_t k = graph.index(step.old_label);
    const PauliOperator &s_old = graph.ops[k];
    if (s_old.num_sites() != step.s_new.num_sites()) {
        throw DimensionError("deformation step acts on a different number of sites");
    }
    for (size_t m = 0; m < graph.ops.size(); m++) {
        if (m != k && !graph.ops[m].commutes(step.s_new)) {
            throw PlanError("new stabilizer " + step.new_label + " anticommutes with " + graph.labels[m]);
        }
    }
    if (s_old.same_letters(step.s_new)) {
        if (s_old != step.s_new) {
            throw PlanError("deformation step " + step.new_label + " only flips the sign of " + step.old_label);
        }
        return Circuit(s_old.num_sites());
    }
    if (s_old.commutes(step.s_new)) {
        throw PlanError("deformation step needs " + step.old_label + " and " + step.new_label + " to anticommute");
    }
    return compile_deformation_step(s_old, step.s_new);
}

void deform_code(StabilizerTableau &state, StabilizerGraph &graph, const std::vector<DeformationStep> &plan) {
    for (const auto &step : plan) {
        Circuit c = deformation_step_circuit(graph, step);
        size_t k = graph.index(step.old_label);
        if (step.new_label != step.old_label &&
            std::find(graph.labels.begin(), graph.labels.end(), step.new_label) != graph.labels.end()) {
            throw PlanError("stabilizer label '" + step.new_label + "' already present");
        }
        c.apply(state);
        graph.labels[k] = step.new_label;
        graph.ops[k] = step.s_new;
    }
}

}  // namespace twistlab
