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
#include "twistlab/compiler.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "twistlab/errors.h"

namespace twistlab {

namespace {

bool is_two_qubit(const GateOp &g) {
    return gate_arity(g.gate) == 2;
}

Gate inverse_gate(Gate g) {
    if (g == Gate::S) {
        return Gate::S_DAG;
    }
    if (g == Gate::S_DAG) {
        return Gate::S;
    }
    return g;
}

template <typename Sim>
void apply_op(Sim &sim, const GateOp &g) {
    if (is_two_qubit(g)) {
        sim.apply_gate(g.gate, g.a, g.b);
    } else {
        sim.apply_gate(g.gate, g.a);
    }
}

bool conflicts(const PauliOperator &a, const PauliOperator &b) {
    for (size_t q : a.support()) {
        char lb = b.letter(q);
        if (lb != 'I' && lb != a.letter(q)) {
            return true;
        }
    }
    return false;
}

void push_letter(std::vector<GateOp> &ops, char letter, size_t q) {
    if (letter == 'X') {
        ops.push_back({Gate::X, q});
    } else if (letter == 'Y') {
        ops.push_back({Gate::Y, q});
    } else if (letter == 'Z') {
        ops.push_back({Gate::Z, q});
    }
}

}  // namespace

Circuit Circuit::from_sequence(size_t num_qubits, const std::vector<GateOp> &ops) {
    Circuit c(num_qubits);
    std::vector<long> last(num_qubits, -1);
    for (const GateOp &g : ops) {
        if (g.a >= num_qubits || (is_two_qubit(g) && g.b >= num_qubits)) {
            throw IndexError("gate site out of range for " + std::to_string(num_qubits) + " qubits");
        }
        if (is_two_qubit(g) && g.a == g.b) {
            throw ContractViolation("two-qubit gate on a single site");
        }
        long earliest = last[g.a] + 1;
        if (is_two_qubit(g)) {
            earliest = std::max(earliest, last[g.b] + 1);
        }
        size_t layer = (size_t)earliest;
        while (layer < c.layers_.size() && is_two_qubit(c.layers_[layer].front()) != is_two_qubit(g)) {
            layer++;
        }
        if (layer == c.layers_.size()) {
            c.layers_.emplace_back();
        }
        c.layers_[layer].push_back(g);
        last[g.a] = (long)layer;
        if (is_two_qubit(g)) {
            last[g.b] = (long)layer;
        }
    }
    return c;
}

Circuit Circuit::parse(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    Circuit c;
    bool header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        if (!header) {
            std::string word;
            ls >> word >> c.n_;
            if (word != "qubits" || ls.fail()) {
                throw ParseError("circuit text must start with 'qubits N'");
            }
            header = true;
            continue;
        }
        size_t index;
        ls >> index;
        if (ls.fail() || index != c.layers_.size()) {
            throw ParseError("expected layer " + std::to_string(c.layers_.size()) + ": " + line);
        }
        std::string rest;
        std::getline(ls, rest);
        std::vector<GateOp> layer;
        std::istringstream gs(rest);
        std::string item;
        while (std::getline(gs, item, ';')) {
            std::istringstream is(item);
            std::string name, sites;
            is >> name >> sites;
            if (name.empty()) {
                continue;
            }
            GateOp g{parse_gate(name), 0, 0};
            size_t comma = sites.find(',');
            try {
                g.a = std::stoul(sites.substr(0, comma));
                if (gate_arity(g.gate) == 2) {
                    if (comma == std::string::npos) {
                        throw ParseError(name + " needs two sites");
                    }
                    g.b = std::stoul(sites.substr(comma + 1));
                } else if (comma != std::string::npos) {
                    throw ParseError(name + " takes one site");
                }
            } catch (const std::logic_error &) {
                throw ParseError("bad gate sites: " + item);
            }
            layer.push_back(g);
        }
        c.append_layer(std::move(layer));
    }
    if (!header) {
        throw ParseError("empty circuit text");
    }
    return c;
}

size_t Circuit::single_qubit_count() const {
    size_t k = 0;
    for (const auto &l : layers_) {
        for (const auto &g : l) {
            k += !is_two_qubit(g);
        }
    }
    return k;
}

size_t Circuit::two_qubit_count() const {
    size_t k = 0;
    for (const auto &l : layers_) {
        for (const auto &g : l) {
            k += is_two_qubit(g);
        }
    }
    return k;
}

std::vector<GateOp> Circuit::sequence() const {
    std::vector<GateOp> out;
    for (const auto &l : layers_) {
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

void Circuit::append_layer(std::vector<GateOp> layer) {
    if (layer.empty()) {
        return;
    }
    std::set<size_t> used;
    bool two = is_two_qubit(layer.front());
    for (const auto &g : layer) {
        if (is_two_qubit(g) != two) {
            throw ContractViolation("layer mixes single- and two-qubit gates");
        }
        std::vector<size_t> sites{g.a};
        if (is_two_qubit(g)) {
            sites.push_back(g.b);
        }
        for (size_t s : sites) {
            if (s >= n_) {
                throw IndexError("gate site " + std::to_string(s) + " out of range");
            }
            if (!used.insert(s).second) {
                throw ContractViolation("site " + std::to_string(s) + " appears twice in a layer");
            }
        }
    }
    layers_.push_back(std::move(layer));
}

void Circuit::append(const Circuit &other) {
    if (other.n_ != n_) {
        throw DimensionError("cannot append circuits of different widths");
    }
    for (const auto &l : other.layers_) {
        layers_.push_back(l);
    }
}

Circuit Circuit::inverse() const {
    Circuit c(n_);
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) {
        std::vector<GateOp> l;
        for (const auto &g : *it) {
            l.push_back({inverse_gate(g.gate), g.a, g.b});
        }
        c.layers_.push_back(std::move(l));
    }
    return c;
}

void Circuit::apply(StabilizerTableau &t) const {
    if (t.num_qubits() != n_) {
        throw DimensionError("circuit width " + std::to_string(n_) + " does not match state");
    }
    for (const auto &l : layers_) {
        for (const auto &g : l) {
            apply_op(t, g);
        }
    }
}

void Circuit::apply(DenseState &s) const {
    if (s.num_qubits() != n_) {
        throw DimensionError("circuit width " + std::to_string(n_) + " does not match state");
    }
    for (const auto &l : layers_) {
        for (const auto &g : l) {
            apply_op(s, g);
        }
    }
}

std::string Circuit::str() const {
    std::ostringstream out;
    out << "qubits " << n_ << "\n";
    for (size_t k = 0; k < layers_.size(); k++) {
        out << k;
        for (size_t i = 0; i < layers_[k].size(); i++) {
            const GateOp &g = layers_[k][i];
            out << (i ? "; " : " ") << gate_name(g.gate) << " " << g.a;
            if (is_two_qubit(g)) {
                out << "," << g.b;
            }
        }
        out << "\n";
    }
    return out.str();
}

int FusionChargeAssignment::sign_of(const std::string &key) const {
    auto it = signs.find(key);
    if (it == signs.end()) {
        return +1;
    }
    if (it->second != 1 && it->second != -1) {
        throw DomainError("charge sign for " + key + " must be +1 or -1");
    }
    return it->second;
}

std::vector<std::pair<std::string, PauliOperator>> fermion_charge_strings(const Lattice &lattice) {
    std::vector<std::pair<std::string, PauliOperator>> out;
    if (!lattice.spec().extras.contains("majoranas")) {
        return out;
    }
    MajoranaEncoding enc = MajoranaEncoding::from_lattice(lattice);
    for (size_t i = 1; i + 1 <= enc.size(); i += 2) {
        out.push_back({"c" + std::to_string(i) + "c" + std::to_string(i + 1), enc.correlator(i, i + 1)});
    }
    return out;
}

PauliOperator solve_flip(const std::vector<PauliOperator> &ops, const std::vector<bool> &parity) {
    if (ops.size() != parity.size()) {
        throw DimensionError("one parity bit per operator required");
    }
    if (ops.empty()) {
        throw DimensionError("no operators to solve against");
    }
    size_t n = ops[0].num_sites();
    size_t m = ops.size();
    size_t width = 2 * n + 1;
    std::vector<std::vector<uint8_t>> rows(m, std::vector<uint8_t>(width, 0));
    for (size_t j = 0; j < m; j++) {
        for (size_t q = 0; q < n; q++) {
            rows[j][q] = ops[j].z(q);
            rows[j][n + q] = ops[j].x(q);
        }
        rows[j][2 * n] = parity[j];
    }
    std::vector<size_t> pivots;
    size_t r = 0;
    for (size_t c = 0; c < 2 * n && r < m; c++) {
        size_t p = r;
        while (p < m && !rows[p][c]) {
            p++;
        }
        if (p == m) {
            continue;
        }
        std::swap(rows[p], rows[r]);
        for (size_t j = 0; j < m; j++) {
            if (j != r && rows[j][c]) {
                for (size_t k = c; k < width; k++) {
                    rows[j][k] ^= rows[r][k];
                }
            }
        }
        pivots.push_back(c);
        r++;
    }
    for (size_t j = r; j < m; j++) {
        if (rows[j][2 * n]) {
            throw CompileError("requested sign flips are inconsistent with dependent operators");
        }
    }
    PauliOperator e(n);
    for (size_t j = 0; j < pivots.size(); j++) {
        if (!rows[j][2 * n]) {
            continue;
        }
        size_t c = pivots[j];
        size_t q = c % n;
        bool x = e.x(q) ^ (c < n);
        bool z = e.z(q) ^ (c >= n);
        e.set_letter(q, x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I'));
    }
    return e;
}

CompiledState compile_stabilizer_state(size_t num_qubits, const std::vector<std::string> &labels,
                                       const std::vector<PauliOperator> &targets, const std::vector<int> &signs,
                                       size_t basis_count) {
    if (labels.size() != targets.size() || signs.size() != targets.size() || basis_count > targets.size()) {
        throw DimensionError("labels, targets and signs must match");
    }
    for (size_t k = 0; k < targets.size(); k++) {
        if (targets[k].num_sites() != num_qubits) {
            throw DimensionError(labels[k] + " acts on the wrong number of qubits");
        }
        if (!targets[k].is_hermitian()) {
            throw ContractViolation(labels[k] + " is not Hermitian");
        }
        for (size_t j = 0; j < k; j++) {
            if (!targets[j].commutes(targets[k])) {
                throw CompileError(labels[j] + " and " + labels[k] + " do not commute");
            }
        }
    }

    CompiledState out;
    out.target_labels = labels;
    out.targets = targets;
    out.target_signs = signs;

    std::vector<GateOp> ops;
    std::vector<bool> dirty(num_qubits, false);
    std::vector<size_t> independent;
    std::vector<PauliOperator> span;
    auto is_new = [&](const PauliOperator &p) {
        span.push_back(p);
        if (symplectic_rank(span) == span.size()) {
            return true;
        }
        span.pop_back();
        return false;
    };

    StabilizerTableau live(num_qubits);
    size_t applied = 0;

    // Stage boundaries in the gate sequence, for checkpoints.
    std::vector<std::pair<std::string, size_t>> stages;

    std::vector<char> basis(num_qubits, 'I');
    for (size_t k = 0; k < basis_count; k++) {
        for (size_t q : targets[k].support()) {
            char l = targets[k].letter(q);
            if (basis[q] != 'I' && basis[q] != l) {
                throw CompileError(labels[k] + " conflicts with another basis-layer string at site " +
                                   std::to_string(q));
            }
            basis[q] = l;
        }
        if (is_new(targets[k])) {
            independent.push_back(k);
        }
    }
    for (size_t q = 0; q < num_qubits; q++) {
        if (basis[q] == 'X' || basis[q] == 'Y') {
            ops.push_back({Gate::H, q});
            dirty[q] = true;
        }
        if (basis[q] == 'Y') {
            ops.push_back({Gate::S, q});
        }
    }
    stages.push_back({"basis", ops.size()});

    for (size_t k = basis_count; k < targets.size(); k++) {
        const PauliOperator &p = targets[k];
        if (!is_new(p)) {
            continue;
        }
        independent.push_back(k);
        std::vector<size_t> support = p.support();
        std::optional<size_t> rep;
        for (size_t q : support) {
            char l = p.letter(q);
            if (!dirty[q] && (l == 'X' || l == 'Y')) {
                rep = q;
                break;
            }
        }
        if (!rep) {
            // No clean site: rotate a state stabilizer g that anticommutes with P onto P. The rotation
            // commutes with everything already prepared, since those operators are in the group of g.
            for (; applied < ops.size(); applied++) {
                apply_op(live, ops[applied]);
            }
            std::optional<PauliOperator> best;
            for (size_t row = 0; row < num_qubits; row++) {
                const PauliOperator &g = live.stabilizer(row);
                if (g.commutes(p)) {
                    continue;
                }
                PauliOperator q = p * g;
                q.add_phase_exp(3);
                if (!best || q.weight() < best->weight()) {
                    best = q;
                }
            }
            if (!best) {
                // Already an eigenstate; the sign correction below settles the eigenvalue.
                stages.push_back({labels[k], ops.size()});
                continue;
            }
            for (const auto &g : compile_pauli_rotation(*best).sequence()) {
                ops.push_back(g);
            }
            for (size_t q : best->support()) {
                dirty[q] = true;
            }
            stages.push_back({labels[k], ops.size()});
            continue;
        }
        size_t r = *rep;
        out.representatives[labels[k]] = r;
        ops.push_back({Gate::H, r});
        if (p.letter(r) == 'Y') {
            ops.push_back({Gate::S, r});
        }
        if (p.sign() * signs[k] < 0) {
            ops.push_back({Gate::Z, r});
        }
        dirty[r] = true;
        for (size_t t : support) {
            if (t == r) {
                continue;
            }
            char l = p.letter(t);
            if (l == 'Z') {
                ops.push_back({Gate::CZ, r, t});
            } else if (l == 'X') {
                ops.push_back({Gate::CX, r, t});
                dirty[t] = true;
            } else {
                ops.push_back({Gate::S_DAG, t});
                ops.push_back({Gate::CX, r, t});
                ops.push_back({Gate::S, t});
                dirty[t] = true;
            }
        }
        stages.push_back({labels[k], ops.size()});
    }

    // Sign correction over the independent targets.
    StabilizerTableau sim(num_qubits);
    for (const auto &g : ops) {
        apply_op(sim, g);
    }
    std::vector<PauliOperator> ind_ops;
    std::vector<bool> wrong;
    bool any_wrong = false;
    for (size_t k : independent) {
        ind_ops.push_back(targets[k]);
        bool w = sim.expectation(targets[k]) != signs[k];
        wrong.push_back(w);
        any_wrong |= w;
    }
    if (any_wrong) {
        PauliOperator fix = solve_flip(ind_ops, wrong);
        for (size_t q : fix.support()) {
            push_letter(ops, fix.letter(q), q);
            apply_op(sim, ops.back());
        }
        stages.push_back({"correction", ops.size()});
    }
    for (size_t k = 0; k < targets.size(); k++) {
        if (sim.expectation(targets[k]) != signs[k]) {
            throw CompileError("requested sign of " + labels[k] + " is fixed to the opposite value by the others");
        }
    }

    StabilizerTableau replay(num_qubits);
    size_t done = 0;
    for (const auto &[stage, end] : stages) {
        for (; done < end; done++) {
            apply_op(replay, ops[done]);
        }
        Checkpoint cp{stage, {}};
        for (const auto &t : targets) {
            cp.expectations.push_back(replay.expectation(t));
        }
        out.checkpoints.push_back(std::move(cp));
    }
    out.circuit = Circuit::from_sequence(num_qubits, ops);
    return out;
}

CompiledState compile_ground_state(const Lattice &lattice, const FusionChargeAssignment &charges) {
    auto strings = fermion_charge_strings(lattice);
    for (const auto &[key, _] : charges.signs) {
        bool known = std::any_of(strings.begin(), strings.end(), [&](const auto &s) { return s.first == key; });
        if (!known) {
            throw LookupError("no fermion-charge string " + key + " on " + lattice.name());
        }
    }

    std::vector<std::string> labels;
    std::vector<PauliOperator> targets;
    std::vector<int> signs;

    auto conflict_free = [](const std::vector<PauliOperator> &ops) {
        for (size_t a = 0; a < ops.size(); a++) {
            for (size_t b = a + 1; b < ops.size(); b++) {
                if (conflicts(ops[a], ops[b])) {
                    return false;
                }
            }
        }
        return true;
    };
    std::vector<PauliOperator> raw, chained;
    std::vector<std::string> chained_labels;
    std::vector<int> raw_signs, chained_signs;
    PauliOperator running(lattice.num_qubits());
    std::string running_label;
    int running_sign = 1;
    for (const auto &[key, op] : strings) {
        raw.push_back(op);
        raw_signs.push_back(charges.sign_of(key));
        running = running * op;
        running_label += (running_label.empty() ? "" : "*") + key;
        running_sign *= raw_signs.back();
        chained.push_back(running);
        chained_labels.push_back(running_label);
        chained_signs.push_back(running_sign);
    }

    // Raw strings if they agree site by site, else running products f1, f1 f2, f1 f2 f3, ...; failing
    // both, a greedy compatible subset goes to the basis layer and the rest get representative blocks.
    std::vector<size_t> string_blocks;
    if (conflict_free(raw)) {
        for (size_t k = 0; k < raw.size(); k++) {
            labels.push_back(strings[k].first);
            targets.push_back(raw[k]);
            signs.push_back(raw_signs[k]);
        }
    } else if (conflict_free(chained)) {
        labels = chained_labels;
        targets = chained;
        signs = chained_signs;
    } else {
        for (size_t k = 0; k < raw.size(); k++) {
            bool ok = std::none_of(targets.begin(), targets.end(),
                                   [&](const PauliOperator &t) { return conflicts(t, raw[k]); });
            if (ok) {
                labels.push_back(strings[k].first);
                targets.push_back(raw[k]);
                signs.push_back(raw_signs[k]);
            } else {
                string_blocks.push_back(k);
            }
        }
    }
    std::vector<std::string> initialised = labels;
    for (size_t k : string_blocks) {
        initialised.push_back(strings[k].first);
    }

    // Dark squares join the basis layer when they agree letter-for-letter with it.
    std::vector<const Plaquette *> blocks;
    for (const auto &p : lattice.stabilizers()) {
        bool basis = p.kind == PlaquetteKind::Square && p.color == Color::Dark;
        for (const auto &t : targets) {
            basis = basis && !conflicts(p.op, t);
        }
        if (basis) {
            labels.push_back(p.id);
            targets.push_back(p.op);
            signs.push_back(1);
        } else {
            blocks.push_back(&p);
        }
    }
    size_t basis_count = targets.size();

    // Bottom row first, then by column.
    std::stable_sort(blocks.begin(), blocks.end(), [](const Plaquette *a, const Plaquette *b) {
        Coord ca = *std::min_element(a->cells.begin(), a->cells.end());
        Coord cb = *std::min_element(b->cells.begin(), b->cells.end());
        if (ca.row != cb.row) {
            return ca.row > cb.row;
        }
        return ca.col < cb.col;
    });
    for (size_t k : string_blocks) {
        labels.push_back(strings[k].first);
        targets.push_back(raw[k]);
        signs.push_back(raw_signs[k]);
    }
    for (const Plaquette *p : blocks) {
        labels.push_back(p->id);
        targets.push_back(p->op);
        signs.push_back(1);
    }

    CompiledState out = compile_stabilizer_state(lattice.num_qubits(), labels, targets, signs, basis_count);
    out.fermion_strings = initialised;
    return out;
}

Circuit compile_pauli_unitary(const PauliOperator &p) {
    if (!p.is_hermitian()) {
        throw ContractViolation("Pauli unitary must be Hermitian: " + p.str());
    }
    size_t n = p.num_sites();
    std::vector<GateOp> layer;
    for (size_t q : p.support()) {
        push_letter(layer, p.letter(q), q);
    }
    Circuit c(n);
    c.append_layer(std::move(layer));
    return c;
}

Circuit compile_pauli_rotation(const PauliOperator &q) {
    if (!q.is_hermitian()) {
        throw ContractViolation("rotation generator must be Hermitian: " + q.str());
    }
    size_t n = q.num_sites();
    std::vector<size_t> support = q.support();
    if (support.empty()) {
        return Circuit(n);
    }
    std::vector<GateOp> basis;
    for (size_t s : support) {
        char l = q.letter(s);
        if (l == 'Y') {
            basis.push_back({Gate::S_DAG, s});
        }
        if (l == 'X' || l == 'Y') {
            basis.push_back({Gate::H, s});
        }
    }
    size_t last = support.back();
    std::vector<GateOp> ladder;
    for (size_t s : support) {
        if (s != last) {
            ladder.push_back({Gate::CX, s, last});
        }
    }
    std::vector<GateOp> ops = basis;
    ops.insert(ops.end(), ladder.begin(), ladder.end());
    ops.push_back({q.sign() > 0 ? Gate::S_DAG : Gate::S, last});
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) {
        ops.push_back(*it);
    }
    for (auto it = basis.rbegin(); it != basis.rend(); ++it) {
        ops.push_back({inverse_gate(it->gate), it->a});
    }
    return Circuit::from_sequence(n, ops);
}

PauliOperator deformation_generator(const PauliOperator &s_old, const PauliOperator &s_new) {
    if (s_old.num_sites() != s_new.num_sites()) {
        throw DimensionError("deformation operators act on different numbers of sites");
    }
    if (!s_old.is_hermitian() || !s_new.is_hermitian()) {
        throw ContractViolation("deformation operators must be Hermitian");
    }
    PauliOperator q = s_new * s_old;
    if (q.is_identity_up_to_phase()) {
        return PauliOperator(q.num_sites());
    }
    q.add_phase_exp(3);
    if (!q.is_hermitian()) {
        throw ContractViolation("i S_new S_old is not Hermitian; the stabilizers must anticommute or coincide");
    }
    return q;
}

Circuit compile_deformation_step(const PauliOperator &s_old, const PauliOperator &s_new) {
    PauliOperator q = deformation_generator(s_old, s_new);
    return compile_pauli_rotation(q);
}

}  // namespace twistlab
