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
#include "twistlab/tableau.h"

#include <sstream>

#include "twistlab/errors.h"

namespace twistlab {

size_t gate_arity(Gate g) {
    return (g == Gate::CX || g == Gate::CZ) ? 2 : 1;
}

const char *gate_name(Gate g) {
    switch (g) {
        case Gate::H:
            return "H";
        case Gate::S:
            return "S";
        case Gate::S_DAG:
            return "S_DAG";
        case Gate::X:
            return "X";
        case Gate::Y:
            return "Y";
        case Gate::Z:
            return "Z";
        case Gate::CX:
            return "CX";
        case Gate::CZ:
            return "CZ";
    }
    return "?";
}

Gate parse_gate(std::string_view name) {
    for (Gate g : {Gate::H, Gate::S, Gate::S_DAG, Gate::X, Gate::Y, Gate::Z, Gate::CX, Gate::CZ}) {
        if (name == gate_name(g)) {
            return g;
        }
    }
    throw ParseError("unknown gate: " + std::string(name));
}

namespace {

struct BitRef {
    bits::word_t *xw;
    bits::word_t *zw;
    bits::word_t mask;

    bool x() const {
        return (*xw & mask) != 0;
    }
    bool z() const {
        return (*zw & mask) != 0;
    }
    void set_x(bool v) {
        *xw = v ? (*xw | mask) : (*xw & ~mask);
    }
    void set_z(bool v) {
        *zw = v ? (*zw | mask) : (*zw & ~mask);
    }
};

BitRef at(PauliOperator &p, size_t q) {
    size_t w = q / bits::WORD_BITS;
    return {p.x_words() + w, p.z_words() + w, bits::word_t{1} << (q % bits::WORD_BITS)};
}

// Conjugates one row by the gate, P -> U P U^dagger.
void conjugate(PauliOperator &p, Gate g, size_t a, size_t b) {
    BitRef r = at(p, a);
    bool x = r.x();
    bool z = r.z();
    switch (g) {
        case Gate::H:
            r.set_x(z);
            r.set_z(x);
            if (x && z) {
                p.add_phase_exp(2);
            }
            return;
        case Gate::S:
            if (x) {
                r.set_z(!z);
                p.add_phase_exp(1);
            }
            return;
        case Gate::S_DAG:
            if (x) {
                r.set_z(!z);
                p.add_phase_exp(3);
            }
            return;
        case Gate::X:
            if (z) {
                p.add_phase_exp(2);
            }
            return;
        case Gate::Y:
            if (x != z) {
                p.add_phase_exp(2);
            }
            return;
        case Gate::Z:
            if (x) {
                p.add_phase_exp(2);
            }
            return;
        case Gate::CX: {
            BitRef t = at(p, b);
            if (x) {
                t.set_x(!t.x());
            }
            if (t.z()) {
                r.set_z(!z);
            }
            return;
        }
        case Gate::CZ: {
            BitRef t = at(p, b);
            bool xt = t.x();
            if (xt) {
                r.set_z(!z);
            }
            if (x) {
                t.set_z(!t.z());
            }
            if (x && xt) {
                p.add_phase_exp(2);
            }
            return;
        }
    }
}

}  // namespace

StabilizerTableau::StabilizerTableau(size_t num_qubits, uint64_t seed) : n_(num_qubits), rng_(seed) {
    if (num_qubits == 0) {
        throw DomainError("tableau needs at least one qubit");
    }
    stabilizers_.reserve(n_);
    destabilizers_.reserve(n_);
    for (size_t k = 0; k < n_; k++) {
        stabilizers_.push_back(PauliOperator::single(n_, k, 'Z'));
        destabilizers_.push_back(PauliOperator::single(n_, k, 'X'));
    }
}

StabilizerTableau StabilizerTableau::new_zero_state(size_t num_qubits, uint64_t seed) {
    return StabilizerTableau(num_qubits, seed);
}

void StabilizerTableau::apply_gate(Gate gate, std::span<const size_t> sites) {
    size_t arity = gate_arity(gate);
    if (sites.size() != arity) {
        throw ContractViolation(std::string(gate_name(gate)) + " takes " + std::to_string(arity) + " sites");
    }
    for (size_t s : sites) {
        if (s >= n_) {
            throw IndexError("site " + std::to_string(s) + " out of range for " + std::to_string(n_) + " qubits");
        }
    }
    size_t a = sites[0];
    size_t b = arity == 2 ? sites[1] : a;
    if (arity == 2 && a == b) {
        throw ContractViolation(std::string(gate_name(gate)) + " needs two distinct sites");
    }
    for (auto &row : stabilizers_) {
        conjugate(row, gate, a, b);
    }
    for (auto &row : destabilizers_) {
        conjugate(row, gate, a, b);
    }
}

void StabilizerTableau::apply_gate(Gate gate, size_t a) {
    size_t s[1] = {a};
    apply_gate(gate, std::span<const size_t>(s, 1));
}

void StabilizerTableau::apply_gate(Gate gate, size_t a, size_t b) {
    size_t s[2] = {a, b};
    apply_gate(gate, std::span<const size_t>(s, 2));
}

void StabilizerTableau::check_operator(const PauliOperator &p, const char *what) const {
    if (p.num_sites() != n_) {
        throw DimensionError(std::string(what) + ": operator has " + std::to_string(p.num_sites()) +
                             " sites, tableau has " + std::to_string(n_));
    }
    if (!p.is_hermitian()) {
        throw ContractViolation(std::string(what) + " needs a Hermitian operator, got " + p.str());
    }
}

void StabilizerTableau::apply_pauli_unitary(const PauliOperator &p) {
    check_operator(p, "apply_pauli_unitary");
    for (auto *rows : {&stabilizers_, &destabilizers_}) {
        for (auto &row : *rows) {
            if (!row.commutes(p)) {
                row.add_phase_exp(2);
            }
        }
    }
}

void StabilizerTableau::apply_pauli_rotation(const PauliOperator &q) {
    check_operator(q, "apply_pauli_rotation");
    for (auto *rows : {&stabilizers_, &destabilizers_}) {
        for (auto &row : *rows) {
            if (!row.commutes(q)) {
                PauliOperator r = q * row;
                r.add_phase_exp(1);
                row = std::move(r);
            }
        }
    }
}

int StabilizerTableau::expectation(const PauliOperator &p) const {
    check_operator(p, "expectation");
    for (const auto &s : stabilizers_) {
        if (!s.commutes(p)) {
            return 0;
        }
    }
    PauliOperator acc(n_);
    for (size_t k = 0; k < n_; k++) {
        if (!destabilizers_[k].commutes(p)) {
            acc *= stabilizers_[k];
        }
    }
    if (!acc.same_letters(p)) {
        throw ContractViolation("tableau is inconsistent: stabilizer product does not reproduce " + p.str());
    }
    int diff = (p.phase_exp() - acc.phase_exp() + 4) % 4;
    if (diff == 0) {
        return +1;
    }
    if (diff == 2) {
        return -1;
    }
    throw ContractViolation("non-Hermitian stabilizer product while evaluating " + p.str());
}

int StabilizerTableau::measure(const PauliOperator &p) {
    check_operator(p, "measure");
    size_t pivot = n_;
    for (size_t k = 0; k < n_; k++) {
        if (!stabilizers_[k].commutes(p)) {
            pivot = k;
            break;
        }
    }
    if (pivot == n_) {
        return expectation(p);
    }
    for (size_t k = 0; k < n_; k++) {
        if (k != pivot && !stabilizers_[k].commutes(p)) {
            stabilizers_[k] *= stabilizers_[pivot];
        }
        if (k != pivot && !destabilizers_[k].commutes(p)) {
            destabilizers_[k] *= stabilizers_[pivot];
        }
    }
    destabilizers_[pivot] = stabilizers_[pivot];
    int outcome = (rng_() & 1) ? -1 : +1;
    PauliOperator s = p;
    if (outcome < 0) {
        s.add_phase_exp(2);
    }
    stabilizers_[pivot] = std::move(s);
    return outcome;
}

size_t symplectic_rank(const std::vector<PauliOperator> &ops) {
    if (ops.empty()) {
        return 0;
    }
    size_t nw = ops[0].num_words();
    std::vector<std::vector<bits::word_t>> rows;
    rows.reserve(ops.size());
    for (const auto &p : ops) {
        std::vector<bits::word_t> v(2 * nw);
        for (size_t k = 0; k < nw; k++) {
            v[k] = p.x_words()[k];
            v[nw + k] = p.z_words()[k];
        }
        rows.push_back(std::move(v));
    }
    size_t rank = 0;
    for (size_t col = 0; col < 2 * nw * bits::WORD_BITS && rank < rows.size(); col++) {
        size_t w = col / bits::WORD_BITS;
        bits::word_t m = bits::word_t{1} << (col % bits::WORD_BITS);
        size_t piv = rank;
        while (piv < rows.size() && !(rows[piv][w] & m)) {
            piv++;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[piv], rows[rank]);
        for (size_t r = 0; r < rows.size(); r++) {
            if (r != rank && (rows[r][w] & m)) {
                bits::xor_into(rows[r].data(), rows[rank].data(), 2 * nw);
            }
        }
        rank++;
    }
    return rank;
}

void StabilizerTableau::validate() const {
    for (size_t a = 0; a < n_; a++) {
        if (!stabilizers_[a].is_hermitian() || !destabilizers_[a].is_hermitian()) {
            throw ContractViolation("non-Hermitian tableau row " + std::to_string(a));
        }
        for (size_t b = 0; b < n_; b++) {
            if (!stabilizers_[a].commutes(stabilizers_[b])) {
                throw ContractViolation(
                    "stabilizers " + std::to_string(a) + " and " + std::to_string(b) + " anticommute");
            }
            bool anti = !destabilizers_[a].commutes(stabilizers_[b]);
            if (anti != (a == b)) {
                throw ContractViolation(
                    "destabilizer " + std::to_string(a) + " pairing broken at stabilizer " + std::to_string(b));
            }
        }
    }
    if (symplectic_rank(stabilizers_) != n_) {
        throw ContractViolation("stabilizer rows are not independent");
    }
}

std::string StabilizerTableau::dump() const {
    std::ostringstream out;
    for (const auto &s : stabilizers_) {
        out << s.str() << "\n";
    }
    return out.str();
}

}  // namespace twistlab
