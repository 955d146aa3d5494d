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
#include "twistlab/oracle.h"

#include <bit>
#include <cmath>

#include "twistlab/errors.h"

namespace twistlab {

namespace {

using cd = std::complex<double>;

const cd I_POW[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};

void check_capacity(size_t n) {
    if (n > DenseState::MAX_QUBITS) {
        throw CapacityError("dense oracle is capped at " + std::to_string(DenseState::MAX_QUBITS) + " qubits");
    }
}

}  // namespace

DenseState::DenseState(size_t num_qubits) : n_(num_qubits) {
    check_capacity(num_qubits);
    amps_.assign(size_t{1} << n_, cd(0, 0));
    amps_[0] = 1;
}

std::vector<cd> dense_pauli_action(const PauliOperator &p, const std::vector<cd> &amps) {
    size_t n = p.num_sites();
    check_capacity(n);
    if (amps.size() != (size_t{1} << n)) {
        throw DimensionError("state vector length does not match operator size");
    }
    uint64_t xm = n ? p.x_words()[0] : 0;
    uint64_t zm = n ? p.z_words()[0] : 0;
    std::vector<cd> out(amps.size());
    for (uint64_t b = 0; b < amps.size(); b++) {
        int k = p.phase_exp() + 2 * (std::popcount(zm & b) & 1);
        out[b ^ xm] = I_POW[k & 3] * amps[b];
    }
    return out;
}

std::vector<cd> DenseState::pauli_image(const PauliOperator &p) const {
    if (p.num_sites() != n_) {
        throw DimensionError("operator size does not match dense state");
    }
    return dense_pauli_action(p, amps_);
}

void DenseState::apply_gate(Gate gate, std::span<const size_t> sites) {
    if (sites.size() != gate_arity(gate)) {
        throw ContractViolation(std::string(gate_name(gate)) + " arity mismatch");
    }
    for (size_t s : sites) {
        if (s >= n_) {
            throw IndexError("site out of range in dense oracle");
        }
    }
    const double r = 1.0 / std::sqrt(2.0);
    size_t a = sites[0];
    uint64_t ma = uint64_t{1} << a;
    if (gate_arity(gate) == 2) {
        uint64_t mb = uint64_t{1} << sites[1];
        for (uint64_t b = 0; b < amps_.size(); b++) {
            if (gate == Gate::CZ) {
                if ((b & ma) && (b & mb)) {
                    amps_[b] = -amps_[b];
                }
            } else if ((b & ma) && !(b & mb)) {
                std::swap(amps_[b], amps_[b | mb]);
            }
        }
        return;
    }
    cd m00, m01, m10, m11;
    switch (gate) {
        case Gate::H:
            m00 = r, m01 = r, m10 = r, m11 = -r;
            break;
        case Gate::S:
            m00 = 1, m01 = 0, m10 = 0, m11 = cd(0, 1);
            break;
        case Gate::S_DAG:
            m00 = 1, m01 = 0, m10 = 0, m11 = cd(0, -1);
            break;
        case Gate::X:
            m00 = 0, m01 = 1, m10 = 1, m11 = 0;
            break;
        case Gate::Y:
            m00 = 0, m01 = cd(0, -1), m10 = cd(0, 1), m11 = 0;
            break;
        case Gate::Z:
            m00 = 1, m01 = 0, m10 = 0, m11 = -1;
            break;
        default:
            throw ContractViolation("unreachable gate");
    }
    for (uint64_t b = 0; b < amps_.size(); b++) {
        if (b & ma) {
            continue;
        }
        cd v0 = amps_[b];
        cd v1 = amps_[b | ma];
        amps_[b] = m00 * v0 + m01 * v1;
        amps_[b | ma] = m10 * v0 + m11 * v1;
    }
}

void DenseState::apply_gate(Gate gate, size_t a) {
    size_t s[1] = {a};
    apply_gate(gate, std::span<const size_t>(s, 1));
}

void DenseState::apply_gate(Gate gate, size_t a, size_t b) {
    size_t s[2] = {a, b};
    apply_gate(gate, std::span<const size_t>(s, 2));
}

void DenseState::apply_pauli(const PauliOperator &p) {
    if (!p.is_hermitian()) {
        throw ContractViolation("dense apply_pauli needs a Hermitian operator");
    }
    amps_ = pauli_image(p);
}

void DenseState::apply_rotation(const PauliOperator &q) {
    if (!q.is_hermitian()) {
        throw ContractViolation("dense apply_rotation needs a Hermitian operator");
    }
    std::vector<cd> qpsi = pauli_image(q);
    const double r = 1.0 / std::sqrt(2.0);
    for (size_t b = 0; b < amps_.size(); b++) {
        amps_[b] = r * (amps_[b] + cd(0, 1) * qpsi[b]);
    }
}

double DenseState::expectation(const PauliOperator &p) const {
    if (!p.is_hermitian()) {
        throw ContractViolation("dense expectation needs a Hermitian operator");
    }
    std::vector<cd> ppsi = pauli_image(p);
    cd acc = 0;
    for (size_t b = 0; b < amps_.size(); b++) {
        acc += std::conj(amps_[b]) * ppsi[b];
    }
    return acc.real();
}

double DenseState::norm() const {
    double acc = 0;
    for (const auto &a : amps_) {
        acc += std::norm(a);
    }
    return std::sqrt(acc);
}

double overlap_magnitude(const std::vector<cd> &a, const std::vector<cd> &b) {
    if (a.size() != b.size()) {
        throw DimensionError("overlap of vectors with different lengths");
    }
    cd acc = 0;
    for (size_t k = 0; k < a.size(); k++) {
        acc += std::conj(a[k]) * b[k];
    }
    return std::abs(acc);
}

}  // namespace twistlab
