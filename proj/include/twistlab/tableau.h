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
#ifndef TWISTLAB_TABLEAU_H
#define TWISTLAB_TABLEAU_H

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "twistlab/gates.h"
#include "twistlab/pauli.h"

namespace twistlab {

/// Stabilizer state on n qubits, kept as signed stabilizer rows paired with destabilizers.
class StabilizerTableau {
   public:
    explicit StabilizerTableau(size_t num_qubits, uint64_t seed = 0);

    /// The state |0...0>: stabilizers +Z_j, destabilizers X_j.
    static StabilizerTableau new_zero_state(size_t num_qubits, uint64_t seed = 0);

    size_t num_qubits() const {
        return n_;
    }
    const PauliOperator &stabilizer(size_t k) const {
        return stabilizers_.at(k);
    }
    const PauliOperator &destabilizer(size_t k) const {
        return destabilizers_.at(k);
    }

    void apply_gate(Gate gate, std::span<const size_t> sites);
    void apply_gate(Gate gate, size_t a);
    void apply_gate(Gate gate, size_t a, size_t b);

    /// Applies a Hermitian Pauli as a unitary.
    void apply_pauli_unitary(const PauliOperator &p);
    /// Applies exp(i pi/4 Q) for a Hermitian Pauli Q.
    void apply_pauli_rotation(const PauliOperator &q);

    /// +1 or -1 when +P or -P is in the stabilizer group, 0 otherwise.
    int expectation(const PauliOperator &p) const;
    /// Projective measurement of a Hermitian Pauli. Random outcomes come from the owned generator.
    int measure(const PauliOperator &p);

    /// Throws ContractViolation when a tableau invariant is broken.
    void validate() const;

    /// One stabilizer per line in sparse text form.
    std::string dump() const;

    void reseed(uint64_t seed) {
        rng_.seed(seed);
    }
    std::mt19937_64 &rng() {
        return rng_;
    }

   private:
    void check_operator(const PauliOperator &p, const char *what) const;

    size_t n_;
    std::vector<PauliOperator> stabilizers_;
    std::vector<PauliOperator> destabilizers_;
    std::mt19937_64 rng_;
};

/// Rank over GF(2) of the symplectic vectors of a list of Paulis.
size_t symplectic_rank(const std::vector<PauliOperator> &ops);

}  // namespace twistlab

#endif
