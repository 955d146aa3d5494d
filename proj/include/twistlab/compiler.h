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
#ifndef TWISTLAB_COMPILER_H
#define TWISTLAB_COMPILER_H

#include <map>
#include <string>
#include <vector>

#include "twistlab/gates.h"
#include "twistlab/lattice.h"
#include "twistlab/oracle.h"
#include "twistlab/pauli.h"
#include "twistlab/strings.h"
#include "twistlab/tableau.h"

namespace twistlab {

struct GateOp {
    Gate gate;
    size_t a;
    size_t b = 0;

    bool operator==(const GateOp &) const = default;
};

/// A layered Clifford program. Each layer holds only single-qubit or only two-qubit gates.
class Circuit {
   public:
    Circuit() = default;
    explicit Circuit(size_t num_qubits) : n_(num_qubits) {
    }

    /// Schedules a gate sequence as soon as possible, keeping single- and two-qubit layers apart.
    static Circuit from_sequence(size_t num_qubits, const std::vector<GateOp> &ops);
    /// Parses "qubits N" followed by lines "idx GATE s1[,s2]; GATE ...".
    static Circuit parse(const std::string &text);

    size_t num_qubits() const {
        return n_;
    }
    const std::vector<std::vector<GateOp>> &layers() const {
        return layers_;
    }
    size_t depth() const {
        return layers_.size();
    }
    size_t single_qubit_count() const;
    size_t two_qubit_count() const;
    std::vector<GateOp> sequence() const;

    /// Appends a layer; throws if a site repeats or gate arities are mixed.
    void append_layer(std::vector<GateOp> layer);
    void append(const Circuit &other);
    Circuit inverse() const;

    void apply(StabilizerTableau &t) const;
    void apply(DenseState &s) const;

    std::string str() const;

   private:
    size_t n_ = 0;
    std::vector<std::vector<GateOp>> layers_;
};

/// Target signs for the fermion-charge strings -i c_a c_b, keyed by "c<a>c<b>". Missing pairs default to +1.
struct FusionChargeAssignment {
    std::map<std::string, int> signs;

    int sign_of(const std::string &key) const;
};

struct Checkpoint {
    /// Representative block label, or "basis" for the single-qubit preparation layer.
    std::string stage;
    /// Expectation of every target after the stage.
    std::vector<int> expectations;
};

struct CompiledState {
    Circuit circuit;
    std::vector<std::string> target_labels;
    std::vector<PauliOperator> targets;
    std::vector<int> target_signs;
    /// Labels of the strings actually initialised, after chaining.
    std::vector<std::string> fermion_strings;
    std::vector<Checkpoint> checkpoints;
    /// Representative site index per block label.
    std::map<std::string, size_t> representatives;
};

/// The fermion-charge strings -i c1c2, -i c3c4, ... of a lattice's Majorana encoding (empty if none).
std::vector<std::pair<std::string, PauliOperator>> fermion_charge_strings(const Lattice &lattice);

CompiledState compile_ground_state(const Lattice &lattice, const FusionChargeAssignment &charges = {});

/// Prepares the joint +1 state of explicit independent commuting targets with the same method.
CompiledState compile_stabilizer_state(size_t num_qubits, const std::vector<std::string> &labels,
                                       const std::vector<PauliOperator> &targets, const std::vector<int> &signs,
                                       size_t basis_count = 0);

/// One layer of X/Y/Z letters; the global phase is dropped.
Circuit compile_pauli_unitary(const PauliOperator &p);

/// exp(i pi/4 Q) by basis change, CX ladder, S or S_DAG, and the inverse ladder.
Circuit compile_pauli_rotation(const PauliOperator &q);

/// exp(pi/4 S_new S_old) = exp(i pi/4 Q) with Q = -i S_new S_old; coinciding operators give the identity.
Circuit compile_deformation_step(const PauliOperator &s_old, const PauliOperator &s_new);
PauliOperator deformation_generator(const PauliOperator &s_old, const PauliOperator &s_new);

/// A Pauli whose commutation with each op matches parity[k] (true = anticommute).
PauliOperator solve_flip(const std::vector<PauliOperator> &ops, const std::vector<bool> &parity);

}  // namespace twistlab

#endif
