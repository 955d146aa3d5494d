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
#ifndef TWISTLAB_BRAIDING_H
#define TWISTLAB_BRAIDING_H

#include <map>
#include <string>
#include <vector>

#include "twistlab/compiler.h"
#include "twistlab/lattice.h"
#include "twistlab/strings.h"
#include "twistlab/tableau.h"

namespace twistlab {

struct BraidGenerator {
    size_t i;
    size_t j;
    bool inverse = false;

    bool operator==(const BraidGenerator &) const = default;
    std::string str() const;
};

/// Whitespace-separated generators such as "B12 B45'"; "B10,11" spells two-digit labels.
struct BraidWord {
    std::vector<BraidGenerator> gens;

    static BraidWord parse(const std::string &text);
    std::string str() const;
    BraidWord shifted(size_t offset) const;
    BraidWord inverse() const;
};

/// Tracks each frame slot T_i as a signed encoding operator s_i c_{l_i}.
class MajoranaFrame {
   public:
    MajoranaFrame() = default;
    explicit MajoranaFrame(MajoranaEncoding encoding);

    size_t size() const {
        return slots_.size();
    }
    /// Logical qubits of the dense encoding: one fewer than the number of twist pairs.
    size_t num_logical_qubits() const {
        return slots_.size() / 2 - 1;
    }
    const MajoranaEncoding &encoding() const {
        return enc_;
    }
    int sign(size_t i) const;
    size_t label(size_t i) const;
    PauliOperator op(size_t i) const;
    /// -i T_i T_j under the current frame.
    PauliOperator correlator(size_t i, size_t j) const;

    /// B_ij: T_i -> -T_j, T_j -> T_i; the inverse is T_i -> T_j, T_j -> -T_i.
    void braid(const BraidGenerator &g);
    void braid(const BraidWord &w);
    bool is_identity() const;
    bool same_action(const MajoranaFrame &other) const;
    /// e.g. "c1->c3 c2->-c2 c3->c1 c4->c4".
    std::string str() const;

    /// Z_q = prod_{j<=q} (-i T_{2j-1} T_{2j}), X_q = -i T_{2q} T_{2q+1}, Y_q = i X_q Z_q.
    PauliOperator logical(char pauli, size_t q) const;
    /// A logical Pauli product with one letter per logical qubit, e.g. "XZ" or "IYX".
    PauliOperator logical_product(const std::string &letters) const;
    /// Current bindings "Z1", "X1", "Y1", ..., refreshed after every generator.
    const std::map<std::string, PauliOperator> &table() const {
        return table_;
    }

   private:
    void refresh();

    MajoranaEncoding enc_;
    std::vector<std::pair<int, size_t>> slots_;
    std::map<std::string, PauliOperator> table_;
};

enum class LogicalGate { Z, X, H, CX };
enum class GateMode { FrameTracking, PauliApplication, CodeDeformation };

LogicalGate parse_logical_gate(const std::string &name);
GateMode parse_gate_mode(const std::string &name);
const char *gate_mode_name(GateMode m);

/// Braid word of a logical gate. CX is control 1, target 2 of a six-twist encoding.
BraidWord logical_gate_word(LogicalGate gate, size_t qubit, size_t num_logical_qubits);

/// Rotation generator realising one braid generator on the physical state: Q = -i T_j T_i for B_ij.
PauliOperator physical_braid_generator(const MajoranaFrame &frame, const BraidGenerator &g);

/// Physical circuit realising a logical gate in a physical mode (empty for frame tracking).
Circuit logical_gate_circuit(const MajoranaFrame &frame, LogicalGate gate, GateMode mode, size_t qubit = 1);

void logical_gate(MajoranaFrame &frame, StabilizerTableau &state, LogicalGate gate, GateMode mode, size_t qubit = 1);

/// Expectation of a logical observable from the frame table ("Z1") or a product ("XX").
int measure_logical(const MajoranaFrame &frame, const StabilizerTableau &state, const std::string &observable);

/// Applies exp(i pi/4 Q) with Q = -i c_i c_j of the current frame; the global phase is dropped.
void single_braid_unitary(const MajoranaFrame &frame, StabilizerTableau &state, size_t i, size_t j);

/// Named stabilizer set currently imposed on the state.
struct StabilizerGraph {
    std::vector<std::string> labels;
    std::vector<PauliOperator> ops;

    static StabilizerGraph from_lattice(const Lattice &lattice);
    void add(const std::string &label, const PauliOperator &op);
    size_t index(const std::string &label) const;
};

struct DeformationStep {
    std::string old_label;
    std::string new_label;
    PauliOperator s_new;
};

/// Applies exp(pi/4 S_new S_old) per step and swaps S_old for S_new in the graph.
void deform_code(StabilizerTableau &state, StabilizerGraph &graph, const std::vector<DeformationStep> &plan);

/// The circuit of one step against the current graph, after validating it.
Circuit deformation_step_circuit(const StabilizerGraph &graph, const DeformationStep &step);

}  // namespace twistlab

#endif
