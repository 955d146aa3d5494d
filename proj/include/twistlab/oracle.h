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
#ifndef TWISTLAB_ORACLE_H
#define TWISTLAB_ORACLE_H

#include <complex>
#include <span>
#include <vector>

#include "twistlab/gates.h"
#include "twistlab/pauli.h"

namespace twistlab {

/// Dense state vector reference simulator. Qubit q is bit q of the basis index.
class DenseState {
   public:
    static constexpr size_t MAX_QUBITS = 12;

    explicit DenseState(size_t num_qubits);

    size_t num_qubits() const {
        return n_;
    }
    const std::vector<std::complex<double>> &amplitudes() const {
        return amps_;
    }
    std::vector<std::complex<double>> &amplitudes() {
        return amps_;
    }

    void apply_gate(Gate gate, std::span<const size_t> sites);
    void apply_gate(Gate gate, size_t a);
    void apply_gate(Gate gate, size_t a, size_t b);
    void apply_pauli(const PauliOperator &p);
    /// exp(i pi/4 Q) = (I + iQ)/sqrt(2).
    void apply_rotation(const PauliOperator &q);

    double expectation(const PauliOperator &p) const;
    double norm() const;

   private:
    std::vector<std::complex<double>> pauli_image(const PauliOperator &p) const;

    size_t n_;
    std::vector<std::complex<double>> amps_;
};

/// Returns P|psi> for the amplitudes of psi.
std::vector<std::complex<double>> dense_pauli_action(
    const PauliOperator &p, const std::vector<std::complex<double>> &amps);

/// |<a|b>| for equal-length state vectors.
double overlap_magnitude(const std::vector<std::complex<double>> &a, const std::vector<std::complex<double>> &b);

}  // namespace twistlab

#endif
