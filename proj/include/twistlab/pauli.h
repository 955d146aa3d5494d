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
#ifndef TWISTLAB_PAULI_H
#define TWISTLAB_PAULI_H

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "twistlab/bits.h"

namespace twistlab {

/// An n-site Pauli operator i^phase_exp * prod_j X_j^{x_j} Z_j^{z_j}.
///
/// The per-site convention is Y = iXZ, so a site with x = z = 1 carries a
/// letter Y only together with one unit of phase.
class PauliOperator {
   public:
    PauliOperator() = default;
    explicit PauliOperator(size_t num_sites);

    /// Parses the text form: an optional phase prefix from {+, i, -, -i}
    /// followed by either dense letters ("XIZY") or sparse site:letter
    /// tokens ("Z14 X19"). Sparse sites are 0-based.
    static PauliOperator parse(std::string_view text, size_t num_sites);
    static PauliOperator single(size_t num_sites, size_t site, char letter);

    size_t num_sites() const {
        return n_;
    }
    size_t num_words() const {
        return xs_.size();
    }
    uint8_t phase_exp() const {
        return phase_;
    }
    void set_phase_exp(int k) {
        phase_ = (uint8_t)(((k % 4) + 4) % 4);
    }
    void add_phase_exp(int k) {
        set_phase_exp(phase_ + k);
    }

    bool x(size_t site) const;
    bool z(size_t site) const;
    /// Letter at a site in {I, X, Y, Z}.
    char letter(size_t site) const;
    /// Replaces the letter at a site, keeping the letter-form phase fixed.
    void set_letter(size_t site, char letter);

    const bits::word_t *x_words() const {
        return xs_.data();
    }
    const bits::word_t *z_words() const {
        return zs_.data();
    }
    bits::word_t *x_words() {
        return xs_.data();
    }
    bits::word_t *z_words() {
        return zs_.data();
    }

    size_t weight() const;
    std::vector<size_t> support() const;
    size_t num_y() const;
    bool is_identity_up_to_phase() const;
    bool is_identity() const;

    /// Phase relative to the letter form: self = i^letter_phase * (letters).
    uint8_t letter_phase() const;
    /// For a Hermitian operator, +1 or -1 relative to its letter form.
    int sign() const;
    /// Returns the operator with the same letters and letter-form phase i^k.
    PauliOperator with_letter_phase(int k) const;

    bool commutes(const PauliOperator &other) const;
    bool is_hermitian() const;
    bool same_letters(const PauliOperator &other) const;

    PauliOperator operator*(const PauliOperator &rhs) const;
    PauliOperator &operator*=(const PauliOperator &rhs);
    bool operator==(const PauliOperator &other) const;
    bool operator!=(const PauliOperator &other) const {
        return !(*this == other);
    }

    /// Sparse text form, e.g. "+X0 Z3" or "-iZ14 X19". Identity prints as "+I".
    std::string str() const;
    /// Dense text form, e.g. "+XIZY".
    std::string dense_str() const;

   private:
    void check_site(size_t site) const;
    void check_same_size(const PauliOperator &other) const;

    size_t n_ = 0;
    uint8_t phase_ = 0;
    std::vector<bits::word_t> xs_;
    std::vector<bits::word_t> zs_;
};

PauliOperator multiply(const PauliOperator &p, const PauliOperator &q);
bool commutes(const PauliOperator &p, const PauliOperator &q);
bool is_hermitian(const PauliOperator &p);

std::ostream &operator<<(std::ostream &out, const PauliOperator &p);

}  // namespace twistlab

#endif
