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
#include "twistlab/pauli.h"

#include <bit>
#include <cctype>
#include <ostream>

#include "twistlab/errors.h"

namespace twistlab {

namespace {

const char *const PHASE_PREFIX[4] = {"+", "+i", "-", "-i"};

void letter_bits(char letter, bool &x, bool &z) {
    switch (letter) {
        case 'I':
        case '_':
            x = false;
            z = false;
            return;
        case 'X':
            x = true;
            z = false;
            return;
        case 'Y':
            x = true;
            z = true;
            return;
        case 'Z':
            x = false;
            z = true;
            return;
        default:
            throw ParseError(std::string("not a Pauli letter: '") + letter + "'");
    }
}

}  // namespace

PauliOperator::PauliOperator(size_t num_sites)
    : n_(num_sites), xs_(bits::words_for(num_sites), 0), zs_(bits::words_for(num_sites), 0) {
}

PauliOperator PauliOperator::single(size_t num_sites, size_t site, char letter) {
    PauliOperator p(num_sites);
    p.set_letter(site, letter);
    return p;
}

PauliOperator PauliOperator::parse(std::string_view text, size_t num_sites) {
    size_t pos = 0;
    auto skip_space = [&]() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) {
            pos++;
        }
    };
    skip_space();
    int m = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        m = text[pos] == '-' ? 2 : 0;
        pos++;
        skip_space();
    }
    if (pos < text.size() && text[pos] == 'i') {
        m += 1;
        pos++;
    }
    std::string_view rest = text.substr(pos);
    bool sparse = false;
    for (char c : rest) {
        sparse |= std::isdigit((unsigned char)c) != 0;
    }

    PauliOperator p(num_sites);
    if (sparse) {
        size_t k = 0;
        while (k < rest.size()) {
            char c = rest[k];
            if (std::isspace((unsigned char)c) || c == ',') {
                k++;
                continue;
            }
            char letter = c;
            k++;
            if (k >= rest.size() || !std::isdigit((unsigned char)rest[k])) {
                throw ParseError("sparse Pauli token needs a site index: " + std::string(text));
            }
            size_t site = 0;
            while (k < rest.size() && std::isdigit((unsigned char)rest[k])) {
                site = site * 10 + (size_t)(rest[k] - '0');
                k++;
            }
            if (site >= num_sites) {
                throw IndexError("site " + std::to_string(site) + " out of range in " + std::string(text));
            }
            if (p.letter(site) != 'I') {
                throw ParseError("site " + std::to_string(site) + " repeated in " + std::string(text));
            }
            p.set_letter(site, letter);
        }
    } else if (rest == "I") {
        // Identity of any size, as printed by str().
    } else {
        size_t site = 0;
        for (char c : rest) {
            if (std::isspace((unsigned char)c)) {
                continue;
            }
            if (site >= num_sites) {
                throw DimensionError("dense Pauli longer than " + std::to_string(num_sites) + " sites");
            }
            p.set_letter(site++, c);
        }
        if (site != num_sites && !(site == 0 && rest.empty())) {
            throw DimensionError("dense Pauli has " + std::to_string(site) + " sites, expected " +
                                 std::to_string(num_sites));
        }
    }
    p.set_phase_exp(m + (int)p.num_y());
    return p;
}

void PauliOperator::check_site(size_t site) const {
    if (site >= n_) {
        throw IndexError("site " + std::to_string(site) + " out of range for " + std::to_string(n_) + " sites");
    }
}

void PauliOperator::check_same_size(const PauliOperator &other) const {
    if (n_ != other.n_) {
        throw DimensionError(
            "Pauli length mismatch: " + std::to_string(n_) + " vs " + std::to_string(other.n_));
    }
}

bool PauliOperator::x(size_t site) const {
    check_site(site);
    return (xs_[site / bits::WORD_BITS] >> (site % bits::WORD_BITS)) & 1;
}

bool PauliOperator::z(size_t site) const {
    check_site(site);
    return (zs_[site / bits::WORD_BITS] >> (site % bits::WORD_BITS)) & 1;
}

char PauliOperator::letter(size_t site) const {
    return "IXZY"[x(site) + 2 * z(site)];
}

void PauliOperator::set_letter(size_t site, char letter) {
    check_site(site);
    bool bx, bz;
    letter_bits(letter, bx, bz);
    uint8_t m = letter_phase();
    bits::word_t bit = bits::word_t{1} << (site % bits::WORD_BITS);
    size_t w = site / bits::WORD_BITS;
    xs_[w] = bx ? (xs_[w] | bit) : (xs_[w] & ~bit);
    zs_[w] = bz ? (zs_[w] | bit) : (zs_[w] & ~bit);
    set_phase_exp(m + (int)num_y());
}

size_t PauliOperator::weight() const {
    size_t total = 0;
    for (size_t k = 0; k < xs_.size(); k++) {
        total += std::popcount(xs_[k] | zs_[k]);
    }
    return total;
}

std::vector<size_t> PauliOperator::support() const {
    std::vector<size_t> out;
    for (size_t k = 0; k < xs_.size(); k++) {
        bits::word_t w = xs_[k] | zs_[k];
        while (w) {
            out.push_back(k * bits::WORD_BITS + (size_t)std::countr_zero(w));
            w &= w - 1;
        }
    }
    return out;
}

size_t PauliOperator::num_y() const {
    return bits::and_popcount(xs_.data(), zs_.data(), xs_.size());
}

bool PauliOperator::is_identity_up_to_phase() const {
    for (size_t k = 0; k < xs_.size(); k++) {
        if (xs_[k] | zs_[k]) {
            return false;
        }
    }
    return true;
}

bool PauliOperator::is_identity() const {
    return phase_ == 0 && is_identity_up_to_phase();
}

uint8_t PauliOperator::letter_phase() const {
    return (uint8_t)((phase_ + 4 - (num_y() & 3)) & 3);
}

int PauliOperator::sign() const {
    uint8_t m = letter_phase();
    if (m & 1) {
        throw ContractViolation("sign() of a non-Hermitian Pauli " + str());
    }
    return m == 0 ? +1 : -1;
}

PauliOperator PauliOperator::with_letter_phase(int k) const {
    PauliOperator p = *this;
    p.set_phase_exp(k + (int)num_y());
    return p;
}

bool PauliOperator::commutes(const PauliOperator &other) const {
    check_same_size(other);
    return !bits::symplectic_parity(xs_.data(), zs_.data(), other.xs_.data(), other.zs_.data(), xs_.size());
}

bool PauliOperator::is_hermitian() const {
    return ((phase_ + num_y()) & 1) == 0;
}

bool PauliOperator::same_letters(const PauliOperator &other) const {
    return n_ == other.n_ && xs_ == other.xs_ && zs_ == other.zs_;
}

PauliOperator &PauliOperator::operator*=(const PauliOperator &rhs) {
    check_same_size(rhs);
    size_t swaps = bits::multiply_into(xs_.data(), zs_.data(), rhs.xs_.data(), rhs.zs_.data(), xs_.size());
    set_phase_exp((int)phase_ + rhs.phase_ + 2 * (int)(swaps & 1));
    return *this;
}

PauliOperator PauliOperator::operator*(const PauliOperator &rhs) const {
    PauliOperator out = *this;
    out *= rhs;
    return out;
}

bool PauliOperator::operator==(const PauliOperator &other) const {
    return n_ == other.n_ && phase_ == other.phase_ && xs_ == other.xs_ && zs_ == other.zs_;
}

std::string PauliOperator::str() const {
    std::string out = PHASE_PREFIX[letter_phase()];
    bool first = true;
    for (size_t site : support()) {
        if (!first) {
            out += ' ';
        }
        first = false;
        out += letter(site);
        out += std::to_string(site);
    }
    if (first) {
        out += 'I';
    }
    return out;
}

std::string PauliOperator::dense_str() const {
    std::string out = PHASE_PREFIX[letter_phase()];
    for (size_t k = 0; k < n_; k++) {
        out += letter(k);
    }
    return out;
}

PauliOperator multiply(const PauliOperator &p, const PauliOperator &q) {
    return p * q;
}

bool commutes(const PauliOperator &p, const PauliOperator &q) {
    return p.commutes(q);
}

bool is_hermitian(const PauliOperator &p) {
    return p.is_hermitian();
}

std::ostream &operator<<(std::ostream &out, const PauliOperator &p) {
    return out << p.str();
}

}  // namespace twistlab
