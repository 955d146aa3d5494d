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

#include <gtest/gtest.h>

#include <complex>
#include <random>

#include "test_util.h"
#include "twistlab/errors.h"

using namespace twistlab;
using twistlab_test::matmul;
using twistlab_test::random_pauli;
using twistlab_test::raw_matrix;

namespace {

PauliOperator raw(size_t n, uint64_t x, uint64_t z, int k) {
    PauliOperator p(n);
    for (size_t q = 0; q < n; q++) {
        bool bx = (x >> q) & 1, bz = (z >> q) & 1;
        p.set_letter(q, "IXZY"[bx + 2 * bz]);
    }
    p.set_phase_exp(k);
    return p;
}

// Zig-zag labels from the 30-qubit layout shifted to 0-based sites.
PauliOperator zigzag(std::string text) {
    std::string out;
    size_t k = 0;
    while (k < text.size()) {
        if (isdigit((unsigned char)text[k])) {
            size_t j = k;
            while (j < text.size() && isdigit((unsigned char)text[j])) {
                j++;
            }
            out += std::to_string(std::stoi(text.substr(k, j - k)) - 1);
            k = j;
        } else {
            out += text[k++];
        }
    }
    return PauliOperator::parse(out, 30);
}

}  // namespace

TEST(pauli, z_times_x_is_i_y) {
    PauliOperator z = PauliOperator::single(1, 0, 'Z');
    PauliOperator x = PauliOperator::single(1, 0, 'X');
    PauliOperator y = PauliOperator::single(1, 0, 'Y');
    PauliOperator zx = z * x;
    EXPECT_TRUE(zx.same_letters(y));
    EXPECT_EQ(zx, y.with_letter_phase(1));
    EXPECT_EQ(zx.str(), "+iY0");
}

TEST(pauli, identity_is_neutral) {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 50; rep++) {
        PauliOperator p = random_pauli(9, rng, false);
        EXPECT_EQ(p * PauliOperator(9), p);
        EXPECT_EQ(PauliOperator(9) * p, p);
    }
}

TEST(pauli, single_site_table_matches_matrices) {
    for (int a = 0; a < 4; a++) {
        for (int b = 0; b < 4; b++) {
            PauliOperator pa = PauliOperator::single(1, 0, "IXYZ"[a]);
            PauliOperator pb = PauliOperator::single(1, 0, "IXYZ"[b]);
            auto expect = matmul(raw_matrix(pa), raw_matrix(pb), 2);
            EXPECT_EQ(raw_matrix(pa * pb), expect) << a << "," << b;
        }
    }
}

TEST(pauli, letter_y_matrix) {
    using cd = std::complex<double>;
    auto m = raw_matrix(PauliOperator::single(1, 0, 'Y'));
    EXPECT_EQ(m[0 * 2 + 1], cd(0, -1));
    EXPECT_EQ(m[1 * 2 + 0], cd(0, 1));
}

TEST(pauli, hermiticity_examples) {
    EXPECT_TRUE(PauliOperator::single(1, 0, 'Y').is_hermitian());
    PauliOperator iz = PauliOperator::single(1, 0, 'Z');
    iz.set_phase_exp(1);
    EXPECT_FALSE(iz.is_hermitian());
}

TEST(pauli, majorana_pair_on_thirty_sites) {
    PauliOperator c1 = zigzag("Z14 X19 Z25 X26");
    PauliOperator c2 = zigzag("Z20 X14 Z8 Z7 X1 Z2 Z9 X15");
    EXPECT_FALSE(c1.commutes(c2));
    EXPECT_FALSE(commutes(c2, c1));
    PauliOperator pair = c1 * c2;
    pair.add_phase_exp(3);
    EXPECT_TRUE(is_hermitian(pair));
    EXPECT_EQ(c1 * c2, (c2 * c1).with_letter_phase((c2 * c1).letter_phase() + 2));
}

TEST(pauli, length_mismatch_is_dimension_error) {
    EXPECT_THROW(PauliOperator(3) * PauliOperator(4), DimensionError);
    EXPECT_THROW(PauliOperator(3).commutes(PauliOperator(4)), DimensionError);
}

TEST(pauli, parse_and_print) {
    PauliOperator p = PauliOperator::parse("-i Z14 X19 Z25 X26", 30);
    EXPECT_EQ(p.letter(14), 'Z');
    EXPECT_EQ(p.letter(19), 'X');
    EXPECT_EQ(p.letter_phase(), 3);
    EXPECT_EQ(p.str(), "-iZ14 X19 Z25 X26");
    EXPECT_EQ(PauliOperator::parse(p.str(), 30), p);
    PauliOperator d = PauliOperator::parse("+XIZY", 4);
    EXPECT_EQ(d.dense_str(), "+XIZY");
    EXPECT_EQ(d.sign(), 1);
    EXPECT_EQ(PauliOperator::parse("-Y0", 1).sign(), -1);
    EXPECT_EQ(PauliOperator(3).str(), "+I");
    EXPECT_EQ(PauliOperator::parse("+I", 3), PauliOperator(3));
    EXPECT_THROW(PauliOperator::parse("X5", 3), IndexError);
    EXPECT_THROW(PauliOperator::parse("Q1", 3), ParseError);
    EXPECT_THROW(PauliOperator::parse("XX", 3), DimensionError);
}

TEST(pauli, round_trip_random) {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 200; rep++) {
        PauliOperator p = random_pauli(70, rng, false);
        EXPECT_EQ(PauliOperator::parse(p.str(), 70), p);
        EXPECT_EQ(PauliOperator::parse(p.dense_str(), 70), p);
    }
}

TEST(pauli, square_recovers_operand) {
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 200; rep++) {
        PauliOperator p = random_pauli(20, rng, false);
        PauliOperator q = random_pauli(20, rng, false);
        PauliOperator r = random_pauli(20, rng, false);
        EXPECT_EQ((p * q) * r, p * (q * r));
        EXPECT_EQ(is_hermitian(p), (p * p).is_identity());
    }
}

TEST(pauli, commutation_symmetry_and_phase_gap) {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 500; rep++) {
        PauliOperator p = random_pauli(1 + rng() % 130, rng, false);
        PauliOperator q = random_pauli(p.num_sites(), rng, false);
        bool c = p.commutes(q);
        EXPECT_EQ(c, q.commutes(p));
        PauliOperator pq = p * q, qp = q * p;
        EXPECT_TRUE(pq.same_letters(qp));
        int gap = (pq.phase_exp() - qp.phase_exp() + 4) % 4;
        EXPECT_EQ(gap, c ? 0 : 2);
    }
}

TEST(pauli, exhaustive_against_dense_matrices) {
    for (size_t n = 1; n <= 3; n++) {
        size_t d = size_t{1} << n;
        std::vector<PauliOperator> all;
        for (uint64_t x = 0; x < d; x++) {
            for (uint64_t z = 0; z < d; z++) {
                for (int k = 0; k < 4; k++) {
                    all.push_back(raw(n, x, z, k));
                }
            }
        }
        std::vector<std::vector<std::complex<double>>> mats;
        for (const auto &p : all) {
            mats.push_back(raw_matrix(p));
        }
        std::vector<std::complex<double>> id(d * d, 0);
        for (size_t k = 0; k < d; k++) {
            id[k * d + k] = 1;
        }
        for (size_t a = 0; a < all.size(); a++) {
            EXPECT_EQ(all[a].is_hermitian(), matmul(mats[a], mats[a], d) == id);
            for (size_t b = 0; b < all.size(); b += (n == 3 ? 3 : 1)) {
                auto ab = matmul(mats[a], mats[b], d);
                ASSERT_EQ(raw_matrix(all[a] * all[b]), ab);
                bool comm = ab == matmul(mats[b], mats[a], d);
                ASSERT_EQ(all[a].commutes(all[b]), comm);
            }
        }
    }
}
