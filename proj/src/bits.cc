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

#include "twistlab/bits.h"

#include <bit>
#include <cstdlib>

namespace twistlab {
namespace bits {

namespace {

void scalar_xor_into(word_t *dst, const word_t *src, size_t num_words) {
    for (size_t k = 0; k < num_words; k++) {
        dst[k] ^= src[k];
    }
}

size_t scalar_and_popcount(const word_t *a, const word_t *b, size_t num_words) {
    size_t total = 0;
    for (size_t k = 0; k < num_words; k++) {
        total += std::popcount(a[k] & b[k]);
    }
    return total;
}

bool scalar_symplectic_parity(
    const word_t *x1, const word_t *z1, const word_t *x2, const word_t *z2, size_t num_words) {
    word_t acc = 0;
    for (size_t k = 0; k < num_words; k++) {
        acc ^= (x1[k] & z2[k]) ^ (z1[k] & x2[k]);
    }
    return std::popcount(acc) & 1;
}

size_t scalar_multiply_into(word_t *dx, word_t *dz, const word_t *sx, const word_t *sz, size_t num_words) {
    size_t total = 0;
    for (size_t k = 0; k < num_words; k++) {
        total += std::popcount(dz[k] & sx[k]);
        dx[k] ^= sx[k];
        dz[k] ^= sz[k];
    }
    return total;
}

const Kernels SCALAR{
    "scalar",
    scalar_xor_into,
    scalar_and_popcount,
    scalar_symplectic_parity,
    scalar_multiply_into,
};

const Kernels &select_kernels() {
    const char *force = std::getenv("TWISTLAB_FORCE_SCALAR");
    if (force != nullptr && force[0] == '1') {
        return SCALAR;
    }
    const Kernels *k = avx2_kernels();
    return k != nullptr ? *k : SCALAR;
}

}  // namespace

const Kernels &scalar_kernels() {
    return SCALAR;
}

const Kernels &active_kernels() {
    static const Kernels &k = select_kernels();
    return k;
}

}  // namespace bits
}  // namespace twistlab
