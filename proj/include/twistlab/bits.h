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

#ifndef TWISTLAB_BITS_H
#define TWISTLAB_BITS_H

#include <cstddef>
#include <cstdint>

namespace twistlab {
namespace bits {

using word_t = uint64_t;
constexpr size_t WORD_BITS = 64;

inline size_t words_for(size_t n) {
    return (n + WORD_BITS - 1) / WORD_BITS;
}

/// Kernel table for bit-packed symplectic row operations.
struct Kernels {
    const char *name;
    void (*xor_into)(word_t *dst, const word_t *src, size_t num_words);
    size_t (*and_popcount)(const word_t *a, const word_t *b, size_t num_words);
    /// Parity of popcount((x1 & z2) ^ (z1 & x2)).
    bool (*symplectic_parity)(const word_t *x1, const word_t *z1, const word_t *x2, const word_t *z2, size_t num_words);
    /// Computes popcount(dz & sx), then XORs (sx, sz) into (dx, dz).
    size_t (*multiply_into)(word_t *dx, word_t *dz, const word_t *sx, const word_t *sz, size_t num_words);
};

const Kernels &scalar_kernels();

/// Returns nullptr when the AVX2 variant was not compiled in or the CPU lacks it.
const Kernels *avx2_kernels();

/// Kernels selected at startup. Set TWISTLAB_FORCE_SCALAR=1 to pin the scalar path.
const Kernels &active_kernels();

inline void xor_into(word_t *dst, const word_t *src, size_t num_words) {
    active_kernels().xor_into(dst, src, num_words);
}
inline size_t and_popcount(const word_t *a, const word_t *b, size_t num_words) {
    return active_kernels().and_popcount(a, b, num_words);
}
inline bool symplectic_parity(const word_t *x1, const word_t *z1, const word_t *x2, const word_t *z2, size_t num_words) {
    return active_kernels().symplectic_parity(x1, z1, x2, z2, num_words);
}
inline size_t multiply_into(word_t *dx, word_t *dz, const word_t *sx, const word_t *sz, size_t num_words) {
    return active_kernels().multiply_into(dx, dz, sx, sz, num_words);
}

}  // namespace bits
}  // namespace twistlab

#endif
