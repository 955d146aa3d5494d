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

#ifdef TWISTLAB_HAVE_AVX2

#include <immintrin.h>

#include <bit>

namespace twistlab {
namespace bits {

namespace {

// Nibble lookup popcount (Mula), summed per 64-bit lane with SAD.
inline __m256i popcount_epi64(__m256i v) {
    const __m256i lookup = _mm256_setr_epi8(
        0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
    const __m256i low_mask = _mm256_set1_epi8(0x0f);
    __m256i lo = _mm256_and_si256(v, low_mask);
    __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
    __m256i counts = _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo), _mm256_shuffle_epi8(lookup, hi));
    return _mm256_sad_epu8(counts, _mm256_setzero_si256());
}

inline size_t horizontal_sum(__m256i v) {
    return (size_t)_mm256_extract_epi64(v, 0) + (size_t)_mm256_extract_epi64(v, 1) +
           (size_t)_mm256_extract_epi64(v, 2) + (size_t)_mm256_extract_epi64(v, 3);
}

inline __m256i load(const word_t *p) {
    return _mm256_loadu_si256(reinterpret_cast<const __m256i *>(p));
}

inline void store(word_t *p, __m256i v) {
    _mm256_storeu_si256(reinterpret_cast<__m256i *>(p), v);
}

void avx2_xor_into(word_t *dst, const word_t *src, size_t num_words) {
    size_t k = 0;
    for (; k + 4 <= num_words; k += 4) {
        store(dst + k, _mm256_xor_si256(load(dst + k), load(src + k)));
    }
    for (; k < num_words; k++) {
        dst[k] ^= src[k];
    }
}

size_t avx2_and_popcount(const word_t *a, const word_t *b, size_t num_words) {
    __m256i acc = _mm256_setzero_si256();
    size_t k = 0;
    for (; k + 4 <= num_words; k += 4) {
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(load(a + k), load(b + k))));
    }
    size_t total = horizontal_sum(acc);
    for (; k < num_words; k++) {
        total += std::popcount(a[k] & b[k]);
    }
    return total;
}

bool avx2_symplectic_parity(
    const word_t *x1, const word_t *z1, const word_t *x2, const word_t *z2, size_t num_words) {
    __m256i acc = _mm256_setzero_si256();
    size_t k = 0;
    for (; k + 4 <= num_words; k += 4) {
        __m256i t = _mm256_xor_si256(
            _mm256_and_si256(load(x1 + k), load(z2 + k)), _mm256_and_si256(load(z1 + k), load(x2 + k)));
        acc = _mm256_xor_si256(acc, t);
    }
    word_t tail = (word_t)_mm256_extract_epi64(acc, 0) ^ (word_t)_mm256_extract_epi64(acc, 1) ^
                  (word_t)_mm256_extract_epi64(acc, 2) ^ (word_t)_mm256_extract_epi64(acc, 3);
    for (; k < num_words; k++) {
        tail ^= (x1[k] & z2[k]) ^ (z1[k] & x2[k]);
    }
    return std::popcount(tail) & 1;
}

size_t avx2_multiply_into(word_t *dx, word_t *dz, const word_t *sx, const word_t *sz, size_t num_words) {
    __m256i acc = _mm256_setzero_si256();
    size_t k = 0;
    for (; k + 4 <= num_words; k += 4) {
        __m256i vdz = load(dz + k);
        __m256i vsx = load(sx + k);
        acc = _mm256_add_epi64(acc, popcount_epi64(_mm256_and_si256(vdz, vsx)));
        store(dx + k, _mm256_xor_si256(load(dx + k), vsx));
        store(dz + k, _mm256_xor_si256(vdz, load(sz + k)));
    }
    size_t total = horizontal_sum(acc);
    for (; k < num_words; k++) {
        total += std::popcount(dz[k] & sx[k]);
        dx[k] ^= sx[k];
        dz[k] ^= sz[k];
    }
    return total;
}

const Kernels AVX2{
    "avx2",
    avx2_xor_into,
    avx2_and_popcount,
    avx2_symplectic_parity,
    avx2_multiply_into,
};

}  // namespace

const Kernels *avx2_kernels() {
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
    return supported ? &AVX2 : nullptr;
}

}  // namespace bits
}  // namespace twistlab

#else

namespace twistlab {
namespace bits {

const Kernels *avx2_kernels() {
    return nullptr;
}

}  // namespace bits
}  // namespace twistlab

#endif
