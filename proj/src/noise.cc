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
#include "twistlab/noise.h"

#include <cmath>

#include "twistlab/errors.h"

namespace twistlab {

void NoiseModel::validate() const {
    for (double p : {p1, p2, p_ro}) {
        if (!(p >= 0 && p <= 1)) {
            throw DomainError("noise probabilities must lie in [0, 1]");
        }
    }
}

double effective_readout_flip(double p_ro, size_t weight) {
    return (1 - std::pow(1 - 2 * p_ro, (double)weight)) / 2;
}

static uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

uint64_t shot_seed(uint64_t master, uint64_t shot) {
    return splitmix64(splitmix64(master) ^ (shot * 0xD1B54A32D192ED03ULL + 1));
}

void apply_random_pauli(StabilizerTableau &t, const size_t *sites, size_t count, std::mt19937_64 &rng) {
    // Letters 0..3 = I, X, Y, Z per site; draw uniformly among the 4^count - 1 non-identity strings.
    uint64_t total = (uint64_t{1} << (2 * count)) - 1;
    uint64_t code = 1 + std::uniform_int_distribution<uint64_t>(0, total - 1)(rng);
    for (size_t k = 0; k < count; k++) {
        switch ((code >> (2 * k)) & 3) {
            case 1:
                t.apply_gate(Gate::X, sites[k]);
                break;
            case 2:
                t.apply_gate(Gate::Y, sites[k]);
                break;
            case 3:
                t.apply_gate(Gate::Z, sites[k]);
                break;
            default:
                break;
        }
    }
}

void apply_noisy(const Circuit &c, StabilizerTableau &t, const NoiseModel &m, std::mt19937_64 &rng) {
    std::uniform_real_distribution<double> u(0, 1);
    for (const auto &layer : c.layers()) {
        for (const auto &g : layer) {
            if (gate_arity(g.gate) == 2) {
                t.apply_gate(g.gate, g.a, g.b);
                if (m.p2 > 0 && u(rng) < m.p2) {
                    size_t s[2] = {g.a, g.b};
                    apply_random_pauli(t, s, 2, rng);
                }
            } else {
                t.apply_gate(g.gate, g.a);
                if (m.p1 > 0 && u(rng) < m.p1) {
                    apply_random_pauli(t, &g.a, 1, rng);
                }
            }
        }
    }
}

}  // namespace twistlab
