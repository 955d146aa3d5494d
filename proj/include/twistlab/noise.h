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
#ifndef TWISTLAB_NOISE_H
#define TWISTLAB_NOISE_H

#include <cstdint>
#include <random>

#include "twistlab/compiler.h"
#include "twistlab/tableau.h"

namespace twistlab {

/// Depolarizing noise after every gate on its support, plus readout flips.
struct NoiseModel {
    double p1 = 0;
    double p2 = 0;
    double p_ro = 0;
    uint64_t seed = 0;

    /// Throws DomainError unless every probability lies in [0, 1].
    void validate() const;
    bool noiseless() const {
        return p1 == 0 && p2 == 0 && p_ro == 0;
    }
};

/// Flip probability of a weight-w operator outcome: the parity of w independent flips, (1 - (1 - 2p)^w) / 2.
double effective_readout_flip(double p_ro, size_t weight);

/// Per-shot seed derived from the master seed and the shot index only.
uint64_t shot_seed(uint64_t master, uint64_t shot);

/// Applies a uniformly random non-identity Pauli on the given sites.
void apply_random_pauli(StabilizerTableau &t, const size_t *sites, size_t count, std::mt19937_64 &rng);

/// Runs a circuit gate by gate, injecting depolarizing errors after each gate.
void apply_noisy(const Circuit &c, StabilizerTableau &t, const NoiseModel &m, std::mt19937_64 &rng);

}  // namespace twistlab

#endif
