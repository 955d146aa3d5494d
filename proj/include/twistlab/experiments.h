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
#ifndef TWISTLAB_EXPERIMENTS_H
#define TWISTLAB_EXPERIMENTS_H

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/braiding.h"
#include "twistlab/noise.h"

namespace twistlab {

/// A scripted experiment: a lattice, a prepared ground state, and steps of actions followed by
/// measurements. Read from data/experiments/<id>.json.
struct ExperimentProgram {
    std::string id;
    std::string title;
    nlohmann::json definition;

    static ExperimentProgram from_json(const nlohmann::json &j);
    static ExperimentProgram load(const std::string &path);
    static ExperimentProgram builtin(const std::string &id);
};

std::vector<std::string> list_experiments();

struct RunOptions {
    /// 0 selects exact mode.
    size_t shots = 0;
    NoiseModel noise;
    bool post_select = false;
    /// Replaces the mode of every gate or braid action that the mode supports.
    std::optional<GateMode> mode_override;
    /// 0 uses the hardware concurrency.
    unsigned threads = 0;
};

struct ReportEntry {
    std::string observable;
    std::string op;
    size_t weight = 0;
    double estimate = 0;
    double stderr_ = 0;
    int ideal = 0;
};

/// Per-shot outcomes of one measurement step; shots[s][k] is the outcome of labels[k].
struct ShotRecords {
    std::vector<std::string> labels;
    std::vector<std::vector<int8_t>> shots;
};

struct ReportStep {
    std::string label;
    std::vector<ReportEntry> entries;
    /// Set when the step was post-selected.
    std::optional<double> retained_fraction;
    ShotRecords records;

    const ReportEntry &entry(const std::string &observable) const;
    const ReportEntry *find(const std::string &observable) const;
};

struct DerivedValue {
    std::string name;
    std::string step;
    double estimate = 0;
    double stderr_ = 0;
    double ideal = 0;
};

struct ExperimentReport {
    std::string experiment;
    std::string title;
    std::string lattice;
    size_t shots = 0;
    NoiseModel noise;
    bool post_selected = false;
    nlohmann::json annotations = nlohmann::json::object();
    std::vector<ReportStep> steps;
    std::vector<DerivedValue> derived;

    bool exact() const {
        return shots == 0;
    }
    const ReportStep &step(const std::string &label) const;
    const DerivedValue *find_derived(const std::string &name) const;

    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
};

ExperimentReport run(const ExperimentProgram &program, const RunOptions &options = {});
/// Throws LookupError for an unknown id.
ExperimentReport run(const std::string &id, const RunOptions &options = {});

/// (1 + <XX> - <YY> + <ZZ>) / 4 from the last step holding entries XX, YY and ZZ.
double bell_fidelity(const ExperimentReport &report);

struct Tomography {
    /// Row-major 2^n x 2^n density matrix; qubit 1 is the most significant bit.
    std::vector<std::complex<double>> rho;
    size_t num_qubits = 0;
    double fidelity = 0;
    std::complex<double> trace;
    double hermiticity_error = 0;
};

/// Linear inversion from the entries labelled by every non-identity n-letter logical Pauli string.
Tomography linear_inversion(const ReportStep &step, size_t num_qubits);
/// Three-qubit reconstruction and fidelity against (|000> + |111>)/sqrt(2).
Tomography ghz_tomography(const ExperimentReport &report);

/// Keeps the shots with an even number of -1 outcomes among the three labelled correlators.
ShotRecords post_select_fermion_parity(const ShotRecords &records,
                                       const std::array<std::string, 3> &labels = {"F1", "F2", "F3"});

}  // namespace twistlab

#endif
