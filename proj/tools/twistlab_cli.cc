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
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "twistlab/compiler.h"
#include "twistlab/errors.h"
#include "twistlab/experiments.h"
#include "twistlab/lattice.h"

using namespace twistlab;

namespace {

Lattice load_lattice(const std::string &name) {
    if (std::filesystem::exists(name)) {
        return Lattice::build(LatticeSpec::load(name));
    }
    return Lattice::build(LatticeSpec::builtin(name));
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Twisted toric-code simulator: lattices, state compilation, braiding and experiments"};
    app.require_subcommand(1);

    auto *list = app.add_subcommand("list", "List built-in experiments");

    auto *run_cmd = app.add_subcommand("run", "Run a built-in experiment");
    std::string id;
    RunOptions opt;
    std::string format = "json";
    std::string mode;
    std::string out_path;
    run_cmd->add_option("id", id, "Experiment id")->required();
    run_cmd->add_option("--shots", opt.shots, "Number of shots; 0 runs the exact simulation");
    run_cmd->add_option("--p1", opt.noise.p1, "Single-qubit depolarizing probability");
    run_cmd->add_option("--p2", opt.noise.p2, "Two-qubit depolarizing probability");
    run_cmd->add_option("--pro", opt.noise.p_ro, "Readout flip probability per qubit");
    run_cmd->add_option("--seed", opt.noise.seed, "Master seed");
    run_cmd->add_flag("--post-select", opt.post_select, "Keep shots with even fermion parity");
    run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    run_cmd->add_option("--mode", mode, "Override logical-gate mode")
        ->check(CLI::IsMember({"frame", "pauli", "deformation"}));
    run_cmd->add_option("--threads", opt.threads, "Worker threads for shots");
    run_cmd->add_option("--out", out_path, "Write the report to a file");

    auto *compile_cmd = app.add_subcommand("compile", "Compile the ground-state circuit of a lattice");
    std::string lattice;
    std::string circuit_out;
    compile_cmd->add_option("lattice", lattice, "Built-in lattice name or JSON file")->required();
    compile_cmd->add_option("--out", circuit_out, "Write the circuit to a file");

    auto *validate_cmd = app.add_subcommand("validate", "Check a lattice and its compiled ground state");
    std::string vlattice;
    validate_cmd->add_option("lattice", vlattice, "Built-in lattice name or JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto &e : list_experiments()) {
                std::cout << e << "\t" << ExperimentProgram::builtin(e).title << "\n";
            }
        } else if (run_cmd->parsed()) {
            if (!mode.empty()) {
                opt.mode_override = parse_gate_mode(mode);
            }
            ExperimentReport r = run(id, opt);
            write_output(out_path, format == "json" ? r.to_json().dump(2) + "\n" : r.to_csv());
        } else if (compile_cmd->parsed()) {
            Lattice lat = load_lattice(lattice);
            CompiledState cs = compile_ground_state(lat);
            write_output(circuit_out, cs.circuit.str());
            std::cerr << lat.name() << ": depth " << cs.circuit.depth() << ", " << cs.circuit.single_qubit_count()
                      << " single-qubit and " << cs.circuit.two_qubit_count() << " two-qubit gates\n";
        } else if (validate_cmd->parsed()) {
            Lattice lat = load_lattice(vlattice);
            CompiledState cs = compile_ground_state(lat);
            StabilizerTableau t(lat.num_qubits());
            cs.circuit.apply(t);
            size_t bad = 0;
            for (size_t k = 0; k < cs.targets.size(); k++) {
                if (t.expectation(cs.targets[k]) != cs.target_signs[k]) {
                    std::cout << "mismatch " << cs.target_labels[k] << "\n";
                    bad++;
                }
            }
            Degeneracy d = lat.degeneracy();
            std::cout << lat.name() << ": " << lat.num_qubits() << " qubits, " << lat.stabilizers().size()
                      << " stabilizers, " << lat.twists().size() << " twist sites, degeneracy 2^" << d.log2 << "\n";
            std::cout << (bad ? "INVALID" : "OK") << ": " << cs.targets.size() - bad << "/" << cs.targets.size()
                      << " targets prepared\n";
            return bad ? 1 : 0;
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
