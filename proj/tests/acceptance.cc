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
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "test_util.h"
#include "twistlab/braiding.h"
#include "twistlab/compiler.h"
#include "twistlab/experiments.h"
#include "twistlab/lattice.h"
#include "twistlab/oracle.h"
#include "twistlab/strings.h"

using namespace twistlab;
using twistlab_test::matmul;
using twistlab_test::random_pauli;
using twistlab_test::random_program;
using twistlab_test::raw_matrix;
using twistlab_test::run_program;

namespace {

constexpr double kLinearInversionTol = 1e-9;
constexpr double kDenseTol = 1e-9;
constexpr double kSigmas = 3.0;
constexpr double kDepthR2 = 0.95;
constexpr size_t kNoiseShots = 10000;
constexpr uint64_t kNoiseSeed = 1;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Collects failures of one criterion; the first few are kept for the report line.
struct Check {
    std::vector<std::string> failures;
    std::ostringstream info;

    void expect(bool ok, const std::string &what) {
        if (!ok) {
            failures.push_back(what);
        }
    }
};

std::string fmt(const std::vector<int> &v) {
    std::string out = "(";
    for (size_t k = 0; k < v.size(); k++) {
        out += (k ? "," : "") + std::string(v[k] > 0 ? "+1" : v[k] < 0 ? "-1" : "0");
    }
    return out + ")";
}

std::vector<int> ideals(const ReportStep &s, const std::vector<std::string> &labels) {
    std::vector<int> out;
    for (const auto &l : labels) {
        out.push_back(s.entry(l).ideal);
    }
    return out;
}

std::set<std::string> negatives(const ReportStep &s) {
    std::set<std::string> out;
    for (const auto &e : s.entries) {
        if (e.ideal < 0) {
            out.insert(e.observable);
        }
    }
    return out;
}

const Lattice &lattice(const std::string &name) {
    static std::map<std::string, Lattice> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        it = cache.emplace(name, Lattice::build(LatticeSpec::builtin(name))).first;
    }
    return it->second;
}

std::vector<std::string> builtin_lattices() {
    std::vector<std::string> out;
    for (const auto &e : std::filesystem::directory_iterator(data_directory() + "/lattices")) {
        if (e.path().extension() == ".json") {
            out.push_back(e.path().stem().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

void ground_states(Check &c) {
    for (auto [id, lat] : {std::pair{"ground_state_68", "processor-I-68"}, {"ground_state_30", "processor-II-30"}}) {
        auto t0 = Clock::now();
        ExperimentReport r = run(id);
        double dt = seconds_since(t0);
        c.info << id << " " << dt << "s ";
        c.expect(dt < 1.0, std::string(id) + " took " + std::to_string(dt) + "s");
        const ReportStep &s = r.steps.at(0);
        c.expect(s.entries.size() == lattice(lat).stabilizers().size(), std::string(id) + " misses stabilizers");
        for (const auto &e : s.entries) {
            c.expect(e.ideal == 1 && e.estimate == 1.0, std::string(id) + " " + e.observable);
        }
    }
}

void transmutation(Check &c) {
    ExperimentReport r = run("transmutation_68");
    std::vector<std::vector<int>> want = {
        {+1, +1, +1, +1}, {-1, +1, +1, +1}, {+1, -1, +1, +1}, {+1, +1, -1, +1}, {+1, +1, +1, -1}};
    c.expect(r.steps.size() == want.size(), "transmutation_68 step count");
    for (size_t k = 0; k < want.size() && k < r.steps.size(); k++) {
        auto got = ideals(r.steps[k], {"A_P1", "A_P2", "A_P3", "A_P4"});
        c.expect(got == want[k], "transmutation_68 step " + std::to_string(k) + " " + fmt(got));
    }
    const Lattice &l68 = lattice("processor-I-68");
    Color expected_color[] = {Color::Dark, Color::Light, Color::Dark, Color::Light};
    const char *probes[] = {"A(10,6)", "A(10,7)", "A(10,8)", "A(10,9)"};
    for (size_t k = 0; k < 4; k++) {
        c.expect(l68.stabilizer(probes[k]).color == expected_color[k], std::string("charge type at ") + probes[k]);
    }

    ExperimentReport p = run("transmutation_30");
    const Lattice &l30 = lattice("processor-II-30");
    auto kinds = [&](const std::string &step) {
        std::multiset<Color> out;
        for (const auto &id : negatives(p.step(step))) {
            out.insert(l30.stabilizer(id).color);
        }
        return out;
    };
    std::multiset<Color> ee = {Color::Dark, Color::Dark}, em = {Color::Dark, Color::Light};
    c.expect(kinds("A_pair") == ee, "panel A charge types");
    c.expect(kinds("B_one_twist") == em, "panel B odd winding keeps e");
    c.expect(kinds("C_two_twists_distinct") == ee, "panel C even winding");
    c.expect(kinds("D_two_twists_same") == ee, "panel D even winding");
    c.expect(negatives(p.step("A_pair")) == std::set<std::string>{"A(2,2)", "A(4,4)"}, "panel A sites");
    c.expect(negatives(p.step("B_one_twist")) == std::set<std::string>{"A(1,2)", "A(4,4)"}, "panel B sites");
    c.expect(negatives(p.step("C_two_twists_distinct")) == std::set<std::string>{"A(4,2)", "A(4,4)"}, "panel C sites");
    c.expect(negatives(p.step("D_two_twists_same")) == std::set<std::string>{"A(4,2)", "A(4,4)"}, "panel D sites");
}

void fusion(Check &c) {
    ExperimentReport r = run("fusion_68");
    std::vector<std::string> d = {"D1", "D3", "D4"};
    c.expect(ideals(r.step("ground"), d) == std::vector<int>{+1, +1, +1}, "fusion_68 ground");
    auto first = ideals(r.step("first_round"), d), second = ideals(r.step("second_round"), d);
    c.expect(first == std::vector<int>{-1, -1, -1}, "fusion_68 first round " + fmt(first));
    c.expect(second == std::vector<int>{-1, -1, +1}, "fusion_68 second round " + fmt(second));
    c.info << "D1,D3,D4 " << fmt(first) << " then " << fmt(second) << " ";

    ExperimentReport f = run("fusion_30");
    const Lattice &lat = lattice("processor-II-30");
    struct Panel {
        const char *step;
        int twist_charge;
        std::multiset<Color> extra;
    };
    // sigma(+/-) x e = sigma(-/+), sigma x m = sigma(-/+), sigma x fermion = sigma(+/-).
    const Panel panels[] = {
        {"sigma_plus", +1, {}},
        {"plus_e", -1, {Color::Dark}},
        {"plus_m", -1, {Color::Light}},
        {"plus_fermion", +1, {Color::Dark, Color::Light}},
        {"minus_e", +1, {Color::Light, Color::Dark}},
        {"minus_m", +1, {Color::Light, Color::Light}},
        {"minus_fermion", -1, {Color::Light, Color::Light, Color::Dark}},
    };
    for (const auto &p : panels) {
        const ReportStep &s = f.step(p.step);
        c.expect(s.entry("D1").ideal == p.twist_charge, std::string("fusion_30 ") + p.step + " twist charge");
        std::multiset<Color> got;
        for (const auto &id : negatives(s)) {
            if (id != "D1") {
                got.insert(lat.stabilizer(id).color);
            }
        }
        c.expect(got == p.extra, std::string("fusion_30 ") + p.step + " free charges");
    }
}

void logic_gates(Check &c) {
    ExperimentReport r = run("logic_gates_68");
    std::vector<int> got;
    for (const auto &s : r.steps) {
        got.push_back(s.entry("Z1").ideal);
    }
    std::vector<int> want = {+1, 0, 0, 0, +1};
    c.info << "Z1 readouts " << fmt(got) << " expected " << fmt(want) << "; ";
    c.expect(got == want, "Z1 readouts " + fmt(got) + " != " + fmt(want));

    ExperimentReport x = run("cx_truthtable_68");
    struct Row {
        const char *step;
        std::vector<int> z, f;
    };
    const Row rows[] = {
        {"00", {+1, +1}, {+1, +1, +1}},        {"00_cx", {+1, +1}, {+1, +1, +1}},
        {"00_cx_cx", {+1, +1}, {+1, +1, +1}},  {"10", {-1, +1}, {-1, -1, +1}},
        {"10_cx", {-1, -1}, {-1, +1, -1}},     {"10_cx_cx", {-1, +1}, {-1, -1, +1}},
    };
    bool cx_ok = true;
    for (const auto &row : rows) {
        auto z = ideals(x.step(row.step), {"Z1", "Z2"});
        auto f = ideals(x.step(row.step), {"F1", "F2", "F3"});
        bool ok = z == row.z && f == row.f;
        cx_ok = cx_ok && ok;
        c.expect(ok, std::string("cx ") + row.step + " Z " + fmt(z) + " F " + fmt(f));
    }
    c.info << "CX truth table " << (cx_ok ? "matches" : "differs");
}

void entangled_states(Check &c) {
    ExperimentReport b = run("bell_68");
    double f = bell_fidelity(b);
    c.expect(std::abs(f - 1.0) <= kLinearInversionTol, "Bell fidelity " + std::to_string(f));
    ExperimentReport g = run("ghz_30");
    Tomography t = ghz_tomography(g);
    c.expect(std::abs(t.fidelity - 1.0) <= kLinearInversionTol, "GHZ fidelity " + std::to_string(t.fidelity));
    c.expect(std::abs(t.trace - std::complex<double>(1.0, 0.0)) <= kLinearInversionTol, "GHZ trace");
    c.expect(t.hermiticity_error <= kLinearInversionTol, "GHZ hermiticity");
    c.expect(g.step("tomography").entries.size() == 63, "GHZ tomography needs 63 Paulis");
    c.info << "Bell F=" << f << " GHZ F=" << t.fidelity;
}

void oracle_equivalence(Check &c) {
    auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    size_t compared = 0;
    for (int prog_index = 0; prog_index < 1000; prog_index++) {
        size_t n = 2 + prog_index % 9;
        auto prog = random_program(n, 60, rng);
        DenseState psi(n);
        StabilizerTableau t(n);
        run_program(psi, prog);
        run_program(t, prog);
        for (int k = 0; k < 50; k++) {
            PauliOperator p = random_pauli(n, rng);
            double want = psi.expectation(p);
            int got = t.expectation(p);
            if (std::abs(want - got) > kDenseTol) {
                c.expect(false, "program " + std::to_string(prog_index) + " observable " + p.str());
            }
            compared++;
        }
    }
    double dt = seconds_since(t0);
    c.expect(dt < 60.0, "took " + std::to_string(dt) + "s");
    c.info << compared << " expectations in " << dt << "s";
}

MajoranaEncoding jordan_wigner(size_t n) {
    std::vector<MajoranaOperator> ops;
    for (size_t k = 0; k < n; k++) {
        for (char l : {'X', 'Y'}) {
            PauliOperator p(n);
            for (size_t j = 0; j < k; j++) {
                p.set_letter(j, 'Z');
            }
            p.set_letter(k, l);
            ops.push_back({"c" + std::to_string(ops.size() + 1), p, {}, {}});
        }
    }
    return MajoranaEncoding(ops);
}

void algebra(Check &c) {
    const Lattice &lat = lattice("processor-I-68");
    MajoranaEncoding enc = MajoranaEncoding::from_lattice(lat);
    c.expect(enc.size() == 6, "processor-I has six Majoranas");
    size_t pairs = 0;
    for (size_t a = 1; a <= enc.size(); a++) {
        for (size_t b = a + 1; b <= enc.size(); b++) {
            c.expect(!enc.c(a).op.commutes(enc.c(b).op), "c" + std::to_string(a) + " c" + std::to_string(b) + " commute");
            pairs++;
        }
    }
    c.expect(pairs == 15, "pair count");
    auto stabs = lat.stabilizer_operators();
    const std::pair<size_t, size_t> corr[] = {{1, 2}, {3, 4}, {5, 6}, {2, 3}, {1, 4}, {4, 5}, {3, 6}};
    for (auto [i, j] : corr) {
        PauliOperator op = enc.correlator(i, j);
        for (const auto &s : stabs) {
            c.expect(op.commutes(s), "correlator " + std::to_string(i) + std::to_string(j));
        }
    }

    for (const MajoranaEncoding &e : {enc, jordan_wigner(4)}) {
        size_t m = e.size();
        for (size_t i = 1; i < m; i++) {
            for (size_t j = 1; j < m; j++) {
                for (bool inv : {false, true}) {
                    BraidGenerator a{i, i + 1, inv}, b{j, j + 1, inv};
                    MajoranaFrame x(e), y(e);
                    if (j == i + 1) {
                        for (auto g : {a, b, a}) {
                            x.braid(g);
                        }
                        for (auto g : {b, a, b}) {
                            y.braid(g);
                        }
                        c.expect(x.same_action(y), "Yang-Baxter " + a.str() + " " + b.str());
                    } else if (j >= i + 2) {
                        x.braid(a);
                        x.braid(b);
                        y.braid(b);
                        y.braid(a);
                        c.expect(x.same_action(y), "far commutation " + a.str() + " " + b.str());
                    }
                }
            }
        }
    }

    MajoranaFrame frame(enc);
    StabilizerTableau base(lat.num_qubits(), 7);
    compile_ground_state(lat).circuit.apply(base);
    frame.braid(logical_gate_word(LogicalGate::H, 1, 2));
    std::vector<PauliOperator> probes = stabs;
    for (size_t a = 1; a <= 6; a++) {
        for (size_t b = a + 1; b <= 6; b++) {
            probes.push_back(frame.correlator(a, b));
        }
    }
    for (size_t i = 1; i <= 6; i++) {
        for (size_t j = i + 1; j <= 6; j++) {
            StabilizerTableau twice = base, direct = base;
            single_braid_unitary(frame, twice, i, j);
            single_braid_unitary(frame, twice, i, j);
            direct.apply_pauli_unitary(frame.correlator(i, j));
            for (const auto &p : probes) {
                c.expect(twice.expectation(p) == direct.expectation(p), "single braid squared " + std::to_string(i) + std::to_string(j));
            }
        }
    }

    std::mt19937_64 rng(9);
    size_t steps = 0;
    while (steps < 100) {
        size_t n = 2 + rng() % 7;
        PauliOperator s_old = random_pauli(n, rng), s_new = random_pauli(n, rng);
        if (s_old.commutes(s_new)) {
            continue;
        }
        size_t d = size_t{1} << n;
        DenseState psi(n);
        run_program(psi, random_program(n, 15, rng));
        DenseState via = psi;
        compile_deformation_step(s_old, s_new).apply(via);
        // exp(pi/4 S_new S_old) = (1 + S_new S_old) / sqrt 2.
        auto m = matmul(raw_matrix(s_new), raw_matrix(s_old), d);
        std::vector<std::complex<double>> out(d, 0);
        for (size_t r = 0; r < d; r++) {
            std::complex<double> acc = psi.amplitudes()[r];
            for (size_t col = 0; col < d; col++) {
                acc += m[r * d + col] * psi.amplitudes()[col];
            }
            out[r] = acc / std::sqrt(2.0);
        }
        c.expect(std::abs(overlap_magnitude(out, via.amplitudes()) - 1.0) <= kDenseTol,
                 "deformation step on " + std::to_string(n) + " qubits");
        steps++;
    }
    c.info << pairs << " anticommuting pairs, 7 correlators, " << steps << " deformation steps";
}

void compiler_contract(Check &c) {
    for (const auto &name : builtin_lattices()) {
        const Lattice &lat = lattice(name);
        CompiledState cs = compile_ground_state(lat);
        StabilizerTableau t(lat.num_qubits());
        cs.circuit.apply(t);
        for (size_t k = 0; k < cs.targets.size(); k++) {
            c.expect(t.expectation(cs.targets[k]) == cs.target_signs[k], name + " " + cs.target_labels[k]);
        }
        for (const auto &p : lat.stabilizers()) {
            c.expect(t.expectation(p.op) == 1, name + " " + p.id);
        }
        std::vector<bool> reached(cs.targets.size(), false);
        for (const auto &cp : cs.checkpoints) {
            for (size_t k = 0; k < cs.targets.size(); k++) {
                if (reached[k]) {
                    c.expect(cp.expectations[k] == 1, name + " regression of " + cs.target_labels[k] + " at " + cp.stage);
                }
                reached[k] = reached[k] || cp.expectations[k] == 1;
            }
        }
    }

    std::vector<double> rs, depths;
    for (int r = 2; r <= 8; r++) {
        Lattice lat = Lattice::build(LatticeSpec::full(r, r));
        CompiledState cs = compile_ground_state(lat);
        StabilizerTableau t(lat.num_qubits());
        cs.circuit.apply(t);
        for (const auto &p : lat.stabilizers()) {
            c.expect(t.expectation(p.op) == 1, "patch " + std::to_string(r) + " " + p.id);
        }
        rs.push_back(r);
        depths.push_back((double)cs.circuit.depth());
    }
    double n = (double)rs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < rs.size(); i++) {
        sx += rs[i];
        sy += depths[i];
        sxx += rs[i] * rs[i];
        sxy += rs[i] * depths[i];
    }
    double alpha = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double beta = (sy - alpha * sx) / n;
    double ss_res = 0, ss_tot = 0;
    for (size_t i = 0; i < rs.size(); i++) {
        double fit = alpha * rs[i] + beta;
        ss_res += (depths[i] - fit) * (depths[i] - fit);
        ss_tot += (depths[i] - sy / n) * (depths[i] - sy / n);
    }
    double r2 = 1 - ss_res / ss_tot;
    c.expect(alpha > 0 && r2 > kDepthR2, "depth fit R^2 " + std::to_string(r2));
    c.info << builtin_lattices().size() << " lattices; depth ~ " << alpha << " r + " << beta << " (R^2 " << r2 << ")";
}

void noise(Check &c) {
    auto t0 = Clock::now();
    for (const auto &id : list_experiments()) {
        RunOptions o;
        o.shots = kNoiseShots;
        o.noise.seed = kNoiseSeed;
        ExperimentReport r = run(id, o);
        for (const auto &s : r.steps) {
            for (const auto &e : s.entries) {
                c.expect(std::abs(e.estimate - e.ideal) <= kSigmas * e.stderr_ + 1e-12,
                         "zero noise " + id + " " + s.label + " " + e.observable);
            }
            if (s.retained_fraction) {
                c.expect(*s.retained_fraction == 1.0, "noiseless retention " + id);
            }
        }
    }
    RunOptions quiet;
    quiet.shots = kNoiseShots;
    quiet.noise.seed = kNoiseSeed;
    quiet.post_select = true;
    ExperimentReport q = run("bell_68", quiet);
    const ReportStep &bell = q.step("bell");
    c.expect(bell.retained_fraction && *bell.retained_fraction == 1.0, "noiseless Bell retention");

    std::vector<double> raw_f;
    for (double p2 : {0.0, 0.002, 0.005, 0.01, 0.02}) {
        RunOptions o;
        o.shots = kNoiseShots;
        o.noise = {0.005, p2, 0.0, kNoiseSeed};
        const DerivedValue *raw = nullptr;
        ExperimentReport a = run("bell_68", o);
        raw = a.find_derived("bell_fidelity");
        o.post_select = true;
        ExperimentReport b = run("bell_68", o);
        const DerivedValue *ps = b.find_derived("bell_fidelity");
        if (!raw || !ps) {
            c.expect(false, "missing bell_fidelity");
            return;
        }
        raw_f.push_back(raw->estimate);
        double sigma = std::sqrt(raw->stderr_ * raw->stderr_ + ps->stderr_ * ps->stderr_);
        c.expect(ps->estimate >= raw->estimate - kSigmas * sigma,
                 "post-selection loses at p2=" + std::to_string(p2));
        c.info << "p2=" << p2 << " F=" << raw->estimate << " F_ps=" << ps->estimate << "; ";
    }
    for (size_t k = 1; k < raw_f.size(); k++) {
        c.expect(raw_f[k] <= raw_f[k - 1], "Bell fidelity increases at sweep point " + std::to_string(k));
    }
    double dt = seconds_since(t0);
    c.expect(dt < 300.0, "took " + std::to_string(dt) + "s");
    c.info << dt << "s";
}

}  // namespace

int main() {
    const std::pair<const char *, std::function<void(Check &)>> criteria[] = {
        {"1 ground states", ground_states},
        {"2 charge transmutation", transmutation},
        {"3 fusion rules", fusion},
        {"4 logic gates", logic_gates},
        {"5 entangled logical states", entangled_states},
        {"6 oracle equivalence", oracle_equivalence},
        {"7 algebraic suites", algebra},
        {"8 compiler contract", compiler_contract},
        {"9 noise and post-selection", noise},
    };
    int failed = 0;
    for (const auto &[name, fn] : criteria) {
        Check c;
        try {
            fn(c);
        } catch (const std::exception &e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        bool ok = c.failures.empty();
        failed += !ok;
        std::cout << (ok ? "PASS " : "FAIL ") << name << " | " << c.info.str();
        for (size_t k = 0; k < c.failures.size() && k < 5; k++) {
            std::cout << (k ? "; " : " | failures: ") << c.failures[k];
        }
        if (c.failures.size() > 5) {
            std::cout << "; ... " << c.failures.size() - 5 << " more";
        }
        std::cout << std::endl;
    }
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << (9 - failed) << "/9" << std::endl;
    return failed ? 1 : 0;
}
