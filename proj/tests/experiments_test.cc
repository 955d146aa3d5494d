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
#include "twistlab/experiments.h"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "twistlab/errors.h"
#include "twistlab/oracle.h"

using namespace twistlab;

namespace {

std::set<std::string> negatives(const ReportStep &s) {
    std::set<std::string> out;
    for (const auto &e : s.entries) {
        EXPECT_NE(e.ideal, 0) << s.label << " " << e.observable;
        if (e.ideal < 0) {
            out.insert(e.observable);
        }
    }
    return out;
}

std::vector<int> ideals(const ReportStep &s, const std::vector<std::string> &labels) {
    std::vector<int> out;
    for (const auto &l : labels) {
        out.push_back(s.entry(l).ideal);
    }
    return out;
}

Color color_of(const Lattice &lat, const std::string &id) {
    return lat.stabilizer(id).color;
}

ExperimentProgram custom(const nlohmann::json &j) {
    return ExperimentProgram::from_json(j);
}

}  // namespace

TEST(experiments, builtin_list) {
    std::vector<std::string> want = {"bell_68",        "cx_truthtable_68", "deformation_30",  "fusion_30",
                                     "fusion_68",      "ghz_30",           "ground_state_30", "ground_state_68",
                                     "logic_gates_68", "transmutation_30", "transmutation_68"};
    EXPECT_EQ(list_experiments(), want);
    EXPECT_THROW(run("no_such_experiment"), LookupError);
    EXPECT_THROW(ExperimentProgram::from_json(nlohmann::json{{"id", "x"}}), SpecError);
}

TEST(experiments, ground_states) {
    for (auto [id, lattice] : {std::pair{"ground_state_68", "processor-I-68"}, {"ground_state_30", "processor-II-30"}}) {
        ExperimentReport r = run(id);
        const Lattice lat = Lattice::build(LatticeSpec::builtin(lattice));
        ASSERT_EQ(r.steps.size(), 1u);
        ASSERT_EQ(r.steps[0].entries.size(), lat.stabilizers().size());
        for (const auto &e : r.steps[0].entries) {
            EXPECT_EQ(e.ideal, +1) << e.observable;
            EXPECT_EQ(e.estimate, 1.0);
        }
        EXPECT_TRUE(r.annotations.contains("hardware_average_stabilizer"));
    }
}

TEST(experiments, transmutation_68_sign_table) {
    ExperimentReport r = run("transmutation_68");
    std::vector<std::string> p = {"A_P1", "A_P2", "A_P3", "A_P4"};
    std::vector<std::vector<int>> want = {
        {+1, +1, +1, +1}, {-1, +1, +1, +1}, {+1, -1, +1, +1}, {+1, +1, -1, +1}, {+1, +1, +1, -1}};
    ASSERT_EQ(r.steps.size(), want.size());
    for (size_t k = 0; k < want.size(); k++) {
        EXPECT_EQ(ideals(r.steps[k], p), want[k]) << "step " << k;
    }
    // Odd windings alternate the charge type.
    const Lattice lat = Lattice::build(LatticeSpec::builtin("processor-I-68"));
    EXPECT_EQ(color_of(lat, "A(10,6)"), Color::Dark);
    EXPECT_EQ(color_of(lat, "A(10,7)"), Color::Light);
    EXPECT_EQ(color_of(lat, "A(10,8)"), Color::Dark);
    EXPECT_EQ(color_of(lat, "A(10,9)"), Color::Light);
}

TEST(experiments, transmutation_30_panels) {
    ExperimentReport r = run("transmutation_30");
    const Lattice lat = Lattice::build(LatticeSpec::builtin("processor-II-30"));
    auto kinds = [&](const std::string &step) {
        std::multiset<Color> out;
        for (const auto &id : negatives(r.step(step))) {
            out.insert(color_of(lat, id));
        }
        return out;
    };
    EXPECT_EQ(kinds("A_pair"), (std::multiset<Color>{Color::Dark, Color::Dark}));
    EXPECT_EQ(kinds("B_one_twist"), (std::multiset<Color>{Color::Dark, Color::Light}));
    EXPECT_EQ(kinds("C_two_twists_distinct"), (std::multiset<Color>{Color::Dark, Color::Dark}));
    EXPECT_EQ(kinds("D_two_twists_same"), (std::multiset<Color>{Color::Dark, Color::Dark}));
    EXPECT_EQ(negatives(r.step("A_pair")), (std::set<std::string>{"A(2,2)", "A(4,4)"}));
    EXPECT_EQ(negatives(r.step("B_one_twist")), (std::set<std::string>{"A(1,2)", "A(4,4)"}));
    EXPECT_EQ(negatives(r.step("C_two_twists_distinct")), (std::set<std::string>{"A(4,2)", "A(4,4)"}));
}

TEST(experiments, fusion_68_defect_signs) {
    ExperimentReport r = run("fusion_68");
    std::vector<std::string> d = {"D1", "D3", "D4"};
    EXPECT_EQ(ideals(r.step("ground"), d), (std::vector<int>{+1, +1, +1}));
    EXPECT_EQ(ideals(r.step("first_round"), d), (std::vector<int>{-1, -1, -1}));
    EXPECT_EQ(ideals(r.step("second_round"), d), (std::vector<int>{-1, -1, +1}));
    EXPECT_DOUBLE_EQ(r.annotations["hardware_after_second_round"]["D4"].get<double>(), 0.510);
}

TEST(experiments, fusion_30_rules) {
    ExperimentReport r = run("fusion_30");
    const Lattice lat = Lattice::build(LatticeSpec::builtin("processor-II-30"));
    struct Panel {
        const char *step;
        int twist_charge;
        std::multiset<Color> extra;
    };
    // sigma(+/-) x e = sigma(-/+), sigma x m = sigma(-/+), sigma x fermion = sigma.
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
        const ReportStep &s = r.step(p.step);
        EXPECT_EQ(s.entry("D1").ideal, p.twist_charge) << p.step;
        std::multiset<Color> got;
        for (const auto &id : negatives(s)) {
            if (id != "D1") {
                got.insert(color_of(lat, id));
            }
        }
        EXPECT_EQ(got, p.extra) << p.step;
    }
}

TEST(experiments, logic_gates_readout_matches_single_qubit_oracle) {
    // H, Z, H, X on one physical qubit, read out in Z after each stage.
    DenseState psi(1);
    PauliOperator z = PauliOperator::parse("Z", 1);
    std::vector<int> want = {(int)std::lround(psi.expectation(z))};
    for (Gate g : {Gate::H, Gate::Z, Gate::H, Gate::X}) {
        psi.apply_gate(g, 0);
        want.push_back((int)std::lround(psi.expectation(z)));
    }
    EXPECT_EQ(want, (std::vector<int>{+1, 0, 0, -1, +1}));
    for (auto mode : {std::optional<GateMode>{}, std::optional<GateMode>{GateMode::CodeDeformation},
                      std::optional<GateMode>{GateMode::PauliApplication}}) {
        RunOptions o;
        o.mode_override = mode;
        ExperimentReport r = run("logic_gates_68", o);
        std::vector<int> got;
        for (const auto &s : r.steps) {
            got.push_back(s.entry("Z1").ideal);
        }
        EXPECT_EQ(got, want);
    }
}

TEST(experiments, cx_truth_table) {
    ExperimentReport r = run("cx_truthtable_68");
    auto z = [&](const char *step) { return ideals(r.step(step), {"Z1", "Z2"}); };
    EXPECT_EQ(z("00"), (std::vector<int>{+1, +1}));
    EXPECT_EQ(z("00_cx"), (std::vector<int>{+1, +1}));
    EXPECT_EQ(z("00_cx_cx"), (std::vector<int>{+1, +1}));
    EXPECT_EQ(z("10"), (std::vector<int>{-1, +1}));
    EXPECT_EQ(z("10_cx"), (std::vector<int>{-1, -1}));
    EXPECT_EQ(z("10_cx_cx"), (std::vector<int>{-1, +1}));
    for (const char *s : {"00", "00_cx", "00_cx_cx"}) {
        EXPECT_EQ(ideals(r.step(s), {"F1", "F2", "F3"}), (std::vector<int>{+1, +1, +1})) << s;
    }
    // The fused pairs carry Z1 = F1 and Z2 = F1 F2 under the evolving frame.
    for (const char *s : {"10", "10_cx", "10_cx_cx"}) {
        auto f = ideals(r.step(s), {"F1", "F2", "F3", "Z1", "Z2"});
        EXPECT_EQ(f[3], f[0]) << s;
        EXPECT_EQ(f[4], f[0] * f[1]) << s;
        EXPECT_EQ(f[0] * f[1] * f[2], +1) << s;
    }
    EXPECT_EQ(ideals(r.step("10_cx"), {"F1", "F2", "F3"}), (std::vector<int>{-1, +1, -1}));
}

TEST(experiments, bell_state) {
    ExperimentReport r = run("bell_68");
    EXPECT_EQ(ideals(r.step("bell"), {"XX", "YY", "ZZ"}), (std::vector<int>{+1, -1, +1}));
    EXPECT_EQ(bell_fidelity(r), 1.0);
    ASSERT_NE(r.find_derived("bell_fidelity"), nullptr);
    EXPECT_EQ(r.find_derived("bell_fidelity")->estimate, 1.0);
    ExperimentReport g = run("ground_state_30");
    EXPECT_THROW(bell_fidelity(g), ContractViolation);
}

TEST(experiments, ghz_tomography_exact) {
    ExperimentReport r = run("ghz_30");
    Tomography t = ghz_tomography(r);
    EXPECT_NEAR(t.fidelity, 1.0, 1e-9);
    EXPECT_NEAR(t.trace.real(), 1.0, 1e-9);
    EXPECT_NEAR(t.trace.imag(), 0.0, 1e-9);
    EXPECT_LT(t.hermiticity_error, 1e-9);
    EXPECT_NEAR(r.find_derived("ghz_fidelity")->estimate, 1.0, 1e-9);

    // Independent GHZ expectations from a dense three-qubit state.
    DenseState ghz(3);
    ghz.apply_gate(Gate::H, 0);
    ghz.apply_gate(Gate::CX, 0, 1);
    ghz.apply_gate(Gate::CX, 1, 2);
    const ReportStep &s = r.step("tomography");
    ASSERT_EQ(s.entries.size(), 63u);
    for (const auto &e : s.entries) {
        double want = ghz.expectation(PauliOperator::parse(e.observable, 3));
        EXPECT_EQ(e.ideal, (int)std::lround(want)) << e.observable;
    }
    EXPECT_THROW(ghz_tomography(run("bell_68")), ContractViolation);
}

TEST(experiments, maximally_mixed_tomography) {
    ReportStep s;
    for (const char *a : {"I", "X", "Y", "Z"}) {
        for (const char *b : {"I", "X", "Y", "Z"}) {
            for (const char *c : {"I", "X", "Y", "Z"}) {
                std::string l = std::string(a) + b + c;
                if (l != "III") {
                    s.entries.push_back({l, "", 0, 0.0, 0.0, 0});
                }
            }
        }
    }
    Tomography t = linear_inversion(s, 3);
    EXPECT_NEAR(t.fidelity, 1.0 / 8, 1e-12);
    EXPECT_NEAR(t.trace.real(), 1.0, 1e-12);
}

TEST(experiments, deformation_braid_leaves_two_fermions) {
    ExperimentReport r = run("deformation_30");
    for (const auto &e : r.step("A_vacuum").entries) {
        EXPECT_EQ(e.ideal, +1);
    }
    for (const auto &e : r.step("B_create").entries) {
        EXPECT_EQ(e.ideal, +1) << e.observable;
    }
    EXPECT_EQ(r.step("D_exchange").entry("F24").ideal, +1);
    EXPECT_EQ(r.step("D_exchange").entry("F12").ideal, 0);
    EXPECT_EQ(ideals(r.step("E_exchange"), {"F12", "F34"}), (std::vector<int>{-1, -1}));
    EXPECT_EQ(ideals(r.step("F_annihilate"), {"F12", "F34"}), (std::vector<int>{-1, -1}));
}

TEST(experiments, create_then_annihilate_is_vacuum) {
    nlohmann::json j = nlohmann::json::parse(R"({
        "id": "roundtrip", "lattice": "processor-II-30-vacuum", "encoding": "processor-II-30",
        "steps": [
            {"label": "create", "actions": [{"switch_lattice": "processor-II-30"}], "measure": ["stabilizers"]},
            {"label": "annihilate", "actions": [{"switch_lattice": "processor-II-30-vacuum"}], "measure": ["stabilizers"]}
        ]})");
    ExperimentReport r = run(custom(j));
    for (const auto &s : r.steps) {
        for (const auto &e : s.entries) {
            EXPECT_EQ(e.ideal, +1) << s.label << " " << e.observable;
        }
    }
}

TEST(experiments, plan_errors) {
    nlohmann::json j = nlohmann::json::parse(R"({
        "id": "bad", "lattice": "processor-II-30",
        "observables": {"F12": {"encoding_correlator": [1, 2]}, "F23": {"encoding_correlator": [2, 3]}},
        "steps": [{"label": "x", "actions": [{"track": {"F12": "F12"}},
            {"deform": [{"old": "F12", "new": "bad", "operator": "Z14"}]}], "measure": []}]})");
    EXPECT_THROW(run(custom(j)), PlanError);
    j["steps"][0]["actions"][1]["deform"][0]["old"] = "missing";
    EXPECT_THROW(run(custom(j)), PlanError);
    j["steps"][0]["actions"][1] = {{"frobnicate", 1}};
    EXPECT_THROW(run(custom(j)), SpecError);
}

TEST(experiments, modes_agree_on_every_program) {
    for (const auto &id : list_experiments()) {
        ExperimentReport base = run(id);
        // Fixed encoding correlators are physical observables and legitimately differ between modes.
        std::set<std::string> physical;
        nlohmann::json obs = ExperimentProgram::builtin(id).definition.value("observables", nlohmann::json::object());
        for (const auto &[label, spec] : obs.items()) {
            if (spec.is_object() && spec.contains("encoding_correlator")) {
                physical.insert(label);
            }
        }
        for (auto m : {GateMode::FrameTracking, GateMode::PauliApplication, GateMode::CodeDeformation}) {
            RunOptions o;
            o.mode_override = m;
            ExperimentReport r = run(id, o);
            ASSERT_EQ(r.steps.size(), base.steps.size());
            for (size_t k = 0; k < r.steps.size(); k++) {
                for (size_t e = 0; e < r.steps[k].entries.size(); e++) {
                    if (physical.count(r.steps[k].entries[e].observable) && id != "deformation_30") {
                        continue;
                    }
                    EXPECT_EQ(r.steps[k].entries[e].ideal, base.steps[k].entries[e].ideal)
                        << id << " " << gate_mode_name(m) << " " << r.steps[k].label << " "
                        << r.steps[k].entries[e].observable;
                }
            }
        }
    }
}

TEST(experiments, noiseless_shots_match_exact) {
    for (const auto &id : list_experiments()) {
        RunOptions o;
        o.shots = 1000;
        o.noise.seed = 17;
        ExperimentReport r = run(id, o);
        for (const auto &s : r.steps) {
            for (const auto &e : s.entries) {
                EXPECT_LE(std::abs(e.estimate - e.ideal), 3 * e.stderr_ + 1e-12)
                    << id << " " << s.label << " " << e.observable;
                if (e.ideal != 0) {
                    EXPECT_EQ(e.estimate, e.ideal);
                }
            }
        }
    }
}

TEST(experiments, reports_are_deterministic) {
    RunOptions o;
    o.shots = 300;
    o.noise = {0.01, 0.02, 0.01, 99};
    o.post_select = true;
    ExperimentReport a = run("bell_68", o);
    o.threads = 3;
    ExperimentReport b = run("bell_68", o);
    EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
    EXPECT_EQ(a.to_csv(), b.to_csv());
    o.noise.seed = 100;
    EXPECT_NE(run("bell_68", o).to_json().dump(), a.to_json().dump());
    auto j = a.to_json();
    EXPECT_EQ(j["mode"], "shots");
    EXPECT_EQ(j["shots"], 300);
    EXPECT_TRUE(j["steps"][1].contains("retained_fraction"));
    EXPECT_TRUE(j["derived"].contains("bell_fidelity"));
    EXPECT_EQ(a.to_csv().substr(0, a.to_csv().find('\n')), "experiment,step,observable,operator,weight,estimate,stderr,ideal");
}

TEST(experiments, noise_model_validation) {
    NoiseModel m;
    m.p1 = 1.5;
    EXPECT_THROW(m.validate(), DomainError);
    RunOptions o;
    o.shots = 10;
    o.noise.p2 = -0.1;
    EXPECT_THROW(run("bell_68", o), DomainError);
    EXPECT_DOUBLE_EQ(effective_readout_flip(0.1, 1), 0.1);
    EXPECT_NEAR(effective_readout_flip(0.1, 2), 0.18, 1e-12);
    EXPECT_DOUBLE_EQ(effective_readout_flip(0.0, 7), 0.0);
    EXPECT_NE(shot_seed(1, 0), shot_seed(1, 1));
    EXPECT_NE(shot_seed(1, 0), shot_seed(2, 0));
}

TEST(experiments, readout_noise_shrinks_estimates) {
    RunOptions o;
    o.shots = 4000;
    o.noise.p_ro = 0.01;
    o.noise.seed = 4;
    ExperimentReport r = run("ground_state_30", o);
    for (const auto &e : r.step("ground").entries) {
        double want = 1 - 2 * effective_readout_flip(0.01, e.weight);
        EXPECT_NEAR(e.estimate, want, 4 * std::max(e.stderr_, 1e-3)) << e.observable;
    }
}

TEST(experiments, depolarized_ghz_approaches_maximally_mixed) {
    RunOptions o;
    o.shots = 2000;
    o.noise = {0.75, 15.0 / 16, 0.0, 8};
    ExperimentReport r = run("ghz_30", o);
    const DerivedValue *f = r.find_derived("ghz_fidelity");
    ASSERT_NE(f, nullptr);
    EXPECT_NEAR(f->estimate, 1.0 / 8, 4 * f->stderr_);
    EXPECT_NEAR(ghz_tomography(r).fidelity, f->estimate, 1e-9);
}

TEST(experiments, parity_post_selection) {
    ShotRecords rec;
    rec.labels = {"F1", "F2", "F3", "XX"};
    rec.shots = {{-1, 1, 1, 1}, {1, 1, 1, 1}, {-1, -1, 1, -1}, {-1, -1, -1, 1}};
    ShotRecords kept = post_select_fermion_parity(rec);
    ASSERT_EQ(kept.shots.size(), 2u);
    EXPECT_EQ(kept.shots[0], (std::vector<int8_t>{1, 1, 1, 1}));
    EXPECT_EQ(kept.shots[1], (std::vector<int8_t>{-1, -1, 1, -1}));
    rec.labels[2] = "G3";
    EXPECT_THROW(post_select_fermion_parity(rec), ContractViolation);

    RunOptions o;
    o.shots = 500;
    o.post_select = true;
    ExperimentReport clean = run("bell_68", o);
    EXPECT_EQ(*clean.step("bell").retained_fraction, 1.0);
    EXPECT_EQ(post_select_fermion_parity(clean.step("bell").records).shots.size(), 500u);
}

TEST(experiments, post_selection_helps_under_noise) {
    RunOptions o;
    o.shots = 3000;
    o.noise = {0.01, 0.01, 0.0, 5};
    ExperimentReport raw = run("bell_68", o);
    o.post_select = true;
    ExperimentReport ps = run("bell_68", o);
    const DerivedValue *a = raw.find_derived("bell_fidelity");
    const DerivedValue *b = ps.find_derived("bell_fidelity");
    EXPECT_LT(a->estimate, 1.0);
    EXPECT_GT(a->estimate, 0.5);
    EXPECT_GE(b->estimate, a->estimate - 3 * std::hypot(a->stderr_, b->stderr_));
    EXPECT_LT(*ps.step("bell").retained_fraction, 1.0);
    EXPECT_NEAR(bell_fidelity(ps), b->estimate, 1e-9);
}
