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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <thread>

#include "twistlab/errors.h"
#include "twistlab/strings.h"

namespace twistlab {

ExperimentProgram ExperimentProgram::from_json(const nlohmann::json &j) {
    if (!j.is_object() || !j.contains("id") || !j.contains("lattice") || !j.contains("steps")) {
        throw SpecError("experiment needs 'id', 'lattice' and 'steps'");
    }
    ExperimentProgram p;
    p.id = j.at("id").get<std::string>();
    p.title = j.value("title", "");
    p.definition = j;
    return p;
}

ExperimentProgram ExperimentProgram::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw LookupError("cannot open experiment file " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw SpecError("malformed experiment file " + path + ": " + e.what());
    }
    return from_json(j);
}

static std::filesystem::path experiments_dir() {
    return std::filesystem::path(data_directory()) / "experiments";
}

ExperimentProgram ExperimentProgram::builtin(const std::string &id) {
    auto path = experiments_dir() / (id + ".json");
    if (id.empty() || id.find('/') != std::string::npos || !std::filesystem::exists(path)) {
        throw LookupError("unknown experiment '" + id + "'");
    }
    return load(path.string());
}

std::vector<std::string> list_experiments() {
    std::vector<std::string> ids;
    for (const auto &e : std::filesystem::directory_iterator(experiments_dir())) {
        if (e.path().extension() == ".json") {
            ids.push_back(e.path().stem().string());
        }
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

const ReportEntry *ReportStep::find(const std::string &observable) const {
    for (const auto &e : entries) {
        if (e.observable == observable) {
            return &e;
        }
    }
    return nullptr;
}

const ReportEntry &ReportStep::entry(const std::string &observable) const {
    const ReportEntry *e = find(observable);
    if (!e) {
        throw LookupError("step '" + label + "' has no entry '" + observable + "'");
    }
    return *e;
}

const ReportStep &ExperimentReport::step(const std::string &label) const {
    for (const auto &s : steps) {
        if (s.label == label) {
            return s;
        }
    }
    throw LookupError("report has no step '" + label + "'");
}

const DerivedValue *ExperimentReport::find_derived(const std::string &name) const {
    for (const auto &d : derived) {
        if (d.name == name) {
            return &d;
        }
    }
    return nullptr;
}

nlohmann::ordered_json ExperimentReport::to_json() const {
    nlohmann::ordered_json j;
    j["experiment"] = experiment;
    j["title"] = title;
    j["lattice"] = lattice;
    j["mode"] = exact() ? "exact" : "shots";
    j["shots"] = shots;
    j["seed"] = noise.seed;
    j["noise"] = {{"p1", noise.p1}, {"p2", noise.p2}, {"p_ro", noise.p_ro}};
    j["readout_model"] = "operator outcome flipped with p_eff = (1 - (1 - 2 p_ro)^weight) / 2";
    j["post_selected"] = post_selected;
    j["annotations"] = annotations;
    nlohmann::ordered_json js = nlohmann::ordered_json::array();
    for (const auto &s : steps) {
        nlohmann::ordered_json o;
        o["label"] = s.label;
        if (s.retained_fraction) {
            o["retained_fraction"] = *s.retained_fraction;
        }
        nlohmann::ordered_json es = nlohmann::ordered_json::array();
        for (const auto &e : s.entries) {
            es.push_back({{"observable", e.observable},
                          {"operator", e.op},
                          {"weight", e.weight},
                          {"estimate", e.estimate},
                          {"stderr", e.stderr_},
                          {"ideal", e.ideal}});
        }
        o["entries"] = es;
        js.push_back(o);
    }
    j["steps"] = js;
    nlohmann::ordered_json jd = nlohmann::ordered_json::object();
    for (const auto &d : derived) {
        jd[d.name] = {{"step", d.step}, {"estimate", d.estimate}, {"stderr", d.stderr_}, {"ideal", d.ideal}};
    }
    j["derived"] = jd;
    return j;
}

static std::string fmt(double v) {
    std::ostringstream o;
    o << std::setprecision(12) << v;
    return o.str();
}

std::string ExperimentReport::to_csv() const {
    std::ostringstream o;
    o << "experiment,step,observable,operator,weight,estimate,stderr,ideal\n";
    for (const auto &s : steps) {
        for (const auto &e : s.entries) {
            o << experiment << ',' << s.label << ',' << e.observable << ',' << e.op << ',' << e.weight << ','
              << fmt(e.estimate) << ',' << fmt(e.stderr_) << ',' << e.ideal << '\n';
        }
    }
    for (const auto &d : derived) {
        o << experiment << ',' << d.step << ',' << d.name << ",," << 0 << ',' << fmt(d.estimate) << ','
          << fmt(d.stderr_) << ',' << fmt(d.ideal) << '\n';
    }
    return o.str();
}

namespace {

struct Observable {
    std::string label;
    PauliOperator op;
    std::string text;
};

struct MeasureGroup {
    std::vector<size_t> members;
    /// For each member, the earlier member with the same letters (or itself) and the relative sign.
    std::vector<std::pair<size_t, int>> alias;
};

struct TraceOp {
    enum Kind { Reset, Apply, Measure } kind;
    Circuit circuit;
    size_t step = 0;
    std::vector<Observable> obs;
    std::vector<MeasureGroup> groups;
};

bool supports(LogicalGate g, GateMode m) {
    switch (m) {
        case GateMode::FrameTracking:
            return true;
        case GateMode::PauliApplication:
            return g == LogicalGate::Z || g == LogicalGate::X;
        case GateMode::CodeDeformation:
            return g != LogicalGate::CX;
    }
    return false;
}

Coord coord_of(const nlohmann::json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw SpecError("coordinate must be [row, col]");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

std::vector<std::string> logical_strings(size_t n) {
    std::vector<std::string> out;
    size_t total = 1;
    for (size_t q = 0; q < n; q++) {
        total *= 4;
    }
    for (size_t code = 1; code < total; code++) {
        std::string s(n, 'I');
        size_t c = code;
        for (size_t q = n; q-- > 0;) {
            s[q] = "IXYZ"[c % 4];
            c /= 4;
        }
        out.push_back(s);
    }
    return out;
}

/// Interprets a program, simulating it exactly while recording the physical trace.
class Builder {
   public:
    Builder(const ExperimentProgram &prog, const RunOptions &opt) : def_(prog.definition), opt_(opt) {
        base_name_ = def_.at("lattice").get<std::string>();
        base_ = std::make_shared<Lattice>(Lattice::build(LatticeSpec::builtin(base_name_)));
        n_ = base_->num_qubits();
        std::string enc_name = def_.value("encoding", base_name_);
        std::shared_ptr<Lattice> enc_lat = enc_name == base_name_
                                               ? base_
                                               : std::make_shared<Lattice>(Lattice::build(LatticeSpec::builtin(enc_name)));
        if (enc_lat->num_qubits() != n_) {
            throw SpecError("encoding lattice " + enc_name + " has a different qubit count");
        }
        if (enc_lat->spec().extras.contains("majoranas")) {
            MajoranaEncoding enc = MajoranaEncoding::from_lattice(*enc_lat);
            if (def_.contains("relabel")) {
                enc = enc.relabeled(def_.at("relabel").get<std::vector<size_t>>());
            }
            if (def_.contains("negate")) {
                std::vector<MajoranaOperator> ops = enc.operators();
                for (size_t i : def_.at("negate").get<std::vector<size_t>>()) {
                    if (i == 0 || i > ops.size()) {
                        throw SpecError("negated Majorana label out of range");
                    }
                    ops[i - 1].op.add_phase_exp(2);
                }
                enc = MajoranaEncoding(ops);
            }
            encoding_ = enc;
        }
        FusionChargeAssignment charges;
        if (def_.contains("charges")) {
            charges.signs = def_.at("charges").get<std::map<std::string, int>>();
        }
        prep_ = compile_ground_state(*base_, charges).circuit;
        if (def_.contains("observables")) {
            observables_ = def_.at("observables");
        }
        reset();
    }

    void run() {
        for (const auto &step : def_.at("steps")) {
            std::string label = step.at("label").get<std::string>();
            if (step.contains("actions")) {
                for (const auto &a : step.at("actions")) {
                    action(a);
                }
            }
            measure(label, step.value("measure", nlohmann::json::array()));
        }
    }

    std::vector<TraceOp> trace;
    std::vector<ReportStep> steps;
    std::string lattice_name() const {
        return base_name_;
    }
    const Circuit &prep() const {
        return prep_;
    }
    size_t num_qubits() const {
        return n_;
    }

   private:
    void reset() {
        exact_ = StabilizerTableau(n_, 1);
        prep_.apply(exact_);
        lattice_ = base_;
        if (encoding_) {
            frame_ = MajoranaFrame(*encoding_);
        }
        graph_ = StabilizerGraph::from_lattice(*lattice_);
        trace.push_back({TraceOp::Reset, Circuit(n_), 0, {}, {}});
    }

    void physical(const Circuit &c) {
        if (c.depth() == 0) {
            return;
        }
        c.apply(exact_);
        trace.push_back({TraceOp::Apply, c, 0, {}, {}});
    }

    MajoranaFrame &frame() {
        if (!frame_) {
            throw SpecError("experiment uses Majorana operators but its lattice has no encoding");
        }
        return *frame_;
    }

    GateMode mode_for(LogicalGate g, const std::string &declared) {
        GateMode m = parse_gate_mode(declared);
        if (opt_.mode_override && supports(g, *opt_.mode_override)) {
            return *opt_.mode_override;
        }
        return m;
    }

    void action(const nlohmann::json &a) {
        if (a.contains("reset")) {
            reset();
        } else if (a.contains("pauli")) {
            physical(compile_pauli_unitary(lattice_->parse_operator(a.at("pauli").get<std::string>())));
        } else if (a.contains("path")) {
            physical(compile_pauli_unitary(from_path(StringPath::from_json(a.at("path")), *lattice_).op));
        } else if (a.contains("transmute")) {
            const auto &t = a.at("transmute");
            std::vector<Coord> twists;
            for (const auto &c : t.at("twists")) {
                twists.push_back(coord_of(c));
            }
            std::optional<Coord> end;
            if (t.contains("end")) {
                end = coord_of(t.at("end"));
            }
            StringPath path = transmute_path(coord_of(t.at("start")), twists, *lattice_, end);
            physical(compile_pauli_unitary(from_path(path, *lattice_).op));
        } else if (a.contains("gate")) {
            LogicalGate g = parse_logical_gate(a.at("gate").get<std::string>());
            size_t q = a.value("qubit", (size_t)1);
            GateMode m = mode_for(g, a.value("mode", "frame"));
            MajoranaFrame &f = frame();
            physical(logical_gate_circuit(f, g, m, q));
            if (m == GateMode::FrameTracking) {
                f.braid(logical_gate_word(g, q, f.num_logical_qubits()));
            }
        } else if (a.contains("braid")) {
            BraidWord w = BraidWord::parse(a.at("braid").get<std::string>());
            GateMode m = parse_gate_mode(a.value("mode", "frame"));
            if (opt_.mode_override && *opt_.mode_override != GateMode::PauliApplication) {
                m = *opt_.mode_override;
            }
            MajoranaFrame &f = frame();
            if (m == GateMode::FrameTracking) {
                f.braid(w);
            } else if (m == GateMode::CodeDeformation) {
                for (const auto &g : w.gens) {
                    physical(compile_pauli_rotation(physical_braid_generator(f, g)));
                }
            } else {
                throw ContractViolation("braid words cannot be applied as Pauli strings");
            }
        } else if (a.contains("switch_lattice")) {
            std::string name = a.at("switch_lattice").get<std::string>();
            auto next = std::make_shared<Lattice>(Lattice::build(LatticeSpec::builtin(name)));
            if (next->num_qubits() != n_) {
                throw SpecError("lattice " + name + " has a different qubit count");
            }
            StabilizerGraph g = StabilizerGraph::from_lattice(*next);
            for (size_t k = 0; k < graph_.labels.size(); k++) {
                if (!lattice_->find_stabilizer(graph_.labels[k])) {
                    g.add(graph_.labels[k], graph_.ops[k]);
                }
            }
            lattice_ = next;
            graph_ = g;
        } else if (a.contains("track")) {
            for (const auto &[label, spec] : a.at("track").items()) {
                graph_.add(label, resolve(spec));
            }
        } else if (a.contains("untrack")) {
            for (const auto &label : a.at("untrack")) {
                size_t k = graph_.index(label.get<std::string>());
                graph_.labels.erase(graph_.labels.begin() + (long)k);
                graph_.ops.erase(graph_.ops.begin() + (long)k);
            }
        } else if (a.contains("deform")) {
            for (const auto &s : a.at("deform")) {
                DeformationStep step{s.at("old").get<std::string>(), s.at("new").get<std::string>(),
                                     resolve(s.at("operator"))};
                physical(deformation_step_circuit(graph_, step));
                size_t k = graph_.index(step.old_label);
                graph_.labels[k] = step.new_label;
                graph_.ops[k] = step.s_new;
            }
        } else {
            throw SpecError("unknown experiment action: " + a.dump());
        }
    }

    PauliOperator resolve(const nlohmann::json &spec) {
        PauliOperator p(n_);
        bool negate = false;
        if (spec.is_string()) {
            std::string s = spec.get<std::string>();
            if (observables_.contains(s)) {
                return resolve(observables_.at(s));
            }
            if (auto k = lattice_->find_stabilizer(s)) {
                return lattice_->stabilizers()[*k].op;
            }
            for (size_t k = 0; k < graph_.labels.size(); k++) {
                if (graph_.labels[k] == s) {
                    return graph_.ops[k];
                }
            }
            if (frame_ && (frame_->table().count(s) ||
                           (s.size() == frame_->num_logical_qubits() &&
                            s.find_first_not_of("IXYZ") == std::string::npos))) {
                return frame_->table().count(s) ? frame_->table().at(s) : frame_->logical_product(s);
            }
            return lattice_->parse_operator(s);
        }
        negate = spec.value("negate", false);
        if (spec.contains("correlator")) {
            auto ij = spec.at("correlator").get<std::vector<size_t>>();
            p = frame().correlator(ij.at(0), ij.at(1));
        } else if (spec.contains("encoding_correlator")) {
            auto ij = spec.at("encoding_correlator").get<std::vector<size_t>>();
            frame();
            p = encoding_->correlator(ij.at(0), ij.at(1));
        } else if (spec.contains("logical")) {
            std::string s = spec.at("logical").get<std::string>();
            MajoranaFrame &f = frame();
            p = f.table().count(s) ? f.table().at(s) : f.logical_product(s);
        } else if (spec.contains("stabilizer")) {
            p = lattice_->stabilizer(spec.at("stabilizer").get<std::string>()).op;
        } else if (spec.contains("operator")) {
            p = lattice_->parse_operator(spec.at("operator").get<std::string>());
        } else {
            throw SpecError("unknown observable spec: " + spec.dump());
        }
        if (negate) {
            p.add_phase_exp(2);
        }
        return p;
    }

    void measure(const std::string &label, const nlohmann::json &list) {
        std::vector<std::string> labels;
        for (const auto &item : list) {
            std::string s = item.get<std::string>();
            if (s == "stabilizers") {
                for (const auto &p : lattice_->stabilizers()) {
                    labels.push_back(p.id);
                }
            } else if (s == "logical_paulis") {
                for (const auto &l : logical_strings(frame().num_logical_qubits())) {
                    labels.push_back(l);
                }
            } else {
                labels.push_back(s);
            }
        }
        TraceOp op{TraceOp::Measure, Circuit(n_), steps.size(), {}, {}};
        ReportStep rs;
        rs.label = label;
        for (const auto &l : labels) {
            PauliOperator p = resolve(l);
            if (!p.is_hermitian()) {
                throw ContractViolation("observable " + l + " is not Hermitian");
            }
            int ideal = exact_.expectation(p);
            std::string text = lattice_->format_operator(p);
            op.obs.push_back({l, p, text});
            rs.entries.push_back({l, text, p.weight(), (double)ideal, 0.0, ideal});
        }
        for (size_t k = 0; k < op.obs.size(); k++) {
            bool placed = false;
            for (auto &g : op.groups) {
                bool ok = std::all_of(g.members.begin(), g.members.end(),
                                      [&](size_t m) { return op.obs[m].op.commutes(op.obs[k].op); });
                if (!ok) {
                    continue;
                }
                std::pair<size_t, int> alias{k, +1};
                for (size_t m : g.members) {
                    if (op.obs[m].op.same_letters(op.obs[k].op)) {
                        alias = {m, op.obs[m].op == op.obs[k].op ? +1 : -1};
                        break;
                    }
                }
                g.members.push_back(k);
                g.alias.push_back(alias);
                placed = true;
                break;
            }
            if (!placed) {
                op.groups.push_back({{k}, {{k, +1}}});
            }
        }
        trace.push_back(std::move(op));
        steps.push_back(std::move(rs));
    }

    nlohmann::json def_;
    RunOptions opt_;
    std::string base_name_;
    std::shared_ptr<Lattice> base_;
    std::shared_ptr<Lattice> lattice_;
    size_t n_ = 0;
    std::optional<MajoranaEncoding> encoding_;
    std::optional<MajoranaFrame> frame_;
    Circuit prep_;
    StabilizerTableau exact_{1};
    StabilizerGraph graph_;
    nlohmann::json observables_ = nlohmann::json::object();
};

void run_shots(const std::vector<TraceOp> &trace, const Circuit &prep, size_t n, std::vector<ReportStep> &steps,
               const RunOptions &opt) {
    size_t shots = opt.shots;
    for (auto &s : steps) {
        s.records.labels.clear();
        for (const auto &e : s.entries) {
            s.records.labels.push_back(e.observable);
        }
        s.records.shots.assign(shots, std::vector<int8_t>(s.entries.size(), 0));
    }
    auto worker = [&](size_t begin, size_t end) {
        std::uniform_real_distribution<double> u(0, 1);
        for (size_t shot = begin; shot < end; shot++) {
            uint64_t seed = shot_seed(opt.noise.seed, shot);
            std::mt19937_64 rng(seed);
            StabilizerTableau t(n, seed ^ 0x5DEECE66DULL);
            for (const auto &op : trace) {
                if (op.kind == TraceOp::Reset) {
                    t = StabilizerTableau(n, rng());
                    apply_noisy(prep, t, opt.noise, rng);
                } else if (op.kind == TraceOp::Apply) {
                    apply_noisy(op.circuit, t, opt.noise, rng);
                } else {
                    auto &row = steps[op.step].records.shots[shot];
                    for (const auto &g : op.groups) {
                        StabilizerTableau c = t;
                        c.reseed(rng());
                        for (size_t m = 0; m < g.members.size(); m++) {
                            size_t k = g.members[m];
                            auto [src, rel] = g.alias[m];
                            if (src != k) {
                                row[k] = (int8_t)(row[src] * rel);
                                continue;
                            }
                            int o = c.measure(op.obs[k].op);
                            double pe = effective_readout_flip(opt.noise.p_ro, op.obs[k].op.weight());
                            if (pe > 0 && u(rng) < pe) {
                                o = -o;
                            }
                            row[k] = (int8_t)o;
                        }
                    }
                }
            }
        }
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = (unsigned)std::min<size_t>(threads, std::max<size_t>(1, shots / 64));
    std::vector<std::thread> pool;
    size_t chunk = (shots + threads - 1) / threads;
    for (unsigned w = 0; w < threads; w++) {
        size_t b = w * chunk;
        size_t e = std::min(shots, b + chunk);
        if (b < e) {
            pool.emplace_back(worker, b, e);
        }
    }
    for (auto &th : pool) {
        th.join();
    }
}

std::pair<double, double> mean_stderr(const std::vector<double> &xs) {
    if (xs.empty()) {
        return {0, 0};
    }
    double m = 0;
    for (double x : xs) {
        m += x;
    }
    m /= (double)xs.size();
    if (xs.size() < 2) {
        return {m, 0};
    }
    double v = 0;
    for (double x : xs) {
        v += (x - m) * (x - m);
    }
    v /= (double)(xs.size() - 1);
    return {m, std::sqrt(v / (double)xs.size())};
}

using cd = std::complex<double>;

/// Applies a logical Pauli string to a 2^n vector; qubit 1 is the most significant bit.
std::vector<cd> apply_letters(const std::string &letters, const std::vector<cd> &v) {
    size_t n = letters.size();
    std::vector<cd> out(v.size(), 0);
    for (size_t idx = 0; idx < v.size(); idx++) {
        size_t to = idx;
        cd f = 1;
        for (size_t q = 0; q < n; q++) {
            size_t bitpos = n - 1 - q;
            bool b = (idx >> bitpos) & 1;
            switch (letters[q]) {
                case 'X':
                    to ^= size_t{1} << bitpos;
                    break;
                case 'Y':
                    to ^= size_t{1} << bitpos;
                    f *= b ? cd(0, -1) : cd(0, 1);
                    break;
                case 'Z':
                    if (b) {
                        f = -f;
                    }
                    break;
                default:
                    break;
            }
        }
        out[to] += f * v[idx];
    }
    return out;
}

std::vector<cd> ghz_vector(size_t n) {
    std::vector<cd> v(size_t{1} << n, 0);
    v.front() = v.back() = 1 / std::sqrt(2.0);
    return v;
}

/// <GHZ|P|GHZ> for every logical string, in logical_strings order.
std::vector<double> ghz_weights(size_t n) {
    std::vector<double> w;
    auto g = ghz_vector(n);
    for (const auto &s : logical_strings(n)) {
        auto pg = apply_letters(s, g);
        cd acc = 0;
        for (size_t k = 0; k < g.size(); k++) {
            acc += std::conj(g[k]) * pg[k];
        }
        w.push_back(acc.real());
    }
    return w;
}

std::vector<size_t> kept_shots(const ReportStep &step, const std::optional<std::array<std::string, 3>> &parity) {
    std::vector<size_t> idx;
    const auto &r = step.records;
    std::vector<size_t> cols;
    if (parity) {
        for (const auto &l : *parity) {
            auto it = std::find(r.labels.begin(), r.labels.end(), l);
            if (it == r.labels.end()) {
                throw ContractViolation("post-selection needs correlator " + l + " in step " + step.label);
            }
            cols.push_back((size_t)(it - r.labels.begin()));
        }
    }
    for (size_t s = 0; s < r.shots.size(); s++) {
        int neg = 0;
        for (size_t c : cols) {
            neg += r.shots[s][c] < 0;
        }
        if (neg % 2 == 0) {
            idx.push_back(s);
        }
    }
    return idx;
}

}  // namespace

ExperimentReport run(const ExperimentProgram &program, const RunOptions &options) {
    options.noise.validate();
    Builder b(program, options);
    b.run();
    const auto &def = program.definition;
    ExperimentReport rep;
    rep.experiment = program.id;
    rep.title = program.title;
    rep.lattice = b.lattice_name();
    rep.shots = options.shots;
    rep.noise = options.noise;
    rep.annotations = def.value("annotations", nlohmann::json::object());
    rep.steps = std::move(b.steps);

    std::optional<std::array<std::string, 3>> parity;
    if (options.post_select && def.contains("post_select")) {
        auto l = def.at("post_select").get<std::vector<std::string>>();
        if (l.size() != 3) {
            throw SpecError("post_select lists exactly three correlators");
        }
        parity = std::array<std::string, 3>{l[0], l[1], l[2]};
    }
    // Shot indices used per step, for estimates and derived quantities.
    std::vector<std::vector<size_t>> used(rep.steps.size());
    if (!rep.exact()) {
        run_shots(b.trace, b.prep(), b.num_qubits(), rep.steps, options);
        for (size_t si = 0; si < rep.steps.size(); si++) {
            auto &s = rep.steps[si];
            bool filter = parity && std::all_of(parity->begin(), parity->end(),
                                                [&](const std::string &l) { return s.find(l) != nullptr; });
            used[si] = kept_shots(s, filter ? parity : std::nullopt);
            if (filter) {
                s.retained_fraction = options.shots ? (double)used[si].size() / (double)options.shots : 0.0;
                rep.post_selected = true;
            }
            for (size_t k = 0; k < s.entries.size(); k++) {
                std::vector<double> xs;
                xs.reserve(used[si].size());
                for (size_t shot : used[si]) {
                    xs.push_back(s.records.shots[shot][k]);
                }
                auto [m, e] = mean_stderr(xs);
                s.entries[k].estimate = m;
                s.entries[k].stderr_ = e;
            }
        }
    }

    for (const auto &d : def.value("derived", nlohmann::json::array())) {
        std::string name = d.at("name").get<std::string>();
        std::string kind = d.at("kind").get<std::string>();
        std::string step_label = d.at("step").get<std::string>();
        size_t si = 0;
        while (si < rep.steps.size() && rep.steps[si].label != step_label) {
            si++;
        }
        if (si == rep.steps.size()) {
            throw SpecError("derived value " + name + " refers to unknown step " + step_label);
        }
        const auto &s = rep.steps[si];
        std::vector<std::pair<size_t, double>> terms;
        double offset = 0;
        auto col = [&](const std::string &l) {
            for (size_t k = 0; k < s.entries.size(); k++) {
                if (s.entries[k].observable == l) {
                    return k;
                }
            }
            throw ContractViolation("step " + s.label + " has no entry " + l);
        };
        if (kind == "bell") {
            offset = 0.25;
            terms = {{col("XX"), 0.25}, {col("YY"), -0.25}, {col("ZZ"), 0.25}};
        } else if (kind == "ghz") {
            size_t nq = d.value("qubits", (size_t)3);
            double scale = 1.0 / (double)(size_t{1} << nq);
            offset = scale;
            auto w = ghz_weights(nq);
            auto strs = logical_strings(nq);
            for (size_t k = 0; k < strs.size(); k++) {
                if (w[k] != 0) {
                    terms.push_back({col(strs[k]), scale * w[k]});
                }
            }
        } else {
            throw SpecError("unknown derived kind " + kind);
        }
        DerivedValue dv{name, step_label, 0, 0, offset};
        for (auto [k, c] : terms) {
            dv.ideal += c * s.entries[k].ideal;
        }
        if (rep.exact()) {
            dv.estimate = dv.ideal;
        } else {
            std::vector<double> xs;
            for (size_t shot : used[si]) {
                double f = offset;
                for (auto [k, c] : terms) {
                    f += c * s.records.shots[shot][k];
                }
                xs.push_back(f);
            }
            auto [m, e] = mean_stderr(xs);
            dv.estimate = m;
            dv.stderr_ = e;
        }
        rep.derived.push_back(dv);
    }
    return rep;
}

ExperimentReport run(const std::string &id, const RunOptions &options) {
    return run(ExperimentProgram::builtin(id), options);
}

double bell_fidelity(const ExperimentReport &report) {
    for (auto it = report.steps.rbegin(); it != report.steps.rend(); ++it) {
        const ReportEntry *xx = it->find("XX");
        const ReportEntry *yy = it->find("YY");
        const ReportEntry *zz = it->find("ZZ");
        if (xx && yy && zz) {
            return (1 + xx->estimate - yy->estimate + zz->estimate) / 4;
        }
    }
    throw ContractViolation("report has no step with XX, YY and ZZ entries");
}

Tomography linear_inversion(const ReportStep &step, size_t num_qubits) {
    size_t d = size_t{1} << num_qubits;
    Tomography t;
    t.num_qubits = num_qubits;
    t.rho.assign(d * d, 0);
    std::vector<std::string> strs = logical_strings(num_qubits);
    strs.insert(strs.begin(), std::string(num_qubits, 'I'));
    for (const auto &s : strs) {
        double e = 1;
        if (s.find_first_not_of('I') != std::string::npos) {
            const ReportEntry *entry = step.find(s);
            if (!entry) {
                throw ContractViolation("tomography needs the expectation of " + s);
            }
            e = entry->estimate;
        }
        for (size_t col = 0; col < d; col++) {
            std::vector<cd> basis(d, 0);
            basis[col] = 1;
            auto img = apply_letters(s, basis);
            for (size_t row = 0; row < d; row++) {
                t.rho[row * d + col] += e * img[row] / (double)d;
            }
        }
    }
    t.trace = 0;
    for (size_t k = 0; k < d; k++) {
        t.trace += t.rho[k * d + k];
    }
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            t.hermiticity_error = std::max(t.hermiticity_error, std::abs(t.rho[r * d + c] - std::conj(t.rho[c * d + r])));
        }
    }
    auto g = ghz_vector(num_qubits);
    cd f = 0;
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            f += std::conj(g[r]) * t.rho[r * d + c] * g[c];
        }
    }
    t.fidelity = f.real();
    return t;
}

Tomography ghz_tomography(const ExperimentReport &report) {
    for (auto it = report.steps.rbegin(); it != report.steps.rend(); ++it) {
        if (it->find("XXX")) {
            return linear_inversion(*it, 3);
        }
    }
    throw ContractViolation("report has no three-qubit tomography step");
}

ShotRecords post_select_fermion_parity(const ShotRecords &records, const std::array<std::string, 3> &labels) {
    std::vector<size_t> cols;
    for (const auto &l : labels) {
        auto it = std::find(records.labels.begin(), records.labels.end(), l);
        if (it == records.labels.end()) {
            throw ContractViolation("shot records lack correlator " + l);
        }
        cols.push_back((size_t)(it - records.labels.begin()));
    }
    ShotRecords out;
    out.labels = records.labels;
    for (const auto &shot : records.shots) {
        int neg = 0;
        for (size_t c : cols) {
            neg += shot.at(c) < 0;
        }
        if (neg % 2 == 0) {
            out.shots.push_back(shot);
        }
    }
    return out;
}

}  // namespace twistlab
