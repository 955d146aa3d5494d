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
#include "twistlab/strings.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "twistlab/errors.h"

namespace twistlab {

using nlohmann::json;

namespace {

const char *const EXTERIOR = "exterior";

// Virtual cells all belong to one exterior group so strings may leave and re-enter through it.
std::string chain_group(const Lattice &lattice, Coord cell) {
    auto owner = lattice.cell_owner(cell);
    return owner ? lattice.stabilizers()[*owner].id : std::string(EXTERIOR);
}

bool steps_touch(const Lattice &lattice, const PathStep &a, const PathStep &b) {
    auto [a1, a2] = step_cells(a);
    auto [b1, b2] = step_cells(b);
    std::string ga1 = chain_group(lattice, a1), ga2 = chain_group(lattice, a2);
    std::string gb1 = chain_group(lattice, b1), gb2 = chain_group(lattice, b2);
    return ga1 == gb1 || ga1 == gb2 || ga2 == gb1 || ga2 == gb2;
}

std::vector<PathStep> steps_of(const PauliOperator &op, const Lattice &lattice) {
    std::vector<PathStep> steps;
    for (size_t q : op.support()) {
        Coord s = lattice.qubit_coord(q);
        char l = op.letter(q);
        if (l == 'X' || l == 'Y') {
            steps.push_back({s, Orientation::Right});
        }
        if (l == 'Z' || l == 'Y') {
            steps.push_back({s, Orientation::Left});
        }
    }
    return steps;
}

}  // namespace

StringPath StringPath::make(const std::vector<Coord> &sites, const std::string &orient, bool closed) {
    if (sites.size() != orient.size()) {
        throw PathError("path has " + std::to_string(sites.size()) + " sites but " + std::to_string(orient.size()) +
                        " orientation letters");
    }
    StringPath p;
    p.closed = closed;
    for (size_t k = 0; k < sites.size(); k++) {
        if (orient[k] != 'R' && orient[k] != 'L') {
            throw PathError(std::string("orientation must be R or L, got ") + orient[k]);
        }
        p.steps.push_back({sites[k], orient[k] == 'R' ? Orientation::Right : Orientation::Left});
    }
    return p;
}

StringPath StringPath::from_json(const json &j) {
    std::vector<Coord> sites;
    try {
        for (const auto &s : j.at("sites")) {
            sites.push_back({s.at(0).get<int>(), s.at(1).get<int>()});
        }
        return make(sites, j.at("orient").get<std::string>(), j.value("closed", false));
    } catch (const json::exception &e) {
        throw PathError(std::string("malformed path: ") + e.what());
    }
}

json StringPath::to_json() const {
    json sites = json::array();
    for (const auto &s : steps) {
        sites.push_back({s.site.row, s.site.col});
    }
    return {{"sites", sites}, {"orient", orient_string()}, {"closed", closed}};
}

std::string StringPath::orient_string() const {
    std::string out;
    for (const auto &s : steps) {
        out += s.orient == Orientation::Right ? 'R' : 'L';
    }
    return out;
}

std::pair<Coord, Coord> step_cells(const PathStep &step) {
    Coord s = step.site;
    if (step.orient == Orientation::Right) {
        return {{s.row - 1, s.col}, {s.row, s.col - 1}};
    }
    return {{s.row - 1, s.col - 1}, {s.row, s.col}};
}

StringOperator from_path(const StringPath &path, const Lattice &lattice) {
    std::map<Coord, std::pair<bool, bool>> visits;
    for (size_t k = 0; k < path.steps.size(); k++) {
        const PathStep &step = path.steps[k];
        if (!lattice.has_qubit(step.site)) {
            throw PathError("path visits absent site " + step.site.str());
        }
        if (k > 0 && !steps_touch(lattice, path.steps[k - 1], step)) {
            throw PathError("path steps " + path.steps[k - 1].site.str() + " and " + step.site.str() +
                            " share no plaquette");
        }
        auto &v = visits[step.site];
        (step.orient == Orientation::Right ? v.first : v.second) = true;
    }
    if (path.closed && path.steps.size() > 1 && !steps_touch(lattice, path.steps.back(), path.steps.front())) {
        throw PathError("closed path does not return to its start");
    }

    StringOperator out{path, PauliOperator(lattice.num_qubits()), {}};
    std::map<size_t, bool> parity;
    for (const auto &[site, v] : visits) {
        char letter = v.first && v.second ? 'Y' : (v.first ? 'X' : 'Z');
        out.op.set_letter(lattice.qubit_index(site), letter);
        for (const Coord &cell : Lattice::letter_flips(site, letter)) {
            auto owner = lattice.cell_owner(cell);
            if (owner) {
                parity[*owner] = !parity[*owner];
            }
        }
    }
    for (const auto &[k, odd] : parity) {
        if (odd) {
            out.flipped.push_back(lattice.stabilizers()[k].id);
        }
    }
    if (path.closed && !out.flipped.empty()) {
        throw PathError("closed path flips " + std::to_string(out.flipped.size()) + " stabilizers");
    }
    return out;
}

std::optional<StringPath> chain_path(const PauliOperator &op, const Lattice &lattice, bool closed) {
    std::vector<PathStep> steps = steps_of(op, lattice);
    StringPath path;
    path.closed = closed;
    if (steps.empty()) {
        return path;
    }
    std::map<std::string, std::vector<std::pair<std::string, size_t>>> adj;
    for (size_t k = 0; k < steps.size(); k++) {
        auto [c1, c2] = step_cells(steps[k]);
        std::string g1 = chain_group(lattice, c1), g2 = chain_group(lattice, c2);
        adj[g1].push_back({g2, k});
        adj[g2].push_back({g1, k});
    }
    std::vector<std::string> odd;
    for (const auto &[g, edges] : adj) {
        if (edges.size() % 2) {
            odd.push_back(g);
        }
    }
    if ((closed && !odd.empty()) || odd.size() > 2) {
        return std::nullopt;
    }
    std::string start = odd.empty() ? adj.begin()->first : odd.front();
    for (auto &[g, edges] : adj) {
        std::reverse(edges.begin(), edges.end());
    }

    // Hierholzer walk over plaquette groups; each step is one edge.
    std::vector<bool> used(steps.size(), false);
    std::vector<std::pair<std::string, std::optional<size_t>>> stack{{start, std::nullopt}};
    std::vector<size_t> order;
    while (!stack.empty()) {
        auto &[g, via] = stack.back();
        auto &edges = adj[g];
        while (!edges.empty() && used[edges.back().second]) {
            edges.pop_back();
        }
        if (edges.empty()) {
            if (via) {
                order.push_back(*via);
            }
            stack.pop_back();
            continue;
        }
        auto [next, k] = edges.back();
        edges.pop_back();
        used[k] = true;
        stack.push_back({next, k});
    }
    if (order.size() != steps.size()) {
        return std::nullopt;
    }
    std::reverse(order.begin(), order.end());
    for (size_t k : order) {
        path.steps.push_back(steps[k]);
    }
    return path;
}

StringOperator charge_string(Coord twist, const Lattice &lattice) {
    const Twist *found = nullptr;
    for (const auto &t : lattice.twists()) {
        if (t.site == twist) {
            found = &t;
        }
    }
    if (found == nullptr) {
        throw DomainError(twist.str() + " is not a twist of " + lattice.name());
    }
    const PauliOperator &op = lattice.stabilizer(found->defect).op;
    auto path = chain_path(op, lattice, true);
    if (!path) {
        throw DomainError("no closed path encircles the twist at " + twist.str());
    }
    StringOperator s = from_path(*path, lattice);
    if (op.sign() < 0) {
        s.op = s.op.with_letter_phase(2);
    }
    return s;
}

MajoranaOperator majorana(const std::string &label, const StringPath &path, const Lattice &lattice, int sign) {
    StringOperator s = from_path(path, lattice);
    if (s.flipped.size() != 2) {
        throw DomainError("Majorana " + label + " flips " + std::to_string(s.flipped.size()) +
                          " stabilizers; it must end on two plaquettes");
    }
    const Plaquette &a = lattice.stabilizer(s.flipped[0]);
    const Plaquette &b = lattice.stabilizer(s.flipped[1]);
    if (a.kind != PlaquetteKind::Square || b.kind != PlaquetteKind::Square || a.color == b.color) {
        throw DomainError("Majorana " + label + " does not wind an odd number of twists");
    }
    PauliOperator op = s.op;
    if (sign < 0) {
        op = op.with_letter_phase(2);
    }
    return {label, op, s.flipped, path};
}

MajoranaEncoding::MajoranaEncoding(std::vector<MajoranaOperator> ops) : ops_(std::move(ops)) {
    for (size_t a = 0; a < ops_.size(); a++) {
        if (ops_[a].anchor != ops_[0].anchor) {
            throw DomainError("Majorana " + ops_[a].label + " does not share the encoding anchor");
        }
        for (size_t b = a + 1; b < ops_.size(); b++) {
            if (ops_[a].op.commutes(ops_[b].op)) {
                throw DomainError("Majoranas " + ops_[a].label + " and " + ops_[b].label + " commute");
            }
        }
    }
}

MajoranaEncoding MajoranaEncoding::from_lattice(const Lattice &lattice) {
    const json &extras = lattice.spec().extras;
    if (!extras.contains("majoranas")) {
        throw LookupError("lattice " + lattice.name() + " defines no Majorana operators");
    }
    std::vector<MajoranaOperator> ops;
    for (const auto &m : extras["majoranas"]) {
        std::string label = m.at("label").get<std::string>();
        PauliOperator listed = lattice.parse_operator(m.at("operator").get<std::string>());
        StringPath path = StringPath::from_json(m.at("path"));
        MajoranaOperator op = majorana(label, path, lattice, listed.sign());
        if (!op.op.same_letters(listed)) {
            throw SpecError("Majorana " + label + " path gives " + lattice.format_operator(op.op) + ", listed " +
                            m.at("operator").get<std::string>());
        }
        ops.push_back(std::move(op));
    }
    return MajoranaEncoding(std::move(ops));
}

const MajoranaOperator &MajoranaEncoding::c(size_t i) const {
    if (i < 1 || i > ops_.size()) {
        throw IndexError("Majorana label " + std::to_string(i) + " outside 1.." + std::to_string(ops_.size()));
    }
    return ops_[i - 1];
}

PauliOperator MajoranaEncoding::correlator(size_t i, size_t j) const {
    PauliOperator p = c(i).op * c(j).op;
    p.add_phase_exp(3);
    return p;
}

MajoranaEncoding MajoranaEncoding::relabeled(const std::vector<size_t> &order) const {
    std::vector<MajoranaOperator> ops;
    for (size_t i : order) {
        ops.push_back(c(i));
    }
    return MajoranaEncoding(std::move(ops));
}

StringPath transmute_path(Coord start, const std::vector<Coord> &twists, const Lattice &lattice, std::optional<Coord> end) {
    auto usable = [&](Coord cell) {
        auto owner = lattice.cell_owner(cell);
        return owner && lattice.stabilizers()[*owner].kind == PlaquetteKind::Square;
    };
    if (!usable(start)) {
        throw DomainError("start " + start.str() + " is not a square plaquette");
    }

    // Breadth-first search over colour-preserving single-letter moves.
    auto route = [&](Coord from, Coord to) {
        std::map<Coord, std::pair<Coord, PathStep>> parent;
        std::deque<Coord> queue{from};
        std::set<Coord> seen{from};
        while (!queue.empty() && !seen.count(to)) {
            Coord c = queue.front();
            queue.pop_front();
            std::vector<std::pair<Coord, PathStep>> moves = {
                {{c.row + 1, c.col - 1}, {{c.row + 1, c.col}, Orientation::Right}},
                {{c.row - 1, c.col + 1}, {{c.row, c.col + 1}, Orientation::Right}},
                {{c.row - 1, c.col - 1}, {{c.row, c.col}, Orientation::Left}},
                {{c.row + 1, c.col + 1}, {{c.row + 1, c.col + 1}, Orientation::Left}},
            };
            std::sort(moves.begin(), moves.end(), [](const auto &a, const auto &b) { return a.first < b.first; });
            for (const auto &[next, step] : moves) {
                if (seen.count(next) || !usable(next) || !lattice.has_qubit(step.site)) {
                    continue;
                }
                seen.insert(next);
                parent[next] = {c, step};
                queue.push_back(next);
            }
        }
        if (!seen.count(to)) {
            throw RoutingError("no route from " + from.str() + " to " + to.str());
        }
        std::vector<PathStep> steps;
        for (Coord c = to; c != from; c = parent.at(c).first) {
            steps.push_back(parent.at(c).second);
        }
        std::reverse(steps.begin(), steps.end());
        return steps;
    };

    StringPath path;
    Coord current = start;
    for (const Coord &t : twists) {
        std::string defect;
        for (const auto &tw : lattice.twists()) {
            if (tw.site == t) {
                defect = tw.defect;
            }
        }
        if (defect.empty()) {
            throw DomainError(t.str() + " is not a twist of " + lattice.name());
        }
        Coord nw{t.row - 1, t.col - 1}, ne{t.row - 1, t.col}, sw{t.row, t.col - 1}, se{t.row, t.col};
        std::vector<Coord> outside;
        for (Coord c : {nw, ne, sw, se}) {
            auto owner = lattice.cell_owner(c);
            if (!owner || lattice.stabilizers()[*owner].id != defect) {
                outside.push_back(c);
            }
        }
        if (outside.size() != 2 || !usable(outside[0]) || !usable(outside[1])) {
            throw RoutingError("twist " + t.str() + " is not reachable from square plaquettes on both sides");
        }
        Color want = cell_color(current);
        Coord entry = cell_color(outside[0]) == want ? outside[0] : outside[1];
        Coord exit = entry == outside[0] ? outside[1] : outside[0];
        for (const auto &s : route(current, entry)) {
            path.steps.push_back(s);
        }
        bool right_first = entry == ne || entry == sw;
        path.steps.push_back({t, right_first ? Orientation::Right : Orientation::Left});
        path.steps.push_back({t, right_first ? Orientation::Left : Orientation::Right});
        current = exit;
    }
    if (end) {
        if (!usable(*end) || cell_color(*end) != cell_color(current)) {
            throw RoutingError("cannot finish on " + end->str() + " with the excitation's charge type");
        }
        for (const auto &s : route(current, *end)) {
            path.steps.push_back(s);
        }
    }
    return path;
}

}  // namespace twistlab
