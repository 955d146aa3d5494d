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
#include "twistlab/lattice.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "twistlab/errors.h"
#include "twistlab/tableau.h"

namespace twistlab {

using nlohmann::json;

std::string Coord::str() const {
    return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

int zigzag_index(Coord c, int cols) {
    if (c.row < 1 || c.col < 1 || c.col > cols) {
        throw IndexError("coordinate " + c.str() + " outside a grid with " + std::to_string(cols) + " columns");
    }
    return (c.row - 1) * cols + c.col;
}

Coord zigzag_coord(int k, int cols) {
    if (k < 1 || cols < 1) {
        throw IndexError("zig-zag index " + std::to_string(k) + " out of range");
    }
    return {(k - 1) / cols + 1, (k - 1) % cols + 1};
}

const char *color_name(Color c) {
    switch (c) {
        case Color::Dark:
            return "dark";
        case Color::Light:
            return "light";
        case Color::Mixed:
            return "mixed";
    }
    return "?";
}

Color cell_color(Coord cell) {
    return ((cell.row + cell.col) % 2 + 2) % 2 == 0 ? Color::Dark : Color::Light;
}

std::string data_directory() {
    const char *env = std::getenv("TWISTLAB_DATA");
    if (env != nullptr && env[0] != 0) {
        return env;
    }
    return TWISTLAB_DATA_DIR;
}

namespace {

Coord coord_from_json(const json &j) {
    if (!j.is_array() || j.size() != 2) {
        throw SpecError("coordinate must be a [row, col] pair: " + j.dump());
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

std::vector<Coord> coords_from_json(const json &j) {
    std::vector<Coord> out;
    for (const auto &c : j) {
        out.push_back(coord_from_json(c));
    }
    return out;
}

json coords_to_json(const std::vector<Coord> &cs) {
    json out = json::array();
    for (const auto &c : cs) {
        out.push_back({c.row, c.col});
    }
    return out;
}

const std::set<std::string> SPEC_KEYS = {
    "name", "description", "rows", "cols", "present", "absent", "defects", "boundary", "dropped"};

// Corner sites of cell (a,b) with their letters.
struct CornerSite {
    Coord site;
    char letter;
};

std::vector<CornerSite> cell_corners(Coord cell) {
    return {
        {{cell.row, cell.col}, 'X'},
        {{cell.row + 1, cell.col}, 'Z'},
        {{cell.row, cell.col + 1}, 'Z'},
        {{cell.row + 1, cell.col + 1}, 'X'},
    };
}

}  // namespace

LatticeSpec LatticeSpec::full(int rows, int cols) {
    LatticeSpec s;
    s.name = std::to_string(rows) + "x" + std::to_string(cols);
    s.rows = rows;
    s.cols = cols;
    for (int r = 1; r <= rows; r++) {
        for (int c = 1; c <= cols; c++) {
            s.present.push_back({r, c});
        }
    }
    return s;
}

LatticeSpec LatticeSpec::from_json(const json &j) {
    LatticeSpec s;
    try {
        s.name = j.value("name", std::string("unnamed"));
        s.description = j.value("description", std::string());
        s.rows = j.at("rows").get<int>();
        s.cols = j.at("cols").get<int>();
        const json &present = j.at("present");
        if (present.is_string()) {
            if (present.get<std::string>() != "all") {
                throw SpecError("present must be \"all\" or a list of coordinates");
            }
            s.present = full(s.rows, s.cols).present;
        } else {
            s.present = coords_from_json(present);
        }
        if (j.contains("absent")) {
            std::set<Coord> absent;
            for (const auto &c : coords_from_json(j["absent"])) {
                absent.insert(c);
            }
            std::erase_if(s.present, [&](const Coord &c) { return absent.count(c) > 0; });
        }
        for (const auto &d : j.value("defects", json::array())) {
            s.defects.push_back({d.at("label").get<std::string>(), coords_from_json(d.at("cells"))});
        }
        s.boundary = coords_from_json(j.value("boundary", json::array()));
        s.dropped = coords_from_json(j.value("dropped", json::array()));
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!SPEC_KEYS.count(it.key())) {
                s.extras[it.key()] = it.value();
            }
        }
    } catch (const json::exception &e) {
        throw SpecError(std::string("malformed lattice config: ") + e.what());
    }
    return s;
}

LatticeSpec LatticeSpec::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw LookupError("cannot open lattice config " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw SpecError("cannot parse " + path + ": " + e.what());
    }
    return from_json(j);
}

LatticeSpec LatticeSpec::builtin(const std::string &name) {
    return load(data_directory() + "/lattices/" + name + ".json");
}

json LatticeSpec::to_json() const {
    json j = extras;
    j["name"] = name;
    if (!description.empty()) {
        j["description"] = description;
    }
    j["rows"] = rows;
    j["cols"] = cols;
    j["present"] = coords_to_json(present);
    json ds = json::array();
    for (const auto &d : defects) {
        ds.push_back({{"label", d.label}, {"cells", coords_to_json(d.cells)}});
    }
    j["defects"] = ds;
    j["boundary"] = coords_to_json(boundary);
    j["dropped"] = coords_to_json(dropped);
    return j;
}

bool Lattice::has_qubit(Coord c) const {
    return index_.count(c) > 0;
}

size_t Lattice::qubit_index(Coord c) const {
    auto it = index_.find(c);
    if (it == index_.end()) {
        throw IndexError("no qubit at " + c.str() + " in lattice " + spec_.name);
    }
    return it->second;
}

Coord Lattice::qubit_coord(size_t index) const {
    if (index >= coords_.size()) {
        throw IndexError("qubit index " + std::to_string(index) + " out of range");
    }
    return coords_[index];
}

std::optional<PauliOperator> Lattice::cell_operator(Coord cell) const {
    PauliOperator op(coords_.size());
    size_t used = 0;
    for (const auto &corner : cell_corners(cell)) {
        const Coord &s = corner.site;
        bool in_grid = s.row >= 1 && s.row <= spec_.rows && s.col >= 1 && s.col <= spec_.cols;
        if (!in_grid) {
            continue;
        }
        auto it = index_.find(s);
        if (it == index_.end()) {
            return std::nullopt;
        }
        op.set_letter(it->second, corner.letter);
        used++;
    }
    if (used == 0) {
        return std::nullopt;
    }
    return op;
}

Lattice Lattice::build(const LatticeSpec &spec) {
    Lattice L;
    L.spec_ = spec;
    if (spec.rows < 1 || spec.cols < 1) {
        throw SpecError("lattice " + spec.name + " needs positive dimensions");
    }
    std::vector<Coord> present = spec.present;
    std::sort(present.begin(), present.end());
    for (size_t k = 0; k < present.size(); k++) {
        const Coord &c = present[k];
        if (c.row < 1 || c.row > spec.rows || c.col < 1 || c.col > spec.cols) {
            throw SpecError("present qubit " + c.str() + " lies outside the grid");
        }
        if (k > 0 && present[k - 1] == c) {
            throw SpecError("present qubit " + c.str() + " listed twice");
        }
        L.index_[c] = k;
    }
    L.coords_ = present;
    if (present.empty()) {
        throw SpecError("lattice " + spec.name + " has no qubits");
    }

    std::set<Coord> dropped(spec.dropped.begin(), spec.dropped.end());
    std::map<Coord, PauliOperator> cells;
    for (int a = 1; a < spec.rows; a++) {
        for (int b = 1; b < spec.cols; b++) {
            Coord cell{a, b};
            if (dropped.count(cell)) {
                continue;
            }
            auto op = L.cell_operator(cell);
            if (op) {
                cells.emplace(cell, *op);
            }
        }
    }
    for (const auto &cell : spec.boundary) {
        bool inside = cell.row >= 1 && cell.row < spec.rows && cell.col >= 1 && cell.col < spec.cols;
        bool reaches = cell.row >= 0 && cell.row <= spec.rows && cell.col >= 0 && cell.col <= spec.cols;
        if (inside || !reaches) {
            throw SpecError("boundary plaquette " + cell.str() + " does not straddle the grid edge");
        }
        if (dropped.count(cell)) {
            continue;
        }
        auto op = L.cell_operator(cell);
        if (!op) {
            throw SpecError("boundary plaquette " + cell.str() + " touches an absent qubit");
        }
        if (!cells.emplace(cell, *op).second) {
            throw SpecError("boundary plaquette " + cell.str() + " listed twice");
        }
    }

    std::map<Coord, std::string> member_of;
    for (const auto &d : spec.defects) {
        if (d.cells.empty()) {
            throw SpecError("defect " + d.label + " has no member plaquettes");
        }
        for (const auto &c : d.cells) {
            if (!cells.count(c)) {
                throw SpecError("defect " + d.label + " member " + c.str() + " is not a plaquette of the lattice");
            }
            if (!member_of.emplace(c, d.label).second) {
                throw SpecError("plaquette " + c.str() + " belongs to two defects");
            }
        }
        // Contiguity over edge-adjacent members.
        std::set<Coord> members(d.cells.begin(), d.cells.end());
        std::set<Coord> seen{d.cells[0]};
        std::vector<Coord> stack{d.cells[0]};
        while (!stack.empty()) {
            Coord c = stack.back();
            stack.pop_back();
            for (Coord n : {Coord{c.row + 1, c.col}, Coord{c.row - 1, c.col}, Coord{c.row, c.col + 1},
                            Coord{c.row, c.col - 1}}) {
                if (members.count(n) && seen.insert(n).second) {
                    stack.push_back(n);
                }
            }
        }
        if (seen.size() != members.size()) {
            throw SpecError("defect " + d.label + " is not contiguous");
        }
    }

    for (const auto &[cell, op] : cells) {
        if (member_of.count(cell)) {
            continue;
        }
        Plaquette p{"A" + cell.str(), PlaquetteKind::Square, cell_color(cell), {cell}, op};
        L.stabilizers_.push_back(std::move(p));
    }
    for (const auto &d : spec.defects) {
        PauliOperator op(L.coords_.size());
        for (const auto &c : d.cells) {
            op *= cells.at(c);
        }
        if (!op.is_hermitian()) {
            throw SpecError("defect " + d.label + " product is not Hermitian");
        }
        L.stabilizers_.push_back({d.label, PlaquetteKind::Defect, Color::Mixed, d.cells, op});
    }
    for (size_t k = 0; k < L.stabilizers_.size(); k++) {
        if (!L.by_id_.emplace(L.stabilizers_[k].id, k).second) {
            throw SpecError("duplicate stabilizer id " + L.stabilizers_[k].id);
        }
        for (const auto &c : L.stabilizers_[k].cells) {
            L.cell_owner_[c] = k;
        }
    }

    for (size_t a = 0; a < L.stabilizers_.size(); a++) {
        for (size_t b = a + 1; b < L.stabilizers_.size(); b++) {
            if (!L.stabilizers_[a].op.commutes(L.stabilizers_[b].op)) {
                throw SpecError("stabilizers " + L.stabilizers_[a].id + " and " + L.stabilizers_[b].id +
                                " anticommute; malformed defect");
            }
        }
    }
    if (symplectic_rank(L.stabilizer_operators()) != L.stabilizers_.size()) {
        throw SpecError("stabilizers of " + spec.name + " are not independent");
    }
    for (const auto &d : spec.defects) {
        PauliOperator form = L.defect_boundary_form(d.label);
        if (!form.same_letters(L.stabilizer(d.label).op)) {
            throw SpecError("defect " + d.label + " boundary form disagrees with its enclosed product");
        }
    }

    // A site is a twist when its four surrounding cells fall into exactly three flip groups and a
    // defect holds two edge-adjacent cells among them.
    for (const auto &site : L.coords_) {
        Coord nw{site.row - 1, site.col - 1}, ne{site.row - 1, site.col};
        Coord sw{site.row, site.col - 1}, se{site.row, site.col};
        std::map<std::string, std::vector<Coord>> groups;
        for (Coord c : {nw, ne, sw, se}) {
            groups[L.cell_group(c)].push_back(c);
        }
        if (groups.size() != 3) {
            continue;
        }
        for (const auto &[gid, members] : groups) {
            if (members.size() != 2) {
                continue;
            }
            auto owner = L.cell_owner(members[0]);
            if (!owner || L.stabilizers_[*owner].kind != PlaquetteKind::Defect) {
                continue;
            }
            bool diagonal = members[0].row != members[1].row && members[0].col != members[1].col;
            if (!diagonal) {
                L.twists_.push_back({site, gid});
            }
        }
    }
    for (const auto &d : spec.defects) {
        if (L.twists_of(d.label).size() % 2 != 0) {
            throw SpecError("defect " + d.label + " has an odd number of twists");
        }
    }
    return L;
}

const Plaquette &Lattice::stabilizer(const std::string &id) const {
    auto k = find_stabilizer(id);
    if (!k) {
        throw LookupError("no stabilizer " + id + " in lattice " + spec_.name);
    }
    return stabilizers_[*k];
}

std::optional<size_t> Lattice::find_stabilizer(const std::string &id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::vector<PauliOperator> Lattice::stabilizer_operators() const {
    std::vector<PauliOperator> out;
    for (const auto &s : stabilizers_) {
        out.push_back(s.op);
    }
    return out;
}

std::optional<size_t> Lattice::cell_owner(Coord cell) const {
    auto it = cell_owner_.find(cell);
    if (it == cell_owner_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::string Lattice::cell_group(Coord cell) const {
    auto owner = cell_owner(cell);
    if (owner) {
        return stabilizers_[*owner].id;
    }
    return "v" + cell.str();
}

bool Lattice::is_twist(Coord site) const {
    return std::any_of(twists_.begin(), twists_.end(), [&](const Twist &t) { return t.site == site; });
}

std::vector<Twist> Lattice::twists_of(const std::string &defect) const {
    std::vector<Twist> out;
    for (const auto &t : twists_) {
        if (t.defect == defect) {
            out.push_back(t);
        }
    }
    return out;
}

Degeneracy Lattice::degeneracy() const {
    size_t rank = symplectic_rank(stabilizer_operators());
    size_t log2 = coords_.size() - rank;
    return {log2, log2 < 64 ? (uint64_t{1} << log2) : 0};
}

PauliOperator Lattice::defect_boundary_form(const std::string &label) const {
    const Plaquette &d = stabilizer(label);
    if (d.kind != PlaquetteKind::Defect) {
        throw DomainError(label + " is not a defect");
    }
    std::set<Coord> members(d.cells.begin(), d.cells.end());
    std::set<Coord> sites;
    for (const auto &c : d.cells) {
        for (const auto &corner : cell_corners(c)) {
            if (has_qubit(corner.site)) {
                sites.insert(corner.site);
            }
        }
    }
    PauliOperator out(coords_.size());
    for (const auto &s : sites) {
        bool x = members.count({s.row - 1, s.col - 1}) != members.count({s.row, s.col});
        bool z = members.count({s.row - 1, s.col}) != members.count({s.row, s.col - 1});
        out.set_letter(qubit_index(s), "IXZY"[x + 2 * z]);
    }
    return out;
}

PauliOperator Lattice::parse_operator(const std::string &text) const {
    // Rewrite zig-zag site numbers as 0-based indices, then defer to the Pauli parser.
    std::string rewritten;
    size_t k = 0;
    while (k < text.size()) {
        if (std::isdigit((unsigned char)text[k])) {
            size_t j = k;
            while (j < text.size() && std::isdigit((unsigned char)text[j])) {
                j++;
            }
            Coord c = zigzag_coord(std::stoi(text.substr(k, j - k)), spec_.cols);
            rewritten += std::to_string(qubit_index(c));
            k = j;
        } else {
            rewritten += text[k++];
        }
    }
    return PauliOperator::parse(rewritten, coords_.size());
}

std::string Lattice::format_operator(const PauliOperator &p) const {
    const char *prefix[4] = {"+", "+i", "-", "-i"};
    std::vector<std::pair<int, char>> terms;
    for (size_t q : p.support()) {
        terms.push_back({zigzag_index(coords_[q], spec_.cols), p.letter(q)});
    }
    std::sort(terms.begin(), terms.end());
    std::string out = prefix[p.letter_phase()];
    for (size_t k = 0; k < terms.size(); k++) {
        if (k) {
            out += ' ';
        }
        out += terms[k].second;
        out += std::to_string(terms[k].first);
    }
    if (terms.empty()) {
        out += 'I';
    }
    return out;
}

PauliOperator Lattice::site_operator(Coord site, char letter) const {
    return PauliOperator::single(coords_.size(), qubit_index(site), letter);
}

std::vector<Coord> Lattice::letter_flips(Coord site, char letter) {
    Coord up{site.row - 1, site.col}, left{site.row, site.col - 1};
    Coord diag{site.row - 1, site.col - 1}, here = site;
    switch (letter) {
        case 'X':
            return {up, left};
        case 'Z':
            return {diag, here};
        case 'Y':
            return {up, left, diag, here};
        case 'I':
            return {};
    }
    throw ParseError(std::string("not a Pauli letter: ") + letter);
}

std::vector<std::string> Lattice::flipped(const PauliOperator &p) const {
    std::vector<std::string> out;
    for (const auto &s : stabilizers_) {
        if (!s.op.commutes(p)) {
            out.push_back(s.id);
        }
    }
    return out;
}

}  // namespace twistlab
