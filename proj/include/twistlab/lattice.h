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
#ifndef TWISTLAB_LATTICE_H
#define TWISTLAB_LATTICE_H

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/pauli.h"

namespace twistlab {

/// 1-based (row, col) coordinate of a qubit or of a plaquette's top-left corner.
struct Coord {
    int row = 0;
    int col = 0;

    auto operator<=>(const Coord &) const = default;
    std::string str() const;
};

int zigzag_index(Coord c, int cols);
Coord zigzag_coord(int k, int cols);

/// Dark plaquettes host e charges, light plaquettes host m charges.
enum class Color { Dark, Light, Mixed };
enum class PlaquetteKind { Square, Defect };

const char *color_name(Color c);
Color cell_color(Coord cell);

struct DefectSpec {
    std::string label;
    std::vector<Coord> cells;
};

struct LatticeSpec {
    std::string name;
    std::string description;
    int rows = 0;
    int cols = 0;
    std::vector<Coord> present;
    std::vector<DefectSpec> defects;
    /// Plaquettes that reach outside the grid; kept with their in-grid sites only.
    std::vector<Coord> boundary;
    std::vector<Coord> dropped;
    /// Keys not interpreted by the lattice module (string definitions and annotations).
    nlohmann::json extras = nlohmann::json::object();

    static LatticeSpec full(int rows, int cols);
    static LatticeSpec from_json(const nlohmann::json &j);
    static LatticeSpec load(const std::string &path);
    /// Looks up a built-in spec under the data directory by name.
    static LatticeSpec builtin(const std::string &name);
    nlohmann::json to_json() const;
};

struct Plaquette {
    std::string id;
    PlaquetteKind kind;
    Color color;
    /// The square itself, or the merged members of a defect.
    std::vector<Coord> cells;
    PauliOperator op;
};

struct Twist {
    Coord site;
    std::string defect;
};

struct Degeneracy {
    size_t log2;
    /// 2^log2, or 0 when it does not fit in 64 bits.
    uint64_t value;
};

class Lattice {
   public:
    static Lattice build(const LatticeSpec &spec);

    const LatticeSpec &spec() const {
        return spec_;
    }
    const std::string &name() const {
        return spec_.name;
    }
    size_t num_qubits() const {
        return coords_.size();
    }

    bool has_qubit(Coord c) const;
    size_t qubit_index(Coord c) const;
    Coord qubit_coord(size_t index) const;

    const std::vector<Plaquette> &stabilizers() const {
        return stabilizers_;
    }
    const Plaquette &stabilizer(const std::string &id) const;
    std::optional<size_t> find_stabilizer(const std::string &id) const;
    std::vector<PauliOperator> stabilizer_operators() const;

    /// Stabilizer index owning a plaquette cell; empty for virtual cells.
    std::optional<size_t> cell_owner(Coord cell) const;
    /// Identifier of the flip group a cell belongs to: its stabilizer id, or "v(r,c)" for a virtual cell.
    std::string cell_group(Coord cell) const;

    const std::vector<Twist> &twists() const {
        return twists_;
    }
    bool is_twist(Coord site) const;
    std::vector<Twist> twists_of(const std::string &defect) const;

    Degeneracy degeneracy() const;

    /// Operator of one plaquette cell, truncated to present qubits. Empty if the cell touches an
    /// absent in-grid qubit or has no present qubits.
    std::optional<PauliOperator> cell_operator(Coord cell) const;
    /// The defect operator rebuilt from per-site parities of the member cells (Y where both flip).
    PauliOperator defect_boundary_form(const std::string &label) const;

    /// Parses sparse text whose site numbers are 1-based zig-zag indices, e.g. "-i Z14 X19".
    PauliOperator parse_operator(const std::string &text) const;
    /// Formats an operator with zig-zag site numbers.
    std::string format_operator(const PauliOperator &p) const;
    PauliOperator site_operator(Coord site, char letter) const;

    /// Plaquette cells toggled by a single letter at a site: X flips the cells one row up and one
    /// column left of the site, Z flips the cell at the site and the one diagonally up-left.
    static std::vector<Coord> letter_flips(Coord site, char letter);

    /// Ids of stabilizers anticommuting with an operator.
    std::vector<std::string> flipped(const PauliOperator &p) const;

   private:
    LatticeSpec spec_;
    std::vector<Coord> coords_;
    std::map<Coord, size_t> index_;
    std::vector<Plaquette> stabilizers_;
    std::map<std::string, size_t> by_id_;
    std::map<Coord, size_t> cell_owner_;
    std::vector<Twist> twists_;
};

std::string data_directory();

}  // namespace twistlab

#endif
