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
#ifndef TWISTLAB_STRINGS_H
#define TWISTLAB_STRINGS_H

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twistlab/lattice.h"
#include "twistlab/pauli.h"

namespace twistlab {

/// Right-oblique crossings carry X, left-oblique crossings carry Z.
enum class Orientation { Right, Left };

struct PathStep {
    Coord site;
    Orientation orient;

    bool operator==(const PathStep &) const = default;
};

struct StringPath {
    std::vector<PathStep> steps;
    bool closed = false;

    /// Builds a path from sites and an orientation string over {R, L}.
    static StringPath make(const std::vector<Coord> &sites, const std::string &orient, bool closed = false);
    /// Reads {"sites": [[r, c], ...], "orient": "RL...", "closed": false}.
    static StringPath from_json(const nlohmann::json &j);
    nlohmann::json to_json() const;
    std::string orient_string() const;
};

struct StringOperator {
    StringPath path;
    PauliOperator op;
    /// Ids of the stabilizers whose sign the operator flips.
    std::vector<std::string> flipped;
};

/// The two cells joined by one crossing of a site.
std::pair<Coord, Coord> step_cells(const PathStep &step);

/// Assigns letters along a path and derives its flip set from the crossing rule.
StringOperator from_path(const StringPath &path, const Lattice &lattice);

/// Orders the letters of an operator into a valid path, if one exists.
std::optional<StringPath> chain_path(const PauliOperator &op, const Lattice &lattice, bool closed);

/// The shortest closed string around a twist; its content equals the owning defect stabilizer.
StringOperator charge_string(Coord twist, const Lattice &lattice);

struct MajoranaOperator {
    std::string label;
    PauliOperator op;
    /// The two stabilizers flipped by the open string, shared by every operator of one encoding.
    std::vector<std::string> anchor;
    StringPath path;
};

/// Builds a Majorana operator from a path that winds an odd number of twists.
MajoranaOperator majorana(const std::string &label, const StringPath &path, const Lattice &lattice, int sign = +1);

/// An ordered list of Majorana operators c_1 .. c_m sharing one anchor.
class MajoranaEncoding {
   public:
    MajoranaEncoding() = default;
    MajoranaEncoding(std::vector<MajoranaOperator> ops);

    /// Reads the "majoranas" entry of a lattice config and checks paths against listed operators.
    static MajoranaEncoding from_lattice(const Lattice &lattice);

    size_t size() const {
        return ops_.size();
    }
    /// 1-based access, c_i.
    const MajoranaOperator &c(size_t i) const;
    const std::vector<MajoranaOperator> &operators() const {
        return ops_;
    }
    /// -i c_i c_j.
    PauliOperator correlator(size_t i, size_t j) const;
    /// Reorders the encoding; order lists old 1-based labels in their new positions.
    MajoranaEncoding relabeled(const std::vector<size_t> &order) const;

   private:
    std::vector<MajoranaOperator> ops_;
};

/// Routes an excitation from a plaquette around the listed twists (crossing each once) and then,
/// if given, on to a final plaquette of matching colour.
StringPath transmute_path(
    Coord start, const std::vector<Coord> &twists, const Lattice &lattice, std::optional<Coord> end = std::nullopt);

}  // namespace twistlab

#endif
