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
#ifndef TWISTLAB_GATES_H
#define TWISTLAB_GATES_H

#include <cstddef>
#include <string>
#include <string_view>

namespace twistlab {

enum class Gate { H, S, S_DAG, X, Y, Z, CX, CZ };

size_t gate_arity(Gate g);
const char *gate_name(Gate g);
Gate parse_gate(std::string_view name);

}  // namespace twistlab

#endif
