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
#ifndef TWISTLAB_ERRORS_H
#define TWISTLAB_ERRORS_H

#include <stdexcept>
#include <string>

namespace twistlab {

#define TWISTLAB_ERROR(name, base)                                          \
    struct name : public base {                                             \
        explicit name(const std::string &what) : base(what) {                \
        }                                                                   \
    }

TWISTLAB_ERROR(DimensionError, std::invalid_argument);
TWISTLAB_ERROR(IndexError, std::out_of_range);
TWISTLAB_ERROR(DomainError, std::domain_error);
TWISTLAB_ERROR(ContractViolation, std::logic_error);
TWISTLAB_ERROR(CapacityError, std::length_error);
TWISTLAB_ERROR(ParseError, std::invalid_argument);
TWISTLAB_ERROR(SpecError, std::invalid_argument);
TWISTLAB_ERROR(PathError, std::invalid_argument);
TWISTLAB_ERROR(RoutingError, std::runtime_error);
TWISTLAB_ERROR(CompileError, std::runtime_error);
TWISTLAB_ERROR(PlanError, std::runtime_error);
TWISTLAB_ERROR(LookupError, std::out_of_range);

#undef TWISTLAB_ERROR

}  // namespace twistlab

#endif
