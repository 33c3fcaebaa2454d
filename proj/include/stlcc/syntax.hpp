// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include "stlcc/formula.hpp"

namespace stlcc {

// Parses the ASCII formula grammar:
//
//   formula  := or
//   or       := and { "or" and }
//   and      := unary { "and" unary }
//   unary    := "not" unary | temporal | atom
//   temporal := ("F" | "G") "[" int "," int "]" "(" formula ")"
//             | "(" formula ")" [ "U" "[" int "," int "]" "(" formula ")" ]
//   atom     := "x" int (">=" | "<=") real | "true"
//
// Throws ParseError carrying the 1-based line and column of the offending
// token.
Formula parse_formula(std::string_view text);

// Canonical text form. Thresholds use the shortest representation that reads
// back to the same double, so parse_formula(to_string(f)) == f.
std::string to_string(const Formula& phi);

// Shortest round-trip decimal form of a double.
std::string format_real(double value);

}  // namespace stlcc
