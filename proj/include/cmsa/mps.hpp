// Copyright 2026 The CMSA-BIP Authors
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

#ifndef CMSA_MPS_HPP_
#define CMSA_MPS_HPP_

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "cmsa/model.hpp"

namespace cmsa {

// Reads free-format MPS (fields separated by whitespace). Supported sections:
// NAME, OBJSENSE, ROWS, COLUMNS (with INTORG/INTEND markers), RHS, RANGES,
// BOUNDS, ENDATA. The first N row is the objective; further N rows are
// dropped. Ranged rows become a GE/LE pair (or one EQ row when the range is
// empty). Every column must be binary.
//
// Throws MpsFormatError (or UnsupportedVariable) with the offending line.
BipInstance parse_mps(std::istream& in);
BipInstance parse_mps(std::string_view text);
BipInstance read_mps_file(const std::filesystem::path& path);

// Emits free-format MPS that parse_mps reads back to an identical instance.
// Coefficients are written with round-trip precision.
void write_mps(const BipInstance& instance, std::ostream& out);
void write_mps_file(const BipInstance& instance,
                    const std::filesystem::path& path);

}  // namespace cmsa

#endif  // CMSA_MPS_HPP_
