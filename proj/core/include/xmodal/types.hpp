// Copyright 2026 The xmodal Authors. All Rights Reserved.
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

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace xmodal {

/// All randomness in the library flows through an explicit engine handle.
using Rng = std::mt19937_64;

enum class Modality : std::uint8_t { kVisible, kInfrared };

inline std::string_view to_string(Modality m) {
  return m == Modality::kVisible ? "vis" : "ir";
}

inline Modality opposite(Modality m) {
  return m == Modality::kVisible ? Modality::kInfrared : Modality::kVisible;
}

/// Parses "vis" / "ir"; throws std::invalid_argument otherwise.
Modality parse_modality(std::string_view text);

}  // namespace xmodal
