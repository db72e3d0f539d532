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

#include "xmodal/types.hpp"

#include <stdexcept>

namespace xmodal {

Modality parse_modality(std::string_view text) {
  if (text == "vis") return Modality::kVisible;
  if (text == "ir") return Modality::kInfrared;
  throw std::invalid_argument("unknown modality '" + std::string(text) +
                              "' (expected \"vis\" or \"ir\")");
}

}  // namespace xmodal
