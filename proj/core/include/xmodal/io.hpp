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
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "xmodal/image.hpp"
#include "xmodal/matrix.hpp"
#include "xmodal/metrics.hpp"

namespace xmodal {

/// Malformed input file. The message names the offending field or offset.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ElementType : std::uint32_t { kFloat32 = 1, kFloat64 = 2 };

/// Binary embedding file, little-endian throughout:
///
///   offset  size  field
///        0     4  magic "XEMB"
///        4     4  u32 version (1)
///        8     8  u64 rows
///       16     8  u64 dim
///       24     4  u32 element type (1 = f32, 2 = f64)
///       28     4  u32 reserved (0)
///       32     -  rows*dim elements, row-major
///
/// Readers reject short or over-long payloads.
inline constexpr std::size_t kEmbeddingHeaderSize = 32;

void write_embeddings(std::ostream& out, const Matrix& m, ElementType type = ElementType::kFloat64);
Matrix read_embeddings(std::istream& in);
void write_embeddings(const std::filesystem::path& path, const Matrix& m,
                      ElementType type = ElementType::kFloat64);
Matrix read_embeddings(const std::filesystem::path& path);

/// JSON array of {"key": str, "id": int, "cam": int, "modality": "vis"|"ir"}.
std::string manifest_to_json(const RetrievalManifest& manifest);
RetrievalManifest manifest_from_json(const std::string& text);
void write_manifest(const std::filesystem::path& path, const RetrievalManifest& manifest);
RetrievalManifest read_manifest(const std::filesystem::path& path);

/// 8-bit PNG. Grey, palette and alpha inputs are converted to RGB; values
/// map to [0,1] as byte/255. Writing rounds half up.
Image read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const Image& img);

std::uint8_t to_byte(double v);

}  // namespace xmodal
