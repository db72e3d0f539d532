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
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace xmodal::cli {

enum class Format { kTable, kRecords };

/// Shortest round-trip decimal; always carries a '.' or an exponent so that
/// integral values read as reals ("1.0").
std::string format_double(double v);
std::string format_list(std::span<const double> values);

/// Rows of key/value fields. Records format writes one line per row as
/// space-separated key=value pairs. Table format writes a single row as a
/// two-column key/value listing and several rows as an aligned table.
class Report {
 public:
  Report& row();
  Report& add(const std::string& key, std::string value);
  Report& add(const std::string& key, const char* value);
  Report& add(const std::string& key, double value);
  Report& add(const std::string& key, std::int64_t value);
  Report& add(const std::string& key, std::uint64_t value);
  Report& add(const std::string& key, bool value);

  void print(std::ostream& out, Format format) const;

 private:
  std::vector<std::vector<std::pair<std::string, std::string>>> rows_;
};

}  // namespace xmodal::cli
