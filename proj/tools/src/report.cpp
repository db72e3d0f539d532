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

#include "report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>

namespace xmodal::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string format_list(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += format_double(values[i]);
  }
  return s;
}

Report& Report::row() {
  rows_.emplace_back();
  return *this;
}

Report& Report::add(const std::string& key, std::string value) {
  if (rows_.empty()) row();
  rows_.back().emplace_back(key, std::move(value));
  return *this;
}

Report& Report::add(const std::string& key, const char* value) {
  return add(key, std::string(value));
}
Report& Report::add(const std::string& key, double value) { return add(key, format_double(value)); }
Report& Report::add(const std::string& key, std::int64_t value) {
  return add(key, std::to_string(value));
}
Report& Report::add(const std::string& key, std::uint64_t value) {
  return add(key, std::to_string(value));
}
Report& Report::add(const std::string& key, bool value) {
  return add(key, std::string(value ? "true" : "false"));
}

void Report::print(std::ostream& out, Format format) const {
  if (format == Format::kRecords) {
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) {
        out << (i ? " " : "") << r[i].first << '=' << r[i].second;
      }
      out << '\n';
    }
    return;
  }
  if (rows_.size() == 1) {
    std::size_t w = 0;
    for (const auto& [k, v] : rows_[0]) w = std::max(w, k.size());
    for (const auto& [k, v] : rows_[0]) {
      out << k << std::string(w - k.size() + 2, ' ') << v << '\n';
    }
    return;
  }
  // Union of keys in first-seen order; missing cells print as "-".
  std::vector<std::string> keys;
  for (const auto& r : rows_) {
    for (const auto& kv : r) {
      if (std::find(keys.begin(), keys.end(), kv.first) == keys.end()) keys.push_back(kv.first);
    }
  }
  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows_) {
    std::vector<std::string> line(keys.size(), "-");
    for (const auto& [k, v] : r) {
      line[std::find(keys.begin(), keys.end(), k) - keys.begin()] = v;
    }
    cells.push_back(std::move(line));
  }
  std::vector<std::size_t> width(keys.size());
  for (std::size_t c = 0; c < keys.size(); ++c) {
    width[c] = keys[c].size();
    for (const auto& line : cells) width[c] = std::max(width[c], line[c].size());
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      out << line[c];
      if (c + 1 < line.size()) out << std::string(width[c] - line[c].size() + 2, ' ');
    }
    out << '\n';
  };
  emit(keys);
  for (const auto& line : cells) emit(line);
}

}  // namespace xmodal::cli
