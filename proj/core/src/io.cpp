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

#include "xmodal/io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace xmodal {

namespace {

constexpr std::array<char, 4> kMagic = {'X', 'E', 'M', 'B'};
constexpr std::uint32_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> bytes{};
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(u & 0xFF);
    u = static_cast<U>(u >> 8);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

template <typename T>
T get_le(const unsigned char* p) {
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = static_cast<U>((u << 8) | p[i]);
  return static_cast<T>(u);
}

}  // namespace

void write_embeddings(std::ostream& out, const Matrix& m, ElementType type) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, m.rows());
  put_le<std::uint64_t>(out, m.cols());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(type));
  put_le<std::uint32_t>(out, 0);
  for (double v : m.data()) {
    if (type == ElementType::kFloat32) {
      put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    } else {
      put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    }
  }
  if (!out) throw std::runtime_error("failed writing embedding payload");
}

Matrix read_embeddings(std::istream& in) {
  std::array<unsigned char, kEmbeddingHeaderSize> h{};
  in.read(reinterpret_cast<char*>(h.data()), h.size());
  if (in.gcount() != static_cast<std::streamsize>(h.size())) {
    throw FormatError("embedding file: header truncated at offset " +
                      std::to_string(in.gcount()) + " (need 32 bytes)");
  }
  if (std::memcmp(h.data(), kMagic.data(), kMagic.size()) != 0) {
    throw FormatError("embedding file: bad magic at offset 0 (expected \"XEMB\")");
  }
  if (const auto v = get_le<std::uint32_t>(h.data() + 4); v != kVersion) {
    throw FormatError("embedding file: unsupported version " + std::to_string(v) +
                      " at offset 4");
  }
  const auto rows = get_le<std::uint64_t>(h.data() + 8);
  const auto cols = get_le<std::uint64_t>(h.data() + 16);
  const auto tag = get_le<std::uint32_t>(h.data() + 24);
  if (tag != 1 && tag != 2) {
    throw FormatError("embedding file: unknown element type " + std::to_string(tag) +
                      " at offset 24");
  }
  const std::size_t elem = tag == 1 ? 4 : 8;
  if (cols != 0 && rows > (std::uint64_t{1} << 40) / cols) {
    throw FormatError("embedding file: rows*dim too large (offsets 8, 16)");
  }
  const std::size_t count = rows * cols;

  std::vector<unsigned char> payload(count * elem);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
    throw FormatError("embedding file: payload truncated at offset " +
                      std::to_string(kEmbeddingHeaderSize + in.gcount()) + " (expected " +
                      std::to_string(kEmbeddingHeaderSize + payload.size()) + " bytes)");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError("embedding file: trailing bytes after offset " +
                      std::to_string(kEmbeddingHeaderSize + payload.size()));
  }
  std::vector<double> data(count);
  for (std::size_t i = 0; i < count; ++i) {
    const unsigned char* p = payload.data() + i * elem;
    data[i] = tag == 1 ? static_cast<double>(std::bit_cast<float>(get_le<std::uint32_t>(p)))
                       : std::bit_cast<double>(get_le<std::uint64_t>(p));
  }
  return Matrix(rows, cols, std::move(data));
}

void write_embeddings(const std::filesystem::path& path, const Matrix& m, ElementType type) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_embeddings(out, m, type);
}

Matrix read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_embeddings(in);
}

std::string manifest_to_json(const RetrievalManifest& manifest) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : manifest.records) {
    arr.push_back({{"key", r.key},
                   {"id", r.person_id},
                   {"cam", r.camera_id},
                   {"modality", std::string(to_string(r.modality))}});
  }
  return arr.dump(1) + "\n";
}

RetrievalManifest manifest_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
  if (!doc.is_array()) throw FormatError("manifest: top level must be an array");
  RetrievalManifest m;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    const std::string where = "manifest record " + std::to_string(i);
    if (!rec.is_object()) throw FormatError(where + ": not an object");
    auto field = [&](const char* name) -> const nlohmann::json& {
      if (!rec.contains(name)) throw FormatError(where + ": missing field '" + name + "'");
      return rec.at(name);
    };
    const auto& key = field("key");
    const auto& id = field("id");
    const auto& cam = field("cam");
    const auto& mod = field("modality");
    if (!key.is_string()) throw FormatError(where + ": field 'key' must be a string");
    if (!id.is_number_integer()) throw FormatError(where + ": field 'id' must be an integer");
    if (!cam.is_number_integer()) throw FormatError(where + ": field 'cam' must be an integer");
    if (!mod.is_string()) throw FormatError(where + ": field 'modality' must be a string");
    ManifestRecord r;
    r.key = key.get<std::string>();
    r.person_id = id.get<std::int64_t>();
    r.camera_id = cam.get<std::int64_t>();
    try {
      r.modality = parse_modality(mod.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(where + ": field 'modality': " + e.what());
    }
    m.records.push_back(std::move(r));
  }
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
  return m;
}

void write_manifest(const std::filesystem::path& path, const RetrievalManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << manifest_to_json(manifest);
}

RetrievalManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

Image read_png(const std::filesystem::path& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw std::runtime_error("cannot open " + path.string());
  png_byte sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0) {
    throw FormatError(path.string() + ": not a PNG file");
  }
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("libpng initialisation failed");
  }
  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0, height = 0;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(path.string() + ": corrupt PNG data");
  }
  png_init_io(png, fp.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);
  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  const int color = png_get_color_type(png, info);
  if (png_get_bit_depth(png, info) == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
  }
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA || png_get_valid(png, info, PNG_INFO_tRNS)) {
    png_set_strip_alpha(png);
  }
  png_read_update_info(png, info);
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * stride;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  Image img(height, width);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (Channel c : kAllChannels) {
        img.at(c, y, x) = pixels[y * stride + 3 * x + static_cast<std::size_t>(c)] / 255.0;
      }
    }
  }
  return img;
}

void write_png(const std::filesystem::path& path, const Image& img) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw std::runtime_error("cannot open " + path.string() + " for writing");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("libpng initialisation failed");
  }
  const std::size_t width = img.width();
  const std::size_t height = img.height();
  std::vector<png_byte> pixels(width * height * 3);
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      for (Channel c : kAllChannels) {
        pixels[(y * width + x) * 3 + static_cast<std::size_t>(c)] = to_byte(img.at(c, y, x));
      }
    }
  }
  std::vector<png_bytep> rows(height);
  for (std::size_t y = 0; y < height; ++y) rows[y] = pixels.data() + y * width * 3;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("failed writing " + path.string());
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
               PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace xmodal
