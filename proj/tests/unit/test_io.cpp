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

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "xmodal/io.hpp"

using namespace xmodal;
namespace fs = std::filesystem;

namespace {

fs::path temp_path(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "xmodal_io_test";
  fs::create_directories(dir);
  return dir / name;
}

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c) {
  std::normal_distribution<double> n;
  Matrix m(r, c);
  for (double& v : m.data()) v = n(rng);
  return m;
}

std::string header(std::uint64_t rows, std::uint64_t dim, std::uint32_t type) {
  std::string h(32, '\0');
  std::memcpy(h.data(), "XEMB", 4);
  const std::uint32_t version = 1;
  std::memcpy(h.data() + 4, &version, 4);  // test host is little-endian
  std::memcpy(h.data() + 8, &rows, 8);
  std::memcpy(h.data() + 16, &dim, 8);
  std::memcpy(h.data() + 24, &type, 4);
  return h;
}

}  // namespace

TEST(Embeddings, Float64RoundTripIsLossless) {
  Rng rng(1);
  const Matrix m = random_matrix(rng, 7, 5);
  std::stringstream ss;
  write_embeddings(ss, m);
  EXPECT_EQ(ss.str().size(), 32u + 7 * 5 * 8);
  EXPECT_EQ(read_embeddings(ss), m);
}

TEST(Embeddings, Float32RoundTripRoundsOnce) {
  Rng rng(2);
  const Matrix m = random_matrix(rng, 3, 4);
  std::stringstream ss;
  write_embeddings(ss, m, ElementType::kFloat32);
  EXPECT_EQ(ss.str().size(), 32u + 3 * 4 * 4);
  const Matrix back = read_embeddings(ss);
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    EXPECT_EQ(back.data()[i], static_cast<double>(static_cast<float>(m.data()[i])));
  }
}

TEST(Embeddings, HeaderLayoutIsExact) {
  Matrix m(2, 3);
  m(1, 2) = 1.5;
  std::stringstream ss;
  write_embeddings(ss, m);
  const std::string bytes = ss.str();
  EXPECT_EQ(bytes.substr(0, 32), header(2, 3, 2));
  double last = 0.0;
  std::memcpy(&last, bytes.data() + 32 + 5 * 8, 8);
  EXPECT_EQ(last, 1.5);
}

TEST(Embeddings, EmptyMatrixRoundTrips) {
  std::stringstream ss;
  write_embeddings(ss, Matrix(0, 4));
  const Matrix back = read_embeddings(ss);
  EXPECT_EQ(back.rows(), 0u);
  EXPECT_EQ(back.cols(), 4u);
}

TEST(Embeddings, FileRoundTrip) {
  Rng rng(3);
  const Matrix m = random_matrix(rng, 4, 4);
  const auto p = temp_path("emb.bin");
  write_embeddings(p, m);
  EXPECT_EQ(read_embeddings(p), m);
}

TEST(Embeddings, RejectsMalformedInput) {
  auto expect_error = [](const std::string& bytes, const std::string& fragment) {
    std::stringstream ss(bytes);
    try {
      read_embeddings(ss);
      ADD_FAILURE() << "no error for " << fragment;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("XEM", "header");
  std::string bad_magic = header(1, 1, 2) + std::string(8, '\0');
  bad_magic[0] = 'Y';
  expect_error(bad_magic, "magic");
  std::string bad_version = header(1, 1, 2) + std::string(8, '\0');
  bad_version[4] = 9;
  expect_error(bad_version, "version");
  expect_error(header(1, 1, 7) + std::string(8, '\0'), "element type");
  expect_error(header(2, 2, 2) + std::string(31, '\0'), "payload");
  expect_error(header(1, 1, 2) + std::string(9, '\0'), "trailing");
}

TEST(Embeddings, MissingFileIsAnError) {
  EXPECT_THROW(read_embeddings(fs::path("/nonexistent/emb.bin")), std::runtime_error);
}

TEST(Manifest, RoundTripIsFieldIdentical) {
  RetrievalManifest m{{{"a/b.png", 3, 1, Modality::kVisible},
                       {"c", 0, 0, Modality::kInfrared},
                       {"\"quoted\" key", 12345678901, 7, Modality::kVisible}}};
  EXPECT_EQ(manifest_from_json(manifest_to_json(m)), m);
  const auto p = temp_path("m.json");
  write_manifest(p, m);
  EXPECT_EQ(read_manifest(p), m);
}

TEST(Manifest, ErrorsNameRecordAndField) {
  auto expect_error = [](const std::string& text, const std::string& fragment) {
    try {
      manifest_from_json(text);
      ADD_FAILURE() << "no error for " << text;
    } catch (const FormatError& e) {
      EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
  };
  expect_error("{", "manifest");
  expect_error("{}", "array");
  expect_error(R"([{"key":"a","id":1,"cam":0}])", "record 0: missing field 'modality'");
  expect_error(R"([{"key":"a","id":1,"cam":0,"modality":"vis"},
                   {"key":"b","id":"x","cam":0,"modality":"vis"}])",
               "record 1: field 'id'");
  expect_error(R"([{"key":"a","id":1,"cam":0,"modality":"rgb"}])", "record 0: field 'modality'");
  expect_error(R"([{"key":"a","id":-1,"cam":0,"modality":"ir"}])", "record 0: field 'id' is negative");
  expect_error(R"([{"key":"a","id":1,"cam":0,"modality":"ir"},
                   {"key":"a","id":2,"cam":0,"modality":"ir"}])",
               "record 1: duplicate key");
}

TEST(Png, RoundTripAtEightBits) {
  Rng rng(4);
  Image img(5, 7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (double& v : img.values()) v = byte(rng) / 255.0;
  const auto p = temp_path("img.png");
  write_png(p, img);
  const Image back = read_png(p);
  ASSERT_EQ(back.height(), 5u);
  ASSERT_EQ(back.width(), 7u);
  for (std::size_t i = 0; i < img.values().size(); ++i) {
    EXPECT_EQ(back.values()[i], img.values()[i]);
  }
}

TEST(Png, ToByteRoundsHalfUp) {
  EXPECT_EQ(to_byte(0.0), 0);
  EXPECT_EQ(to_byte(1.0), 255);
  EXPECT_EQ(to_byte(0.5), 128);  // 127.5 rounds up
  EXPECT_EQ(to_byte(0.5 / 255.0), 1);
  EXPECT_EQ(to_byte(-0.2), 0);
  EXPECT_EQ(to_byte(1.7), 255);
}

TEST(Png, RejectsNonPng) {
  const auto p = temp_path("not.png");
  std::ofstream(p) << "hello";
  EXPECT_THROW(read_png(p), FormatError);
  EXPECT_THROW(read_png(temp_path("missing.png")), std::runtime_error);
}
