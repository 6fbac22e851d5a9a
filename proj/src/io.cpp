// Copyright 2026 The CBE Authors.
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

#include "cbe/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "cbe/errors.hpp"

namespace cbe::io {
namespace {

constexpr char kModelMagic[4] = {'C', 'B', 'E', '1'};
constexpr char kDatasetMagic[4] = {'C', 'B', 'D', '1'};
constexpr char kCodesMagic[4] = {'C', 'B', 'C', '1'};

class Writer {
 public:
  void magic(const char (&m)[4]) { out_.insert(out_.end(), m, m + 4); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v) { put(v, 2); }
  void u32(std::uint32_t v) { put(v, 4); }
  void u64(std::uint64_t v) { put(v, 8); }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  Bytes take() { return std::move(out_); }

 private:
  void put(std::uint64_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  Bytes out_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, const char* what) : bytes_(bytes), what_(what) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void magic(const char (&m)[4]) {
    need(4);
    for (int i = 0; i < 4; ++i) {
      if (bytes_[pos_ + i] != static_cast<std::uint8_t>(m[i])) {
        throw FormatError(std::string(what_) + ": bad magic, expected \"" + std::string(m, 4) + "\"", pos_ + i);
      }
    }
    pos_ += 4;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(get(1)); }
  std::uint16_t u16() { return static_cast<std::uint16_t>(get(2)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get(4)); }
  std::uint64_t u64() { return get(8); }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }
  std::span<const std::uint8_t> raw(std::size_t n) {
    need(n);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  void expect_payload(std::uint64_t n) const {
    if (remaining() != n) {
      throw FormatError(std::string(what_) + ": header declares " + std::to_string(n) +
                            " payload bytes but " + std::to_string(remaining()) + " follow",
                        pos_);
    }
  }
  void expect_end() const {
    if (remaining() != 0) throw FormatError(std::string(what_) + ": trailing bytes after payload", pos_);
  }

  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw FormatError(std::string(what_) + ": " + msg, at);
  }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw FormatError(std::string(what_) + ": truncated file", bytes_.size());
  }
  std::uint64_t get(int n) {
    need(static_cast<std::size_t>(n));
    std::uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  const char* what_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes serialize_model(const CirculantParams& params) {
  params.validate();
  Writer w;
  w.magic(kModelMagic);
  w.u16(kModelVersion);
  w.u32(static_cast<std::uint32_t>(params.d));
  w.u32(static_cast<std::uint32_t>(params.k));
  for (std::size_t byte = 0; byte < (params.d + 7) / 8; ++byte) {
    std::uint8_t v = 0;
    for (std::size_t bit = 0; bit < 8 && byte * 8 + bit < params.d; ++bit) {
      if (params.signs[byte * 8 + bit] > 0) v |= static_cast<std::uint8_t>(1u << bit);
    }
    w.u8(v);
  }
  for (double v : params.r) w.f64(v);
  w.u8(static_cast<std::uint8_t>(params.kind));
  w.u64(params.seed);
  return w.take();
}

CirculantParams deserialize_model(std::span<const std::uint8_t> bytes) {
  Reader rd(bytes, "model file");
  rd.magic(kModelMagic);
  const std::size_t version_at = rd.offset();
  if (const auto version = rd.u16(); version != kModelVersion) {
    rd.fail("unsupported version " + std::to_string(version), version_at);
  }
  CirculantParams p;
  const std::size_t d_at = rd.offset();
  p.d = rd.u32();
  const std::size_t k_at = rd.offset();
  p.k = rd.u32();
  if (p.d == 0) rd.fail("d must be >= 1", d_at);
  if (p.k < 1 || p.k > p.d) rd.fail("k=" + std::to_string(p.k) + " outside [1, d]", k_at);
  const std::uint64_t sign_bytes = (p.d + 7) / 8;
  rd.expect_payload(sign_bytes + 8 * static_cast<std::uint64_t>(p.d) + 1 + 8);

  const auto packed = rd.raw(sign_bytes);
  p.signs.resize(p.d);
  for (std::size_t i = 0; i < p.d; ++i) p.signs[i] = (packed[i / 8] >> (i % 8)) & 1u ? 1 : -1;
  p.r.resize(p.d);
  for (std::size_t i = 0; i < p.d; ++i) {
    const std::size_t at = rd.offset();
    p.r[i] = rd.f64();
    if (!std::isfinite(p.r[i])) rd.fail("non-finite circulant entry", at);
  }
  const std::size_t kind_at = rd.offset();
  const std::uint8_t kind = rd.u8();
  if (kind > 2) rd.fail("unknown model kind " + std::to_string(kind), kind_at);
  p.kind = static_cast<ModelKind>(kind);
  p.seed = rd.u64();
  rd.expect_end();
  return p;
}

Bytes serialize_dataset(const DataMatrix& x) {
  Writer w;
  w.magic(kDatasetMagic);
  w.u64(x.rows());
  w.u32(static_cast<std::uint32_t>(x.cols()));
  for (double v : x.values()) w.f32(static_cast<float>(v));
  return w.take();
}

DataMatrix deserialize_dataset(std::span<const std::uint8_t> bytes, bool normalize) {
  Reader rd(bytes, "dataset file");
  rd.magic(kDatasetMagic);
  const std::uint64_t n = rd.u64();
  const std::size_t d_at = rd.offset();
  const std::uint32_t d = rd.u32();
  if (d == 0) rd.fail("d must be >= 1", d_at);
  if (n > rd.remaining() / 4 / d) rd.expect_payload(4 * n * d);  // reports the size mismatch
  rd.expect_payload(4 * n * d);

  std::vector<double> values(n * d);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t at = rd.offset();
    values[i] = rd.f32();
    if (!std::isfinite(values[i])) rd.fail("non-finite value", at);
  }
  if (!normalize) return DataMatrix(n, d, std::move(values));
  try {
    return DataMatrix::normalized(n, d, std::move(values));
  } catch (const ParameterError& e) {
    throw FormatError(std::string("dataset file: ") + e.what(), kDatasetHeaderBytes);
  }
}

Bytes serialize_codes(const BinaryCodeMatrix& codes) {
  Writer w;
  w.magic(kCodesMagic);
  w.u64(codes.rows());
  w.u32(static_cast<std::uint32_t>(codes.bits()));
  for (std::uint64_t word : codes.words()) w.u64(word);
  return w.take();
}

BinaryCodeMatrix deserialize_codes(std::span<const std::uint8_t> bytes) {
  Reader rd(bytes, "codes file");
  rd.magic(kCodesMagic);
  const std::uint64_t n = rd.u64();
  const std::size_t k_at = rd.offset();
  const std::uint32_t k = rd.u32();
  if (k == 0) rd.fail("k must be >= 1", k_at);
  const std::uint64_t words = words_for_bits(k);
  if (n > rd.remaining() / 8 / words) rd.expect_payload(8 * n * words);
  rd.expect_payload(8 * n * words);
  BinaryCodeMatrix codes(n, k);
  for (auto& word : codes.words()) word = rd.u64();
  if (const std::size_t rem = k % 64; rem != 0) {
    const std::uint64_t pad_mask = ~((std::uint64_t{1} << rem) - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (codes.row(i).back() & pad_mask) {
        rd.fail("padding bits set in row " + std::to_string(i), kCodesHeaderBytes + 8 * ((i + 1) * words - 1));
      }
    }
  }
  return codes;
}

PairConstraints parse_pairs(const std::string& text) {
  PairConstraints pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    const std::size_t line_start = offset;
    offset += line.size() + 1;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    long long i = -1, j = -1;
    std::string extra;
    if (!(ls >> i >> j) || (ls >> extra) || i < 0 || j < 0 || (tag != "S" && tag != "D")) {
      throw FormatError("pairs file: expected \"S i j\" or \"D i j\", got \"" + line + "\"", line_start);
    }
    auto& list = tag == "S" ? pairs.similar : pairs.dissimilar;
    list.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return pairs;
}

Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("error reading " + path.string());
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("error writing " + path.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file(path, {reinterpret_cast<const std::uint8_t*>(text.data()), text.size()});
}

PairConstraints load_pairs(const std::filesystem::path& path) {
  const Bytes bytes = read_file(path);
  return parse_pairs(std::string(bytes.begin(), bytes.end()));
}

}  // namespace cbe::io
