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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cbe/codes.hpp"
#include "cbe/data.hpp"
#include "cbe/embedding.hpp"
#include "cbe/optimizer.hpp"

namespace cbe::io {

// All formats are little-endian regardless of host byte order.
//
// Model ("CBE1"):
//   magic[4] version:u16 d:u32 k:u32 signs[ceil(d/8)] r[d]:f64 kind:u8 seed:u64
//   sign bit i lives in byte i/8 at position i%8; set means +1.
// Dataset ("CBD1"):
//   magic[4] n:u64 d:u32 rows[n*d]:f32 (row-major)
// Codes ("CBC1"):
//   magic[4] n:u64 k:u32 rows[n * ceil(k/64)]:u64
inline constexpr std::uint16_t kModelVersion = 1;
inline constexpr std::size_t kDatasetHeaderBytes = 16;
inline constexpr std::size_t kCodesHeaderBytes = 16;

using Bytes = std::vector<std::uint8_t>;

Bytes serialize_model(const CirculantParams& params);
CirculantParams deserialize_model(std::span<const std::uint8_t> bytes);

// Values are stored as f32. Parsing normalizes rows unless `normalize` is false.
Bytes serialize_dataset(const DataMatrix& x);
DataMatrix deserialize_dataset(std::span<const std::uint8_t> bytes, bool normalize = true);

Bytes serialize_codes(const BinaryCodeMatrix& codes);
BinaryCodeMatrix deserialize_codes(std::span<const std::uint8_t> bytes);

// One pair per line: "S i j" (similar) or "D i j" (dissimilar). Blank lines
// and lines starting with '#' are skipped.
PairConstraints parse_pairs(const std::string& text);

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path& path, const std::string& text);

inline void save_model(const std::filesystem::path& p, const CirculantParams& m) { write_file(p, serialize_model(m)); }
inline CirculantParams load_model(const std::filesystem::path& p) { return deserialize_model(read_file(p)); }
inline void save_dataset(const std::filesystem::path& p, const DataMatrix& x) { write_file(p, serialize_dataset(x)); }
inline DataMatrix load_dataset(const std::filesystem::path& p, bool normalize = true) {
  return deserialize_dataset(read_file(p), normalize);
}
inline void save_codes(const std::filesystem::path& p, const BinaryCodeMatrix& c) { write_file(p, serialize_codes(c)); }
inline BinaryCodeMatrix load_codes(const std::filesystem::path& p) { return deserialize_codes(read_file(p)); }
PairConstraints load_pairs(const std::filesystem::path& path);

}  // namespace cbe::io
