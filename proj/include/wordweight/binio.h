// Copyright 2026 The wordweight Authors.
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

// Little-endian primitives for the binary model files.

#ifndef WORDWEIGHT_BINIO_H_
#define WORDWEIGHT_BINIO_H_

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string_view>

#include "wordweight/common.h"

namespace wordweight::binio {

inline void WriteU32(std::ostream& out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff),
                         static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff),
                         static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

inline std::uint32_t ReadU32(std::istream& in) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw Error("unexpected end of binary file");
  }
  return static_cast<std::uint32_t>(bytes[0]) |
         (static_cast<std::uint32_t>(bytes[1]) << 8) |
         (static_cast<std::uint32_t>(bytes[2]) << 16) |
         (static_cast<std::uint32_t>(bytes[3]) << 24);
}

inline void WriteI32(std::ostream& out, std::int32_t v) {
  WriteU32(out, static_cast<std::uint32_t>(v));
}

inline std::int32_t ReadI32(std::istream& in) {
  return static_cast<std::int32_t>(ReadU32(in));
}

// Values are narrowed to IEEE binary32.
inline void WriteF32(std::ostream& out, std::span<const double> values) {
  for (const double v : values) {
    WriteU32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
}

inline void ReadF32(std::istream& in, std::span<double> values) {
  for (double& v : values) {
    v = static_cast<double>(std::bit_cast<float>(ReadU32(in)));
  }
}

inline void WriteMagic(std::ostream& out, std::string_view magic) {
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void ExpectMagic(std::istream& in, std::string_view magic) {
  char buf[8] = {};
  if (magic.size() > sizeof(buf) ||
      !in.read(buf, static_cast<std::streamsize>(magic.size())) ||
      std::string_view(buf, magic.size()) != magic) {
    throw Error("bad file magic, expected \"" + std::string(magic) + "\"");
  }
}

}  // namespace wordweight::binio

#endif  // WORDWEIGHT_BINIO_H_
