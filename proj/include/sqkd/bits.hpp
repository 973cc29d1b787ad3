// Copyright 2026 The sqkd-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sqkd/errors.hpp"
#include "sqkd/rng.hpp"

namespace sqkd {

/// Bit string; every element is 0 or 1.
using Bits = std::vector<std::uint8_t>;

inline std::string to_string(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

inline Bits xor_bits(const Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw ArgumentError("xor_bits: length mismatch");
  Bits out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] ^ b[i];
  return out;
}

inline Bits random_bits(RandomStream& rng, std::size_t count) {
  Bits out(count);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.bit());
  return out;
}

}  // namespace sqkd
