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

#include "sqkd/postproc.hpp"

#include <cstddef>
#include <vector>

#include "sqkd/errors.hpp"

namespace sqkd::postproc {

namespace {

/// Row-major random parity matrix, syndrome_length rows over n columns.
std::vector<Bits> parity_matrix(std::uint64_t seed, int rows, std::size_t n) {
  RandomStream rng(seed);
  std::vector<Bits> h(static_cast<std::size_t>(rows));
  for (auto& row : h) {
    row.resize(n);
    for (auto& b : row) b = static_cast<std::uint8_t>(rng.bit());
  }
  return h;
}

Bits syndrome_of(const std::vector<Bits>& h, const Bits& x) {
  Bits s(h.size(), 0);
  for (std::size_t r = 0; r < h.size(); ++r) {
    std::uint8_t acc = 0;
    for (std::size_t c = 0; c < x.size(); ++c) acc ^= h[r][c] & x[c];
    s[r] = acc;
  }
  return s;
}

bool is_zero(const Bits& v) {
  for (auto b : v) {
    if (b) return false;
  }
  return true;
}

/// Column c of h as a bit vector.
Bits column_of(const std::vector<Bits>& h, std::size_t c) {
  Bits col(h.size(), 0);
  for (std::size_t r = 0; r < h.size(); ++r) col[r] = h[r][c];
  return col;
}

}  // namespace

ReconcileOutcome reconcile(const Bits& reference, const Bits& noisy,
                           const ReconcileConfig& cfg) {
  if (reference.size() != noisy.size()) {
    throw ArgumentError("reconcile: length mismatch");
  }
  if (cfg.syndrome_length < 0) {
    throw ArgumentError("reconcile: negative syndrome length");
  }
  const std::size_t n = reference.size();
  const auto h = parity_matrix(cfg.parity_seed, cfg.syndrome_length, n);
  const Bits diff = xor_bits(syndrome_of(h, reference), syndrome_of(h, noisy));

  Bits corrected = noisy;
  if (!is_zero(diff)) {
    bool matched = false;
    for (std::size_t i = 0; i < n && !matched; ++i) {
      if (column_of(h, i) == diff) {
        corrected[i] ^= 1;
        matched = true;
      }
    }
    for (std::size_t i = 0; i < n && !matched; ++i) {
      const Bits ci = column_of(h, i);
      for (std::size_t j = i + 1; j < n && !matched; ++j) {
        if (xor_bits(ci, column_of(h, j)) == diff) {
          corrected[i] ^= 1;
          corrected[j] ^= 1;
          matched = true;
        }
      }
    }
  }
  return {corrected == reference, std::move(corrected), cfg.syndrome_length};
}

Bits privacy_amplify(const Bits& key, const HashConfig& cfg) {
  const int n = static_cast<int>(key.size());
  const int m = cfg.output_bits;
  if (m < 0 || m > n) {
    throw ArgumentError("privacy_amplify: output length outside [0, n]");
  }
  if (m == 0) return {};

  RandomStream rng(cfg.hash_seed);
  Bits t(static_cast<std::size_t>(m + n - 1));
  for (auto& b : t) b = static_cast<std::uint8_t>(rng.bit());

  Bits out(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < m; ++i) {
    std::uint8_t acc = 0;
    for (int j = 0; j < n; ++j) {
      acc ^= t[static_cast<std::size_t>(i - j + n - 1)] & key[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = acc;
  }
  return out;
}

int default_security_margin(int n) {
  if (n < 0) throw ArgumentError("negative key length");
  return (n + 7) / 8;
}

}  // namespace sqkd::postproc
