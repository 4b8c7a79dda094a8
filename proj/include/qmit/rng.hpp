// Copyright 2026 The qmit authors
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

#ifndef QMIT_RNG_HPP
#define QMIT_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>

namespace qmit {

// Philox4x32-10 counter-based generator (Random123 constants). A pure
// function of (seed, counter): any draw can be produced independently of any
// other, which makes shot generation order-free, shardable, and exactly
// reproducible. The standard library distributions are deliberately not used
// anywhere in the simulator; their output is implementation-defined.
inline std::array<uint32_t, 4> philox_block(uint64_t seed, uint64_t shot, uint32_t lane,
                                            uint32_t stream) {
  uint32_t c0 = static_cast<uint32_t>(shot);
  uint32_t c1 = static_cast<uint32_t>(shot >> 32);
  uint32_t c2 = lane;
  uint32_t c3 = stream;
  uint32_t k0 = static_cast<uint32_t>(seed);
  uint32_t k1 = static_cast<uint32_t>(seed >> 32);
  for (int round = 0; round < 10; round++) {
    uint64_t p0 = 0xD2511F53ull * c0;
    uint64_t p1 = 0xCD9E8D57ull * c2;
    uint32_t hi0 = static_cast<uint32_t>(p0 >> 32);
    uint32_t lo0 = static_cast<uint32_t>(p0);
    uint32_t hi1 = static_cast<uint32_t>(p1 >> 32);
    uint32_t lo1 = static_cast<uint32_t>(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += 0x9E3779B9u;
    k1 += 0xBB67AE85u;
  }
  return {c0, c1, c2, c3};
}

// Uniform double in [0, 1) from the block's first two words.
inline double philox_uniform(uint64_t seed, uint64_t shot, uint32_t lane, uint32_t stream) {
  auto b = philox_block(seed, shot, lane, stream);
  uint64_t bits = (static_cast<uint64_t>(b[1]) << 32) | b[0];
  return static_cast<double>(bits >> 11) * 0x1p-53;
}

// Standard normal via Box-Muller on one block. u1 lands in (0, 1] so the log
// is always finite.
inline double philox_gaussian(uint64_t seed, uint64_t shot, uint32_t lane, uint32_t stream) {
  auto b = philox_block(seed, shot, lane, stream);
  uint64_t w1 = (static_cast<uint64_t>(b[1]) << 32) | b[0];
  uint64_t w2 = (static_cast<uint64_t>(b[3]) << 32) | b[2];
  double u1 = static_cast<double>((w1 >> 11) + 1) * 0x1p-53;
  double u2 = static_cast<double>(w2 >> 11) * 0x1p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

}  // namespace qmit

#endif  // QMIT_RNG_HPP
