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

// Reference grid kernel. Every operation here is mirrored lane-for-lane by
// the vector variants; see the contract in grid_kernels.hpp before touching
// the order of any floating-point operation.

#include <algorithm>
#include <bit>
#include <cmath>

#include "qmit/simd/grid_kernels.hpp"

namespace qmit::simd {

namespace {

constexpr uint64_t kMantissaMask = 0x000FFFFFFFFFFFFFull;
constexpr uint64_t kOneBits = 0x3FF0000000000000ull;  // bit pattern of 1.0

// Multiplies the (mantissa, exponent) lane by a positive normal factor and
// renormalizes the mantissa to [1, 2). The exponent move is exact.
inline void mul_renorm(double &v, int64_t &e, double factor) {
  uint64_t bits = std::bit_cast<uint64_t>(v * factor);
  e += static_cast<int64_t>(bits >> 52) - 1023;
  v = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);
}

void grid_accumulate_scalar(double *v, int64_t *e, const double *u, size_t n,
                            const GridTask *tasks, size_t n_tasks) {
  for (size_t t = 0; t < n_tasks; t++) {
    const GridTask &task = tasks[t];
    if (task.weight == 1) {
      for (size_t k = 0; k < n; k++) {
        double base = std::max(std::fma(task.slope, u[k], task.intercept), task.floor_value);
        mul_renorm(v[k], e[k], base);
      }
      continue;
    }

    // v[k] *= base^weight by binary square-and-multiply on the split
    // (mantissa, exponent) form. b stays in [1, 2), so every product below
    // is inside [1, 4): no rounding surprises, no range excursions.
    for (size_t k = 0; k < n; k++) {
      double base = std::max(std::fma(task.slope, u[k], task.intercept), task.floor_value);
      uint64_t bits = std::bit_cast<uint64_t>(base);
      int64_t be = static_cast<int64_t>(bits >> 52) - 1023;
      double b = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);
      uint64_t remaining = task.weight;
      while (true) {
        if (remaining & 1) {
          mul_renorm(v[k], e[k], b);
          e[k] += be;
        }
        remaining >>= 1;
        if (remaining == 0) {
          break;
        }
        uint64_t sq = std::bit_cast<uint64_t>(b * b);
        be += be + (static_cast<int64_t>(sq >> 52) - 1023);
        b = std::bit_cast<double>((sq & kMantissaMask) | kOneBits);
      }
    }
  }
}

}  // namespace

const KernelSet &scalar_kernels() {
  static const KernelSet kernels{"scalar", &grid_accumulate_scalar};
  return kernels;
}

}  // namespace qmit::simd
