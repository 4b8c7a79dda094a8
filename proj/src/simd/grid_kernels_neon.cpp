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

// NEON (aarch64) grid kernel. Lane-for-lane mirror of the scalar reference;
// see grid_kernels_scalar.cpp and the contract in grid_kernels.hpp.

#include <arm_neon.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "qmit/simd/grid_kernels.hpp"

namespace qmit::simd {

namespace {

constexpr uint64_t kMantissaMask = 0x000FFFFFFFFFFFFFull;
constexpr uint64_t kOneBits = 0x3FF0000000000000ull;

inline void mul_renorm(double &v, int64_t &e, double factor) {
  uint64_t bits = std::bit_cast<uint64_t>(v * factor);
  e += static_cast<int64_t>(bits >> 52) - 1023;
  v = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);
}

// (v, e) *= factor with the exponent field moved into e; see the scalar
// reference. Exponent arithmetic is integer SIMD, exact by construction.
inline void mul_renorm_f64(float64x2_t &v, int64x2_t &e, float64x2_t factor) {
  uint64x2_t bits = vreinterpretq_u64_f64(vmulq_f64(v, factor));
  e = vaddq_s64(e, vsubq_s64(vreinterpretq_s64_u64(vshrq_n_u64(bits, 52)), vdupq_n_s64(1023)));
  v = vreinterpretq_f64_u64(
      vorrq_u64(vandq_u64(bits, vdupq_n_u64(kMantissaMask)), vdupq_n_u64(kOneBits)));
}

void grid_accumulate_neon(double *v, int64_t *e, const double *u, size_t n, const GridTask *tasks,
                          size_t n_tasks) {
  for (size_t t = 0; t < n_tasks; t++) {
    const GridTask &task = tasks[t];
    float64x2_t slope = vdupq_n_f64(task.slope);
    float64x2_t icept = vdupq_n_f64(task.intercept);
    float64x2_t floor_v = vdupq_n_f64(task.floor_value);

    if (task.weight == 1) {
      size_t k = 0;
      for (; k + 2 <= n; k += 2) {
        // vfmaq(a, b, c) = a + b*c, so the accumulator carries the intercept.
        float64x2_t base = vmaxq_f64(vfmaq_f64(icept, slope, vld1q_f64(u + k)), floor_v);
        float64x2_t vv = vld1q_f64(v + k);
        int64x2_t ee = vld1q_s64(e + k);
        mul_renorm_f64(vv, ee, base);
        vst1q_f64(v + k, vv);
        vst1q_s64(e + k, ee);
      }
      for (; k < n; k++) {
        double base = std::max(std::fma(task.slope, u[k], task.intercept), task.floor_value);
        mul_renorm(v[k], e[k], base);
      }
      continue;
    }

    // Square-and-multiply on the split (mantissa, exponent) form; the chunk
    // schedule depends only on the shared weight, so all lanes take the
    // same branches.
    size_t k = 0;
    for (; k + 2 <= n; k += 2) {
      float64x2_t base = vmaxq_f64(vfmaq_f64(icept, slope, vld1q_f64(u + k)), floor_v);
      uint64x2_t bb = vreinterpretq_u64_f64(base);
      int64x2_t be =
          vsubq_s64(vreinterpretq_s64_u64(vshrq_n_u64(bb, 52)), vdupq_n_s64(1023));
      float64x2_t b = vreinterpretq_f64_u64(
          vorrq_u64(vandq_u64(bb, vdupq_n_u64(kMantissaMask)), vdupq_n_u64(kOneBits)));
      float64x2_t vv = vld1q_f64(v + k);
      int64x2_t ee = vld1q_s64(e + k);
      uint64_t remaining = task.weight;
      while (true) {
        if (remaining & 1) {
          mul_renorm_f64(vv, ee, b);
          ee = vaddq_s64(ee, be);
        }
        remaining >>= 1;
        if (remaining == 0) {
          break;
        }
        uint64x2_t sq = vreinterpretq_u64_f64(vmulq_f64(b, b));
        be = vaddq_s64(vaddq_s64(be, be),
                       vsubq_s64(vreinterpretq_s64_u64(vshrq_n_u64(sq, 52)), vdupq_n_s64(1023)));
        b = vreinterpretq_f64_u64(
            vorrq_u64(vandq_u64(sq, vdupq_n_u64(kMantissaMask)), vdupq_n_u64(kOneBits)));
      }
      vst1q_f64(v + k, vv);
      vst1q_s64(e + k, ee);
    }
    for (; k < n; k++) {
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

const KernelSet &neon_kernels() {
  static const KernelSet kernels{"neon", &grid_accumulate_neon};
  return kernels;
}

}  // namespace qmit::simd
