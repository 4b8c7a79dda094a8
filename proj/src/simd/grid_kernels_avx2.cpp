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

// AVX2+FMA grid kernel. Compiled with -mavx2 -mfma for this translation unit
// only; selected at runtime by dispatch. Must stay a lane-for-lane mirror of
// grid_kernels_scalar.cpp: same operations in the same order per lane, so
// that outputs are bitwise identical to the reference.

#include <immintrin.h>

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

struct RenormConstants {
  __m256i mant_mask = _mm256_set1_epi64x(static_cast<long long>(kMantissaMask));
  __m256i one_bits = _mm256_set1_epi64x(static_cast<long long>(kOneBits));
  __m256i bias = _mm256_set1_epi64x(1023);
};

// (v, e) *= factor with the exponent field moved into e; see the scalar
// reference. Exponent arithmetic is integer SIMD, exact by construction.
inline void mul_renorm_pd(__m256d &v, __m256i &e, __m256d factor, const RenormConstants &c) {
  __m256i bits = _mm256_castpd_si256(_mm256_mul_pd(v, factor));
  e = _mm256_add_epi64(e, _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), c.bias));
  v = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, c.mant_mask), c.one_bits));
}

void grid_accumulate_avx2(double *v, int64_t *e, const double *u, size_t n,
                          const GridTask *tasks, size_t n_tasks) {
  const RenormConstants c;
  for (size_t t = 0; t < n_tasks; t++) {
    const GridTask &task = tasks[t];
    __m256d slope = _mm256_set1_pd(task.slope);
    __m256d icept = _mm256_set1_pd(task.intercept);
    __m256d floor_v = _mm256_set1_pd(task.floor_value);

    if (task.weight == 1) {
      size_t k = 0;
      for (; k + 4 <= n; k += 4) {
        __m256d base =
            _mm256_max_pd(_mm256_fmadd_pd(slope, _mm256_loadu_pd(u + k), icept), floor_v);
        __m256d vv = _mm256_loadu_pd(v + k);
        __m256i ee = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(e + k));
        mul_renorm_pd(vv, ee, base, c);
        _mm256_storeu_pd(v + k, vv);
        _mm256_storeu_si256(reinterpret_cast<__m256i *>(e + k), ee);
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
    for (; k + 4 <= n; k += 4) {
      __m256d base =
          _mm256_max_pd(_mm256_fmadd_pd(slope, _mm256_loadu_pd(u + k), icept), floor_v);
      __m256i bb = _mm256_castpd_si256(base);
      __m256i be = _mm256_sub_epi64(_mm256_srli_epi64(bb, 52), c.bias);
      __m256d b = _mm256_castsi256_pd(
          _mm256_or_si256(_mm256_and_si256(bb, c.mant_mask), c.one_bits));
      __m256d vv = _mm256_loadu_pd(v + k);
      __m256i ee = _mm256_loadu_si256(reinterpret_cast<const __m256i *>(e + k));
      uint64_t remaining = task.weight;
      while (true) {
        if (remaining & 1) {
          mul_renorm_pd(vv, ee, b, c);
          ee = _mm256_add_epi64(ee, be);
        }
        remaining >>= 1;
        if (remaining == 0) {
          break;
        }
        __m256i sq = _mm256_castpd_si256(_mm256_mul_pd(b, b));
        be = _mm256_add_epi64(_mm256_add_epi64(be, be),
                              _mm256_sub_epi64(_mm256_srli_epi64(sq, 52), c.bias));
        b = _mm256_castsi256_pd(
            _mm256_or_si256(_mm256_and_si256(sq, c.mant_mask), c.one_bits));
      }
      _mm256_storeu_pd(v + k, vv);
      _mm256_storeu_si256(reinterpret_cast<__m256i *>(e + k), ee);
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

const KernelSet &avx2_kernels() {
  static const KernelSet kernels{"avx2", &grid_accumulate_avx2};
  return kernels;
}

}  // namespace qmit::simd
