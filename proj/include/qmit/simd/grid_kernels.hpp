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

#ifndef QMIT_SIMD_GRID_KERNELS_HPP
#define QMIT_SIMD_GRID_KERNELS_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qmit::simd {

// One multiplicative factor of a pair posterior, evaluated on the whole grid:
//   base(u) = max(slope * u + intercept, floor_value)
// is multiplied into every grid point `weight` times. The caller pre-scales
// slope/intercept/floor_value by a common power of two per task and accounts
// for those powers separately; the kernel only sees bases that are normal
// doubles: every base(u) for u in [0, 1] must lie in [2^-1000, 2^1022].
struct GridTask {
  double slope = 0.0;
  double intercept = 0.0;
  double floor_value = 0.0;  // must be > 0
  uint64_t weight = 1;       // must be >= 1
};

// Multiplies every grid value v[k] (k < n) by prod_t base_t(u[k])^weight_t.
//
// Number representation: each lane carries its own binary exponent. On
// return the mathematical product equals v[k] * 2^(e[k]) with v[k] in
// [1, 2). After every multiply the kernel moves the exponent field of v[k]
// into e[k] and restores the mantissa to [1, 2); the move is an integer
// bit-field operation with no rounding, so lanes can never overflow,
// underflow, or flush to zero no matter how far apart their running
// products drift. Products at different lanes therefore compare exactly:
// lane x holds a larger product than lane y iff
// (e[x], v[x]) > (e[y], v[y]) lexicographically.
//
// Normative evaluation order, identical in all variants so that results are
// bitwise equal lane by lane (fma, max, multiply, and the exponent moves
// are all exactly-rounded or exact, so instruction set does not matter):
//   - per task, base = max(fma(slope, u[k], intercept), floor_value);
//   - weight == 1: one multiply, then an exponent move;
//   - weight > 1: base is split into mantissa and exponent, then raised by
//     binary square-and-multiply, renormalizing after every squaring and
//     every multiply so intermediates stay inside [1, 4).
//
// Callers must initialize v[k] = 1.0 and e[k] = 0.
using GridAccumulateFn = void (*)(double *v, int64_t *e, const double *u, size_t n,
                                  const GridTask *tasks, size_t n_tasks);

struct KernelSet {
  const char *name;
  GridAccumulateFn grid_accumulate;
};

// Portable reference implementation; the definition of correct behavior.
const KernelSet &scalar_kernels();

// Kernel set selected for this process: the QMIT_KERNEL environment variable
// if set (unknown/unsupported names fail hard), otherwise the best variant
// the CPU supports.
const KernelSet &active_kernels();

// Forces a specific kernel set (tests); nullptr restores automatic choice.
void set_active_kernels(const KernelSet *kernels);

// Named lookup: "scalar", "avx2", "neon". Returns nullptr when the variant
// was not compiled in or the CPU lacks the required instructions.
const KernelSet *kernel_set_by_name(std::string_view name);

std::vector<std::string> available_kernel_names();

}  // namespace qmit::simd

#endif  // QMIT_SIMD_GRID_KERNELS_HPP
