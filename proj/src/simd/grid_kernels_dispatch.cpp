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

#include <atomic>
#include <cstdlib>

#include "qmit/errors.hpp"
#include "qmit/simd/grid_kernels.hpp"

namespace qmit::simd {

#ifdef QMIT_BUILD_AVX2
const KernelSet &avx2_kernels();  // defined in grid_kernels_avx2.cpp

static bool cpu_has_avx2() {
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

#ifdef QMIT_BUILD_NEON
const KernelSet &neon_kernels();  // defined in grid_kernels_neon.cpp
#endif

const KernelSet *kernel_set_by_name(std::string_view name) {
  if (name == "scalar") {
    return &scalar_kernels();
  }
#ifdef QMIT_BUILD_AVX2
  if (name == "avx2" && cpu_has_avx2()) {
    return &avx2_kernels();
  }
#endif
#ifdef QMIT_BUILD_NEON
  if (name == "neon") {
    return &neon_kernels();
  }
#endif
  return nullptr;
}

std::vector<std::string> available_kernel_names() {
  std::vector<std::string> names{"scalar"};
#ifdef QMIT_BUILD_AVX2
  if (cpu_has_avx2()) {
    names.emplace_back("avx2");
  }
#endif
#ifdef QMIT_BUILD_NEON
  names.emplace_back("neon");
#endif
  return names;
}

namespace {

std::atomic<const KernelSet *> g_forced{nullptr};

const KernelSet &auto_kernels() {
  static const KernelSet &chosen = []() -> const KernelSet & {
    if (const char *env = std::getenv("QMIT_KERNEL"); env != nullptr && *env != '\0') {
      const KernelSet *named = kernel_set_by_name(env);
      if (named == nullptr) {
        std::string names;
        for (const auto &n : available_kernel_names()) {
          names += names.empty() ? n : ", " + n;
        }
        throw ContractViolation("QMIT_KERNEL='" + std::string(env) +
                                "' is not available on this machine; available: " + names);
      }
      return *named;
    }
#ifdef QMIT_BUILD_AVX2
    if (cpu_has_avx2()) {
      return avx2_kernels();
    }
#endif
#ifdef QMIT_BUILD_NEON
    return neon_kernels();
#endif
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace

const KernelSet &active_kernels() {
  if (const KernelSet *forced = g_forced.load(std::memory_order_relaxed)) {
    return *forced;
  }
  return auto_kernels();
}

void set_active_kernels(const KernelSet *kernels) {
  g_forced.store(kernels, std::memory_order_relaxed);
}

}  // namespace qmit::simd
